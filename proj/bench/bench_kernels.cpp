#include <random>

#include <benchmark/benchmark.h>

#include "rfloer/basemodel.hpp"
#include "rfloer/chaincplx.hpp"

using namespace rfloer;

namespace {

std::vector<IntMatrix> random_batch(std::size_t count, std::size_t n) {
    std::mt19937_64 rng(5);
    std::vector<IntMatrix> out;
    for (std::size_t i = 0; i < count; ++i) {
        IntMatrix a(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) a(r, c) = static_cast<long>(rng() % 19) - 9;
        out.push_back(a);
    }
    return out;
}

GradedComplex cone_of(long n, long m, long width) {
    BaseModel model = cp_model(n);
    FloerComplex fc = build_fc(model, Window::all(), DegreeRange{-width, width});
    return mapping_cone(cap_map(model, m, fc));
}

void BM_SnfBatch(benchmark::State& s) {
    auto batch = random_batch(64, static_cast<std::size_t>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(smith_normal_form_batch(batch));
}

void BM_SnfBatchSerial(benchmark::State& s) {
    auto batch = random_batch(64, static_cast<std::size_t>(s.range(0)));
    for (auto _ : s) benchmark::DoNotOptimize(smith_normal_form_batch_serial(batch));
}

void BM_HomologyTable(benchmark::State& s) {
    GradedComplex c = cone_of(3, 4, s.range(0));
    DegreeRange r{-s.range(0) + 3, s.range(0) - 2};
    for (auto _ : s) benchmark::DoNotOptimize(homology_table(c, r));
}

void BM_HomologyTableSerial(benchmark::State& s) {
    GradedComplex c = cone_of(3, 4, s.range(0));
    DegreeRange r{-s.range(0) + 3, s.range(0) - 2};
    for (auto _ : s) benchmark::DoNotOptimize(homology_table_serial(c, r));
}

}  // namespace

BENCHMARK(BM_SnfBatch)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_SnfBatchSerial)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_HomologyTable)->Arg(16)->Arg(64);
BENCHMARK(BM_HomologyTableSerial)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
