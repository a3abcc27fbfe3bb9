#include <random>

#include "doctest.h"
#include "rfloer/fullrfh.hpp"

using namespace rfloer;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error");
    return ErrorKind::ParseError;
}

FullRFHValue qm(FullKind kind, long m) {
    FullRFHValue v;
    v.kind = kind;
    v.m = m;
    return v;
}

FullRFHValue field(unsigned long p) {
    FullRFHValue v;
    v.kind = FullKind::Field;
    v.dimension = 1;
    v.p = p;
    return v;
}

FullRFHValue integers() {
    FullRFHValue v;
    v.kind = FullKind::Presentation;
    v.presentation = ZModulePresentation::free(1);
    return v;
}

// boundary m / (3 - m) for the projective plane
Rat boundary(long m) { return Rat(m, 3 - m); }

}  // namespace

TEST_CASE("coefficient parsing") {
    CHECK_FALSE(Coefficients::parse("z").field());
    CHECK(Coefficients::parse("fp:7").p == 7);
    CHECK(Coefficients::parse("fp:7").name() == "fp:7");
    CHECK(kind_of([] { Coefficients::parse("fp:4"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { Coefficients::parse("q"); }) == ErrorKind::ParseError);
}

TEST_CASE("projective plane regime table over Z") {
    BaseModel cp2 = cp_model(2);
    struct Row {
        long m;
        Rat tau;
        FullRFHValue odd;
    };
    std::vector<Row> rows{
        {1, Rat(1, 4), {}},
        {1, Rat(1, 2), integers()},
        {1, Rat(1), {}},
        {1, Rat(5), {}},
        {2, Rat(1), {}},
        {2, Rat(2), qm(FullKind::QmTilde, 2)},
        {2, Rat(3), qm(FullKind::Qm, 2)},
        {2, Rat(100), qm(FullKind::Qm, 2)},
        {3, Rat(1, 3), {}},
        {3, Rat(100), {}},
        {4, Rat(7), {}},
    };
    for (const auto& r : rows) {
        FullRFHResult res = full_rfh(cp2, r.m, r.tau, {-6, 6});
        for (long d = -6; d <= 6; ++d) {
            const FullRFHValue& v = res.at(d);
            if (d % 2 == 0) CHECK(v.kind == FullKind::Zero);
            else CHECK(v == r.odd);
        }
    }
}

TEST_CASE("field coefficients see only the boundary") {
    BaseModel cp2 = cp_model(2);
    Coefficients f5 = Coefficients::parse("fp:5");
    for (long m = 1; m <= 2; ++m) {
        CHECK(full_rfh(cp2, m, boundary(m), {1, 1}, f5).at(1) == field(5));
        CHECK(full_rfh(cp2, m, boundary(m) * 2, {1, 1}, f5).at(1).kind == FullKind::Zero);
        CHECK(full_rfh(cp2, m, boundary(m) / 2, {1, 1}, f5).at(1).kind == FullKind::Zero);
        CHECK(full_rfh(cp2, m, boundary(m), {0, 0}, f5).at(0).kind == FullKind::Zero);
    }
    // characteristic dividing m kills the tower
    CHECK(full_rfh(cp2, 2, Rat(2), {1, 1}, Coefficients::parse("fp:2")).at(1).kind == FullKind::Zero);
}

TEST_CASE("results depend on tau only through the regime") {
    std::mt19937_64 rng(7);
    BaseModel cp2 = cp_model(2);
    for (long m = 1; m <= 4; ++m) {
        FullRFHResult ref_low = full_rfh(cp2, m, Rat(1, 1000), {-3, 3});
        FullRFHResult ref_high = full_rfh(cp2, m, Rat(1000), {-3, 3});
        for (int trial = 0; trial < 20; ++trial) {
            Rat tau(static_cast<long>(1 + rng() % 400), static_cast<long>(1 + rng() % 60));
            tau.canonicalize();
            FullRFHResult r = full_rfh(cp2, m, tau, {-3, 3});
            if (r.regime == ref_low.regime) CHECK(r.values == ref_low.values);
            if (r.regime == ref_high.regime) CHECK(r.values == ref_high.values);
            for (long d = -3; d <= 1; ++d) CHECK(r.at(d) == r.at(d + 2));
        }
    }
}

TEST_CASE("other bases") {
    for (long d = -2; d <= 3; ++d) CHECK(full_rfh(surface_model(1), 2, Rat(1), {-2, 3}).at(d).kind == FullKind::Zero);
    CHECK(full_rfh(point_model(), 1, Rat(1), {0, 1}).at(0).kind == FullKind::Zero);
    // CP^3 with m = 1 at its boundary tau = 1/3
    FullRFHResult r = full_rfh(cp_model(3), 1, Rat(1, 3), {-2, 3});
    CHECK(r.regime == CompletionRegime::Finite);
    int nonzero = 0;
    for (long d = -2; d <= 3; ++d) nonzero += r.at(d).kind != FullKind::Zero;
    CHECK(nonzero == 3);
    CHECK(kind_of([] { full_rfh(cp_model(2), 0, Rat(1), {0, 1}); }) == ErrorKind::InvalidModel);
    CHECK(kind_of([] { full_rfh(cp_model(2), 1, Rat(0), {0, 1}); }) == ErrorKind::NonPositiveTau);
}

TEST_CASE("JSON forms") {
    FullRFHResult r = full_rfh(cp_model(2), 2, Rat(3), {0, 1});
    auto j = r.to_json();
    CHECK(j[0]["degree"] == 0);
    CHECK(j[0]["group"] == "0");
    CHECK(j[1]["group"]["Qm"] == 2);
    CHECK(qm(FullKind::QmTilde, 3).to_json()["QmTilde"] == 3);
    CHECK(integers().to_json()["free"] == 1);
    CHECK(field(5).to_json()["free"] == 1);
    CHECK(qm(FullKind::Qm, 2).to_string() == "Q_2");
    CHECK(qm(FullKind::QmTilde, 2).to_string() == "Q~_2");
    CHECK(field(3).to_string() == "F_3");
}

TEST_CASE("id + Psi is injective in every regime") {
    BaseModel cp2 = cp_model(2);
    for (long m = 1; m <= 3; ++m) {
        std::vector<Rat> taus{Rat(1, 3), Rat(1), Rat(100)};
        if (m < 3) taus = {boundary(m) / 2, boundary(m), boundary(m) * 3};
        for (const Rat& tau : taus) {
            DeltaInjectivityReport rep = delta_injectivity(cp2, m, tau, 8, {-6, 6});
            CHECK(rep.ok());
            CHECK(rep.degrees.size() == 13);
        }
    }
    // zero cap: id alone
    CHECK(delta_injectivity(surface_model(1), 2, Rat(1), 1, {-2, 2}).ok());
    CHECK(kind_of([&] { delta_injectivity(cp2, 2, Rat(1), 2, {0, 0}); }) == ErrorKind::TruncationTooNarrow);
}

TEST_CASE("Psi alone has a cokernel for m >= 2") {
    BaseModel cp2 = cp_model(2);
    for (long m = 1; m <= 4; ++m) {
        CapTower t = cap_tower(cp2, m, 1, -5, 5);
        ZModulePresentation c = cokernel(psi_block(t, 4));
        if (m == 1) CHECK(c.is_zero());
        else CHECK_FALSE(c.is_zero());
        CHECK(delta_block(t, 4).cols() - rank(delta_block(t, 4)) == 0);
    }
}

TEST_CASE("the Q_m class map kills the image of id + Psi") {
    std::mt19937_64 rng(13);
    BaseModel cp2 = cp_model(2);
    for (long m = 2; m <= 5; ++m) {
        CapTower t = cap_tower(cp2, m, 1, -6, 6);
        QmClassMap cls = qm_class_map(t, m);
        CHECK_FALSE(cls({{0, 1}}).is_zero());
        for (int trial = 0; trial < 50; ++trial) {
            CoeffMap x;
            for (int i = 0; i < 4; ++i) x[static_cast<long>(rng() % 12) - 5] += static_cast<long>(rng() % 21) - 10;
            CHECK(cls(apply_delta(t, x)).is_zero());
        }
    }
    CHECK(kind_of([&] { qm_class_map(cap_tower(cp2, 2, 0, -2, 2), 2); }) == ErrorKind::InvalidModel);
}
