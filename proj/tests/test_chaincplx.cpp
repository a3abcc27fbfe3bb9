#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rfloer/basemodel.hpp"
#include "rfloer/chaincplx.hpp"

using namespace rfloer;

namespace {

// Z in every degree of [lo, hi], zero differential
GradedComplex free_line(long lo, long hi) {
    GradedComplex c(lo, hi);
    for (long d = lo; d <= hi; ++d) c.set_basis(d, {"e" + std::to_string(d)});
    return c;
}

ChainMap scalar_map(const GradedComplex& c, long s) {
    ChainMap f{c, c, -2, {}};
    for (long d = c.lo(); d <= c.hi(); ++d) {
        IntMatrix a(c.rank(d - 2), c.rank(d));
        if (c.rank(d - 2) == 1 && c.rank(d) == 1) a(0, 0) = s;
        f.maps.push_back(a);
    }
    return f;
}

}  // namespace

TEST_CASE("graded complex bookkeeping") {
    GradedComplex c = free_line(0, 3);
    CHECK(c.rank(2) == 1);
    CHECK(c.rank(7) == 0);
    CHECK(c.boundary(9).rows() == 0);
    CHECK(c.boundary(2).rows() == 1);
    CHECK(c.index_of(2, "e2") == 0);
    CHECK(c.index_of(2, "e1") == -1);
    CHECK_THROWS_AS(c.set_boundary(2, IntMatrix(2, 1)), Error);
    CHECK_THROWS_AS(c.set_basis(5, {"x"}), Error);
    auto j = c.to_json();
    CHECK(j["degrees"][0] == 0);
    CHECK(j["basis"]["3"][0] == "e3");
}

TEST_CASE("boundary check finds the first bad degree") {
    GradedComplex c = free_line(0, 2);
    c.set_boundary(1, IntMatrix{{1}});
    c.set_boundary(2, IntMatrix{{1}});
    BoundaryCheck b = verify_boundary(c);
    CHECK_FALSE(b.ok);
    CHECK(b.first_bad_degree == 2);
    c.set_boundary(2, IntMatrix{{0}});
    CHECK(verify_boundary(c).ok);
}

TEST_CASE("cone of the zero map splits") {
    GradedComplex c = free_line(0, 4);
    GradedComplex cone = mapping_cone(zero_map(c, -2));
    CHECK(verify_boundary(cone).ok);
    for (long d = 1; d <= 4; ++d) CHECK(homology_at(cone, d) == ZModulePresentation::free(2));
    CHECK(homology_at(cone, 0) == ZModulePresentation::free(1));
    CHECK(homology_at(cone, 5) == ZModulePresentation::free(1));
}

TEST_CASE("cone of multiplication by m") {
    GradedComplex c = free_line(-6, 6);
    for (long m : {1L, 2L, 7L}) {
        GradedComplex cone = mapping_cone(scalar_map(c, m));
        for (long d = -3; d <= 5; ++d) {
            // H_d(cone) = coker(m : C_{d+1} -> C_{d-1}) plus ker(m : C_d -> C_{d-2})
            ZModulePresentation expect = m == 1 ? ZModulePresentation{} : ZModulePresentation::cyclic(m);
            CHECK(homology_at(cone, d) == expect);
        }
    }
}

TEST_CASE("cones need chain maps of degree -2") {
    GradedComplex c = free_line(0, 3);
    c.set_boundary(1, IntMatrix{{2}});
    ChainMap bad = scalar_map(c, 1);
    // d psi = psi d fails at degree 3: psi(e3) = e1, d(e1) = 2 e0, but psi(d e3) = 0
    try {
        mapping_cone(bad);
        FAIL("expected NotAChainMap");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotAChainMap);
    }
    ChainMap shifted = zero_map(c, -1);
    CHECK_THROWS_AS(mapping_cone(shifted), Error);
}

TEST_CASE("parallel and serial homology tables agree") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        ChainMap f = oracle::random_chain_map(rng, 0, 10);
        GradedComplex cone = mapping_cone(f);
        DegreeRange r{cone.lo(), cone.hi()};
        CHECK(homology_table(cone, r) == homology_table_serial(cone, r));
    }
}

TEST_CASE("homology tables refuse untrusted degrees") {
    GradedComplex c = free_line(0, 6);
    c.set_margin(2);
    CHECK_NOTHROW(homology_table(c, {2, 4}));
    try {
        homology_table(c, {1, 4});
        FAIL("expected DegreeOutOfRange");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegreeOutOfRange);
    }
}

TEST_CASE("random chain maps: homology matches the oracle and the sequence is exact") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 60; ++trial) {
        ChainMap f = oracle::random_chain_map(rng, -2, 9);
        REQUIRE_FALSE(f.commutation_failure());
        REQUIRE(verify_boundary(f.source).ok);
        for (long d = f.source.lo(); d <= f.source.hi(); ++d)
            CHECK(homology_at(f.source, d) == oracle::homology(f.source.boundary(d), f.source.boundary(d + 1)));
        LongExactSequence les = cone_les(f, {0, 9});
        ExactnessReport rep = verify_exactness(les, {0, 9});
        CHECK(rep.ok);
        CHECK(rep.nodes.size() == 3 * 10 - 2);
    }
}

TEST_CASE("exactness detects a broken sequence") {
    GradedComplex c = free_line(-4, 6);
    LongExactSequence les = cone_les(scalar_map(c, 3), {0, 4});
    // replace the map H(C) -> H(C) by zero: the node after it is no longer exact
    les.nodes[1].to_next = IntMatrix(1, 1);
    CHECK_FALSE(verify_exactness(les, {0, 4}).ok);
    CHECK_THROWS_AS(verify_exactness(les, {0, 9}), Error);
}

TEST_CASE("composition of chain maps") {
    GradedComplex c = free_line(0, 4);
    ChainMap id{c, c, 0, {}};
    ChainMap two{c, c, 0, {}};
    for (long d = 0; d <= 4; ++d) {
        id.maps.push_back(IntMatrix::identity(1));
        two.maps.push_back(IntMatrix::scalar(1, 2));
    }
    ChainMap h = compose(two, compose(two, id));
    CHECK(h.at(3) == IntMatrix::scalar(1, 4));
}

TEST_CASE("cone homology is 2-periodic for a periodic complex") {
    // the Floer complex of cp:2 repeats every 6 degrees and the cap commutes with the shift
    BaseModel m = cp_model(2);
    FloerComplex fc = build_fc(m, Window::all(), DegreeRange{-14, 14});
    GradedComplex cone = mapping_cone(cap_map(m, 2, fc));
    for (long d = -10; d <= 9; ++d) CHECK(homology_at(cone, d) == homology_at(cone, d + 2));
}
