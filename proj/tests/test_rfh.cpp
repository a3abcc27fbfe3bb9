#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "rfloer/rfh.hpp"

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

std::vector<RFHGenerator> enum_w(const BaseModel& model, long m, const Rat& tau, DegreeRange r, std::optional<long> w) {
    EnumerateOptions o;
    o.degrees = r;
    o.winding = w;
    return enumerate(model, m, tau, o);
}

}  // namespace

TEST_CASE("index and action identities hold for every generator") {
    std::mt19937_64 rng(101);
    std::vector<BaseModel> models{cp_model(1), cp_model(2), cp_model(3), surface_model(1), point_model()};
    for (int trial = 0; trial < 200; ++trial) {
        const BaseModel& model = models[rng() % models.size()];
        long m = 1 + static_cast<long>(rng() % 6);
        Rat tau(static_cast<long>(1 + rng() % 20), static_cast<long>(1 + rng() % 7));
        tau.canonicalize();
        EnumerateOptions o;
        o.degrees = DegreeRange{-6, 6};
        o.k_range = std::make_pair(-3L, 3L);
        for (const auto& g : enumerate(model, m, tau, o)) {
            RFHData r = rfh_data(model, m, tau, g);
            CHECK(r.mu == -2 * r.winding + r.mu_fh);
            CHECK((1 + tau) * r.a_f == tau / Rat(m) * Rat(r.winding) + r.action);
            CHECK(r.eta * Rat(m) == Rat(-g.ell));
            CHECK(r.mu_h == rfh_degree(model, m, g));
        }
    }
}

TEST_CASE("projective plane index formula") {
    BaseModel cp2 = cp_model(2);
    for (long m = 1; m <= 5; ++m)
        for (long ell = -4; ell <= 4; ++ell)
            for (long k = -3; k <= 3; ++k)
                for (std::size_t i = 0; i < 3; ++i) {
                    long expect = -2 * ell - 2 * (3 - m) * k + 2 * static_cast<long>(i) - 2;
                    CHECK(rfh_degree(cp2, m, {i, ell, k, Flag::Check}) == expect);
                    CHECK(rfh_degree(cp2, m, {i, ell, k, Flag::Hat}) == expect + 1);
                }
}

TEST_CASE("winding zero generators for m = 1 project onto Floer generators") {
    BaseModel cp2 = cp_model(2);
    const Rat tau(2, 3);
    auto gens = enum_w(cp2, 1, tau, {-8, 8}, 0);
    CHECK_FALSE(gens.empty());
    for (const auto& g : gens) {
        CHECK(g.ell == g.k);
        RFHData r = rfh_data(cp2, 1, tau, g);
        CHECK(r.mu == r.mu_fh);
        CHECK(r.action == (1 + tau) * r.a_f);
    }
    // one hat and one check per Floer generator
    std::size_t fh = 0;
    FloerComplex fc = build_fc(cp2, Window::all(), DegreeRange{-9, 9});
    for (long d = -9; d <= 9; ++d) fh += fc.complex.rank(d);
    std::size_t checks = 0;
    for (const auto& g : enum_w(cp2, 1, tau, {-9, 9}, 0)) checks += g.flag == Flag::Check ? 1 : 0;
    CHECK(checks == fh);
}

TEST_CASE("enumeration order and determinism") {
    auto a = enum_w(cp_model(2), 2, Rat(1), {-5, 5}, 0);
    for (std::size_t i = 1; i < a.size(); ++i) {
        long d0 = rfh_degree(cp_model(2), 2, a[i - 1]), d1 = rfh_degree(cp_model(2), 2, a[i]);
        CHECK(d0 <= d1);
        if (d0 == d1) CHECK(a[i - 1].k <= a[i].k);
    }
    CHECK(a == enum_w(cp_model(2), 2, Rat(1), {-5, 5}, 0));
}

TEST_CASE("aspherical winding filter keeps ell = 0") {
    for (const auto& g : enum_w(surface_model(2), 3, Rat(1), {-4, 4}, 0)) {
        CHECK(g.ell == 0);
        CHECK(g.k == 0);
    }
    CHECK(enum_w(surface_model(2), 3, Rat(1), {-4, 4}, 0).size() == 12);
}

TEST_CASE("enumeration errors") {
    BaseModel cp2 = cp_model(2);
    CHECK(kind_of([&] { enumerate(cp2, 2, Rat(1), {}); }) == ErrorKind::UnboundedEnumeration);
    EnumerateOptions o;
    o.degrees = DegreeRange{-2, 2};
    CHECK(kind_of([&] { enumerate(cp2, 2, Rat(1), o); }) == ErrorKind::UnboundedEnumeration);
    o.window = Window{Rat(1), Rat(0)};
    CHECK(kind_of([&] { enumerate(cp2, 2, Rat(1), o); }) == ErrorKind::EmptyWindow);
    o.window = Window{Rat(-3), Rat(3)};
    CHECK(kind_of([&] { enumerate(cp2, 2, Rat(0), o); }) == ErrorKind::NonPositiveTau);
    // on the regime boundary the action is constant along each family
    CHECK(kind_of([&] { enumerate(cp2, 2, Rat(2), o); }) == ErrorKind::UnboundedEnumeration);
    CHECK_NOTHROW(enumerate(cp2, 2, Rat(1), o));
}

TEST_CASE("finite windows contain exactly the generators with action inside") {
    BaseModel cp2 = cp_model(2);
    EnumerateOptions o;
    o.degrees = DegreeRange{-6, 6};
    o.window = Window{Rat(-5, 2), Rat(7, 3)};
    auto in = enumerate(cp2, 2, Rat(1), o);
    std::set<RFHGenerator> got(in.begin(), in.end());
    for (long k = -30; k <= 30; ++k)
        for (long ell = -60; ell <= 60; ++ell)
            for (std::size_t q = 0; q < 3; ++q)
                for (Flag f : {Flag::Check, Flag::Hat}) {
                    RFHGenerator g{q, ell, k, f};
                    long d = rfh_degree(cp2, 2, g);
                    bool want = d >= -6 && d <= 6 && o.window.contains(rfh_data(cp2, 2, Rat(1), g).action);
                    CHECK(got.count(g) == (want ? 1u : 0u));
                }
}

TEST_CASE("zero winding homology of projective spaces") {
    for (long n : {1L, 2L, 3L})
        for (long m = 1; m <= 4; ++m) {
            auto h = rfh_w0(cp_model(n), m, Rat(1), {-6, 6});
            for (long d = -6; d <= 6; ++d) {
                // torsion Z_m sits in the degrees of parity n + 1
                bool torsion_degree = ((d - n - 1) % 2 + 2) % 2 == 0;
                ZModulePresentation expect = (torsion_degree && m > 1) ? ZModulePresentation::cyclic(m) : ZModulePresentation{};
                CHECK(h[static_cast<std::size_t>(d + 6)] == expect);
            }
        }
}

TEST_CASE("rfc_w0 agrees with the cone of the cap map") {
    std::vector<BaseModel> models{cp_model(1), cp_model(2), cp_model(3), surface_model(1), surface_model(2), point_model()};
    for (const auto& model : models)
        for (long m = 1; m <= 4; ++m) {
            DegreeRange r{-6, 6};
            auto a = rfh_w0(model, m, Rat(3, 2), r);
            GradedComplex cone = cap_cone(model, m, r);
            CHECK(a == homology_table(cone, r));
            // the relabeled generators are the cone generators
            RFComplex rc = rfc_w0(model, m, Rat(3, 2), Window::all(), {-5, 5});
            for (long d = -4; d <= 4; ++d) {
                std::multiset<std::string> x, y(cone.basis(d).begin(), cone.basis(d).end());
                for (const auto& g : rc.at(d)) x.insert(cone_label(model, g));
                CHECK(x == y);
            }
        }
}

TEST_CASE("surfaces recover the classical circle bundle") {
    for (long g : {1L, 2L})
        for (long m = 1; m <= 3; ++m) {
            auto h = rfh_w0(surface_model(g), m, Rat(1), {-1, 2});
            GradedComplex cells = oracle::circle_bundle_cells(g, m);
            auto gy = oracle::surface_gysin(g, m);
            for (long d = -1; d <= 2; ++d) {
                auto cellular = oracle::homology(cells.boundary(d + 1), cells.boundary(d + 2));
                CHECK(h[static_cast<std::size_t>(d + 1)] == cellular);
                CHECK(h[static_cast<std::size_t>(d + 1)] == gy[static_cast<std::size_t>(d + 1)]);
            }
            ZModulePresentation h1{static_cast<std::size_t>(2 * g), {}};
            if (m > 1) h1.torsion.push_back(Int(m));
            CHECK(h[0] == ZModulePresentation::free(1));
            CHECK(h[1] == h1);
            CHECK(h[2] == ZModulePresentation::free(static_cast<std::size_t>(2 * g)));
            CHECK(h[3] == ZModulePresentation::free(1));
        }
}

TEST_CASE("point model gives the cone of the zero map") {
    auto h = rfh_w0(point_model(), 1, Rat(1), {-3, 3});
    for (long d = -3; d <= 3; ++d)
        CHECK(h[static_cast<std::size_t>(d + 3)] == ((d == 0 || d == 1) ? ZModulePresentation::free(1) : ZModulePresentation{}));
}

TEST_CASE("Gysin sequences are exact") {
    for (long m = 1; m <= 5; ++m) {
        GysinResult g = gysin(cp_model(3), m, {-6, 6});
        CHECK(g.report.ok);
        CHECK_FALSE(g.report.nodes.empty());
        for (const auto& n : g.report.nodes) CHECK((n.label.rfind("RFH^{w0}_", 0) == 0 || n.label.rfind("FH_", 0) == 0));
    }
    CHECK(gysin(surface_model(2), 3, {-2, 3}).report.ok);
}

TEST_CASE("full boundary fixtures on the projective plane") {
    BaseModel cp2 = cp_model(2);
    FormalChain d = boundary_full(RFHGenerator{0, 3, 1, Flag::Check}, cp2, 2);
    FormalChain expect;
    add_term(expect, {0, 4, 1, Flag::Hat}, 1);
    add_term(expect, {2, 5, 2, Flag::Hat}, 2);
    CHECK(d == expect);
    FormalChain d1 = boundary_full(RFHGenerator{1, 0, 0, Flag::Check}, cp2, 3);
    FormalChain e1;
    add_term(e1, {1, 1, 0, Flag::Hat}, 1);
    add_term(e1, {0, 0, 0, Flag::Hat}, 3);
    CHECK(d1 == e1);
    CHECK(boundary_full(RFHGenerator{2, 7, -1, Flag::Hat}, cp2, 2).empty());
    CHECK(chain_to_string(cp2, d) == "hat:q0[l=4,k=1] + 2*hat:q2[l=5,k=2]");
    CHECK(kind_of([] { boundary_full(RFHGenerator{}, surface_model(1), 1); }) == ErrorKind::ConsecutiveIndexModel);
}

TEST_CASE("full boundary squares to zero and restricts to rfc_w0") {
    BaseModel cp2 = cp_model(2);
    for (long m = 1; m <= 3; ++m) {
        BoxComplex box = full_box_complex(cp2, m, 3, 6);
        CHECK(verify_boundary(box.complex).ok);
        // winding-preserving part: hat(i, l+1) has winding one more, the cap part keeps it
        RFComplex rc = rfc_w0(cp2, m, Rat(1), Window::all(), {-6, 6});
        for (long d = -5; d <= 6; ++d) {
            const auto& src = rc.at(d);
            const auto& tgt = rc.at(d - 1);
            for (std::size_t j = 0; j < src.size(); ++j) {
                FormalChain full = boundary_full(src[j], cp2, m);
                for (std::size_t i = 0; i < tgt.size(); ++i) {
                    auto it = full.find(tgt[i]);
                    Int want = it == full.end() ? Int(0) : it->second;
                    CHECK(rc.complex.boundary(d)(i, j) == want);
                }
                for (const auto& [t, x] : full) {
                    long w_src = rfh_data(cp2, m, Rat(1), src[j]).winding;
                    if (rfh_data(cp2, m, Rat(1), t).winding == w_src) {
                        bool listed = std::find(tgt.begin(), tgt.end(), t) != tgt.end();
                        CHECK(listed);
                    }
                }
            }
        }
    }
}

TEST_CASE("lower primitives") {
    BaseModel cp2 = cp_model(2);
    auto steps = primitive_lower(cp2, 2, {0, 5, 0, Flag::Hat}, 5);
    REQUIRE(steps.size() == 5);
    const long coeff[] = {2, -4, 8, -16, 32};
    for (std::size_t n = 0; n < 5; ++n) CHECK(steps[n].residual_coeff == coeff[n]);
    FormalChain x;
    add_term(x, {0, 4, 0, Flag::Check}, 1);
    add_term(x, {2, 5, 1, Flag::Check}, -2);
    add_term(x, {1, 4, 1, Flag::Check}, 4);
    add_term(x, {0, 3, 1, Flag::Check}, -8);
    add_term(x, {2, 4, 2, Flag::Check}, 16);
    CHECK(steps[4].partial_sum == x);
    for (long m = 1; m <= 3; ++m) {
        auto s = primitive_lower(cp2, m, {1, 0, 0, Flag::Hat}, 10);
        Int p = 1;
        for (const auto& st : s) {
            p *= m;
            CHECK(abs(st.residual_coeff) == p);
            FormalChain r = boundary_full(st.partial_sum, cp2, m);
            add_term(r, {1, 0, 0, Flag::Hat}, -1);
            add_term(r, st.residual, -st.residual_coeff);
            CHECK(r.empty());
        }
    }
}

TEST_CASE("upper primitives need m = 1") {
    BaseModel cp2 = cp_model(2);
    auto s = primitive_upper(cp2, 1, {0, 5, 0, Flag::Hat}, 6);
    REQUIRE(s.size() == 6);
    FormalChain first;
    add_term(first, {1, 5, 0, Flag::Check}, 1);
    CHECK(s[0].partial_sum == first);
    for (const auto& st : s) {
        CHECK(abs(st.residual_coeff) == 1);
        FormalChain r = boundary_full(st.partial_sum, cp2, 1);
        add_term(r, {0, 5, 0, Flag::Hat}, -1);
        add_term(r, st.residual, -st.residual_coeff);
        CHECK(r.empty());
    }
    CHECK(kind_of([&] { primitive_upper(cp2, 2, {0, 5, 0, Flag::Hat}, 3); }) == ErrorKind::InvalidModel);
}

TEST_CASE("transfer maps compose to m") {
    for (long m = 1; m <= 6; ++m) {
        TransferMaps tm = transfer_maps(cp_model(2), Rat(1), Window::all(), m, {-6, 6});
        CHECK(check_transfer(tm, m).ok());
        if (m == 1)
            for (long d = -6; d <= 6; ++d) CHECK(tm.T.at(d) == IntMatrix::identity(tm.source.complex.rank(d)));
    }
    // a broken P is caught
    TransferMaps tm = transfer_maps(cp_model(2), Rat(1), Window::all(), 3, {-6, 6});
    for (auto& p : tm.P.maps)
        if (p.rows() > 0) p(0, 0) += 1;
    CHECK_FALSE(check_transfer(tm, 3).ok());
}

TEST_CASE("transfer forces order m torsion where the base sector vanishes") {
    for (long n : {1L, 2L, 3L})
        for (long m = 2; m <= 5; ++m) {
            auto base = rfh_w0(cp_model(n), 1, Rat(1), {-6, 6});
            auto h = rfh_w0(cp_model(n), m, Rat(1), {-6, 6});
            for (std::size_t i = 0; i < h.size(); ++i) {
                REQUIRE(base[i].is_zero());
                CHECK(h[i].free_rank == 0);
                for (const Int& t : h[i].torsion) CHECK(Int(m) % t == 0);
            }
        }
}

TEST_CASE("orderability verdicts") {
    OrderabilityReport r = orderability_report(cp_model(2), 1);
    CHECK_FALSE(r.rfh_w0_nonzero);
    CHECK(r.cap_surjective);
    CHECK_FALSE(r.orderable.has_value());
    OrderabilityReport r2 = orderability_report(cp_model(2), 3);
    CHECK(r2.rfh_w0_nonzero);
    CHECK(r2.orderable == true);
    CHECK(r2.translated_points == true);
    CHECK(orderability_report(surface_model(1), 2).orderable == true);
}

TEST_CASE("winding sectors are shifted copies of winding zero") {
    BaseModel cp2 = cp_model(2);
    for (long m = 1; m <= 4; ++m)
        for (long w = -3; w <= 3; ++w) {
            // raising ell by w lowers the degree by 2w and raises the winding by w
            auto zero = enum_w(cp2, m, Rat(1), {-6, 6}, 0);
            auto sector = enum_w(cp2, m, Rat(1), {-6 - 2 * w, 6 - 2 * w}, w);
            REQUIRE(zero.size() == sector.size());
            for (std::size_t i = 0; i < zero.size(); ++i) {
                RFHGenerator g = zero[i];
                g.ell += w;
                CHECK(g == sector[i]);
                CHECK(rfh_degree(cp2, m, sector[i]) == rfh_degree(cp2, m, zero[i]) - 2 * w);
            }
        }
}
