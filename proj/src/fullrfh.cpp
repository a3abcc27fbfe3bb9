#include "rfloer/fullrfh.hpp"

#include <regex>

#include "rfloer/report.hpp"

namespace rfloer {

std::string Coefficients::name() const { return p == 0 ? "z" : "fp:" + std::to_string(p); }

Coefficients Coefficients::parse(const std::string& s) {
    if (s == "z" || s == "Z") return {};
    static const std::regex re(R"(^fp:(\d+)$)");
    std::smatch mt;
    if (!std::regex_match(s, mt, re)) throw Error(ErrorKind::ParseError, "coefficients must be z or fp:<prime>, got '" + s + "'");
    unsigned long p = std::stoul(mt[1].str());
    if (Int(p) < 2 || mpz_probab_prime_p(Int(p).get_mpz_t(), 30) == 0)
        throw Error(ErrorKind::ParseError, "fp:<p> needs a prime, got " + mt[1].str());
    return {p};
}

IntMatrix CapTower::composite(long k, std::size_t n) const {
    if (k - static_cast<long>(n) < kmin || k > kmax) throw Error(ErrorKind::DegreeOutOfRange, "composite leaves the tower");
    IntMatrix a = IntMatrix::identity(rank_at(k));
    for (std::size_t i = 0; i < n; ++i) a = psi_at(k - static_cast<long>(i)) * a;
    return a;
}

CapTower cap_tower(const BaseModel& model, long m, long degree, long kmin, long kmax) {
    CapTower t;
    t.degree = degree;
    t.kmin = kmin;
    t.kmax = kmax;
    DegreeRange r{degree + 1 + 2 * kmin, degree + 1 + 2 * kmax};
    InducedCap ic = induced_cap(model, m, r);
    t.torsion_free = ic.torsion_free;
    for (long k = kmin; k <= kmax; ++k) {
        long e = degree + 1 + 2 * k;
        t.ranks.push_back(ic.rank(e));
        t.psi.push_back(ic.psi_at(e));
    }
    return t;
}

long tower_period(const BaseModel& model) { return model.aspherical() ? 1 : model.c_M; }

bool FullRFHValue::operator==(const FullRFHValue& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case FullKind::Zero: return true;
        case FullKind::Presentation: return presentation == o.presentation;
        case FullKind::Field: return dimension == o.dimension && p == o.p;
        case FullKind::Qm:
        case FullKind::QmTilde: return m == o.m && copies == o.copies;
        case FullKind::Relations: return relations == o.relations;
    }
    return false;
}

std::string FullRFHValue::to_string() const {
    auto power = [](const std::string& base, std::size_t n) { return n == 1 ? base : base + "^" + std::to_string(n); };
    switch (kind) {
        case FullKind::Zero: return "0";
        case FullKind::Presentation: return presentation.to_string();
        case FullKind::Field: return power("F_" + std::to_string(p), dimension);
        case FullKind::Qm: return power("Q_" + std::to_string(m), copies);
        case FullKind::QmTilde: return power("Q~_" + std::to_string(m), copies);
        case FullKind::Relations: return "relations (see JSON)";
    }
    return "?";
}

nlohmann::json FullRFHValue::to_json() const {
    switch (kind) {
        case FullKind::Zero: return "0";
        case FullKind::Presentation: return presentation_to_json(presentation);
        case FullKind::Field: return {{"free", dimension}, {"torsion", nlohmann::json::array()}};
        case FullKind::Qm: {
            nlohmann::json j = {{"Qm", m}};
            if (copies != 1) j["copies"] = copies;
            return j;
        }
        case FullKind::QmTilde: {
            nlohmann::json j = {{"QmTilde", m}};
            if (copies != 1) j["copies"] = copies;
            return j;
        }
        case FullKind::Relations: return {{"relations", relations}};
    }
    return "0";
}

nlohmann::json FullRFHResult::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (long d = degrees.lo; d <= degrees.hi; ++d) rows.push_back({{"degree", d}, {"group", at(d).to_json()}});
    return rows;
}

namespace {

// m times a signed permutation; returns m or 0
long scaled_permutation(const IntMatrix& a) {
    if (!a.is_square() || a.rows() == 0) return 0;
    Int scale = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::size_t hits = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (sgn(a(i, j)) == 0) continue;
            ++hits;
            if (scale == 0) scale = abs(a(i, j));
            if (abs(a(i, j)) != scale) return 0;
        }
        if (hits != 1) return 0;
    }
    for (std::size_t j = 0; j < a.cols(); ++j) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < a.rows(); ++i) hits += sgn(a(i, j)) != 0;
        if (hits != 1) return 0;
    }
    return scale.fits_slong_p() ? scale.get_si() : 0;
}

bool unimodular(const IntMatrix& a) { return a.is_square() && abs(determinant(a)) == 1; }

// a common m >= 1 for every step of one period, or 0
long tower_pattern(const CapTower& t, long top, long period) {
    long m = 0;
    for (long k = top; k > top - period; --k) {
        long s = scaled_permutation(t.psi_at(k));
        if (s == 0 || (m != 0 && s != m)) return 0;
        m = s;
    }
    return m;
}

nlohmann::json relations_json(const CapTower& t, long top, long period, CompletionRegime regime) {
    nlohmann::json ranks = nlohmann::json::array(), maps = nlohmann::json::array();
    for (long k = top; k > top - period; --k) {
        ranks.push_back(t.rank_at(k));
        maps.push_back(matrix_to_json(t.psi_at(k)));
    }
    return {{"regime", regime_name(regime)},
            {"period", period},
            {"generators", "V_k = FH_{d+1+2k}, one block per k"},
            {"relation", "x = -Psi(x) for x in V_k, Psi : V_k -> V_{k-1}"},
            {"torsion_free", t.torsion_free},
            {"ranks", ranks},
            {"psi", maps}};
}

FullRFHValue zero() { return {}; }

FullRFHValue solve_parity(const BaseModel& model, long m, CompletionRegime regime, Coefficients coeff, long d) {
    // an aspherical base has FH in finitely many degrees, so Psi is nilpotent
    if (regime == CompletionRegime::AllLower || model.aspherical()) return zero();
    const long period = tower_period(model);
    const long bound = static_cast<long>(model.betti_sum()) * period;  // Psi^bound is nilpotent-or-stable
    const long depth = 2 * bound + 2 * period + 2;
    CapTower t = cap_tower(model, m, d, -depth, 0);

    FullRFHValue v;
    if (!t.torsion_free) {
        v.kind = FullKind::Relations;
        v.relations = relations_json(t, 0, period, regime);
        return v;
    }
    bool nilpotent = true;
    for (long k = 0; k > -period; --k)
        if (!t.composite(k, static_cast<std::size_t>(bound)).is_zero()) nilpotent = false;
    if (nilpotent) return zero();

    if (coeff.field()) {
        if (regime == CompletionRegime::AllUpper) return zero();
        std::size_t r = rank_mod_p(t.composite(0, static_cast<std::size_t>(bound)), coeff.p);
        if (r == 0) return zero();
        v.kind = FullKind::Field;
        v.dimension = r;
        v.p = coeff.p;
        return v;
    }

    const long pattern = tower_pattern(t, 0, period);
    if (regime == CompletionRegime::AllUpper) {
        bool iso = true;
        for (long k = 0; k > -period; --k) iso = iso && unimodular(t.psi_at(k));
        if (iso) return zero();
        if (pattern >= 2) {
            v.kind = FullKind::Qm;
            v.m = pattern;
            v.copies = t.rank_at(0);
            return v;
        }
        v.kind = FullKind::Relations;
        v.relations = relations_json(t, 0, period, regime);
        return v;
    }

    // finite supports: the direct limit of V_0 -> V_{-1} -> ...
    if (pattern >= 2) {
        v.kind = FullKind::QmTilde;
        v.m = pattern;
        v.copies = t.rank_at(0);
        return v;
    }
    // Deep in the tower, V_{k-1} = Psi(V_k) + (eventual kernel) for every k of one period means the
    // limit is free of the stable rank.
    const long deep = -bound;
    bool stable = true;
    for (long k = deep; k > deep - period && stable; --k) {
        IntMatrix kill = kernel_basis(t.composite(k - 1, static_cast<std::size_t>(bound)));
        SpanTester span(hcat(t.psi_at(k), kill));
        stable = span.contains_columns(IntMatrix::identity(t.rank_at(k - 1)));
    }
    if (stable) {
        v.kind = FullKind::Presentation;
        v.presentation = ZModulePresentation::free(rank(t.composite(deep, static_cast<std::size_t>(bound))));
        return v.presentation.is_zero() ? zero() : v;
    }
    v.kind = FullKind::Relations;
    v.relations = relations_json(t, 0, period, regime);
    return v;
}

}  // namespace

FullRFHResult full_rfh(const BaseModel& model, long m, const Rat& tau, DegreeRange degrees, Coefficients coeff) {
    if (m < 1) throw Error(ErrorKind::InvalidModel, "bundle degree m must be positive");
    if (degrees.lo > degrees.hi) throw Error(ErrorKind::DegreeOutOfRange, "empty degree range");
    FullRFHResult res;
    res.regime = model.aspherical() ? CompletionRegime::Finite : regime_for(tau, model.lambda, m);
    if (model.aspherical() && sgn(tau) <= 0) throw Error(ErrorKind::NonPositiveTau, "tau must be positive");
    res.coeff = coeff;
    res.degrees = degrees;
    // 2-periodic in degree: the tower of d + 2 is the tower of d shifted by one step
    FullRFHValue by_parity[2] = {solve_parity(model, m, res.regime, coeff, 0), solve_parity(model, m, res.regime, coeff, 1)};
    for (long d = degrees.lo; d <= degrees.hi; ++d) res.values.push_back(by_parity[((d % 2) + 2) % 2]);
    return res;
}

IntMatrix delta_block(const CapTower& t, long K) {
    // rows: blocks k = -K-1 .. K; columns: blocks k = -K .. K
    std::vector<std::size_t> row_off, col_off;
    std::size_t rows = 0, cols = 0;
    for (long k = -K - 1; k <= K; ++k) {
        row_off.push_back(rows);
        rows += t.rank_at(k);
    }
    for (long k = -K; k <= K; ++k) {
        col_off.push_back(cols);
        cols += t.rank_at(k);
    }
    IntMatrix a(rows, cols);
    for (long k = -K; k <= K; ++k) {
        std::size_t c0 = col_off[static_cast<std::size_t>(k + K)];
        std::size_t r_same = row_off[static_cast<std::size_t>(k + K + 1)];
        std::size_t r_down = row_off[static_cast<std::size_t>(k + K)];
        for (std::size_t i = 0; i < t.rank_at(k); ++i) a(r_same + i, c0 + i) = 1;
        const IntMatrix& p = t.psi_at(k);
        for (std::size_t i = 0; i < p.rows(); ++i)
            for (std::size_t j = 0; j < p.cols(); ++j) a(r_down + i, c0 + j) += p(i, j);
    }
    return a;
}

IntMatrix psi_block(const CapTower& t, long K) {
    std::vector<std::size_t> row_off, col_off;
    std::size_t rows = 0, cols = 0;
    for (long k = -K - 1; k <= K - 1; ++k) {
        row_off.push_back(rows);
        rows += t.rank_at(k);
    }
    for (long k = -K; k <= K; ++k) {
        col_off.push_back(cols);
        cols += t.rank_at(k);
    }
    IntMatrix a(rows, cols);
    for (long k = -K; k <= K; ++k) {
        std::size_t c0 = col_off[static_cast<std::size_t>(k + K)];
        std::size_t r0 = row_off[static_cast<std::size_t>(k + K)];
        const IntMatrix& p = t.psi_at(k);
        for (std::size_t i = 0; i < p.rows(); ++i)
            for (std::size_t j = 0; j < p.cols(); ++j) a(r0 + i, c0 + j) = p(i, j);
    }
    return a;
}

bool DeltaInjectivityReport::ok() const {
    for (const auto& d : degrees)
        if (!d.ok()) return false;
    return true;
}

DeltaInjectivityReport delta_injectivity(const BaseModel& model, long m, const Rat& tau, long truncation, DegreeRange degrees) {
    const long period = tower_period(model);
    if (truncation < std::max(1L, period))
        throw Error(ErrorKind::TruncationTooNarrow, "truncation " + std::to_string(truncation) + " is shorter than one period (" +
                                                        std::to_string(period) + ")");
    DeltaInjectivityReport rep;
    rep.regime = model.aspherical() ? CompletionRegime::Finite : regime_for(tau, model.lambda, m);
    rep.truncation = truncation;
    const long K = truncation;
    for (long d = degrees.lo; d <= degrees.hi; ++d) {
        CapTower t = cap_tower(model, m, d, -K - 1, K + period);
        DeltaDegreeReport r;
        r.degree = d;
        IntMatrix a = delta_block(t, K);
        r.columns = a.cols();
        r.nullity = a.cols() - rank(a);
        if (rep.regime == CompletionRegime::AllUpper) {
            // an element of the kernel with support bounded below has its lowest block in ker Psi and
            // in the image of arbitrarily long composites from above
            for (long k = 0; k < period; ++k) {
                IntMatrix ker = kernel_basis(t.psi_at(k));
                IntMatrix img = t.composite(k + K, static_cast<std::size_t>(K));
                std::size_t meet = ker.cols() + rank(img) - rank(hcat(ker, img));
                if (meet != 0) r.depth_certificate = false;
            }
        }
        rep.degrees.push_back(r);
    }
    return rep;
}

QmClassMap qm_class_map(const CapTower& t, long m) {
    QmClassMap q;
    q.m = m;
    q.kmin = t.kmin;
    q.kmax = t.kmax;
    q.eps.assign(static_cast<std::size_t>(t.kmax - t.kmin + 1), 0);
    auto sign_of = [&](long k) {
        const IntMatrix& p = t.psi_at(k);
        if (p.rows() != 1 || p.cols() != 1 || abs(p(0, 0)) != m)
            throw Error(ErrorKind::InvalidModel, "Q_m class map needs rank-one blocks with Psi = +-m");
        return sgn(p(0, 0));
    };
    // eps_{k-1} = -sign(Psi_k) eps_k, normalized at k = kmax
    q.eps.back() = 1;
    for (long k = t.kmax; k > t.kmin; --k)
        q.eps[static_cast<std::size_t>(k - 1 - t.kmin)] = -sign_of(k) * q.eps[static_cast<std::size_t>(k - t.kmin)];
    return q;
}

QmNumber QmClassMap::operator()(const CoeffMap& x) const {
    CoeffMap c;
    for (const auto& [k, a] : x) {
        if (k < kmin || k > kmax) throw Error(ErrorKind::DegreeOutOfRange, "coefficient outside the tower");
        c[k] = a * eps[static_cast<std::size_t>(k - kmin)];
    }
    return qm_reduce(m, c);
}

CoeffMap apply_delta(const CapTower& t, const CoeffMap& x) {
    CoeffMap y;
    for (const auto& [k, a] : x) {
        if (k <= t.kmin || k > t.kmax || t.rank_at(k) != 1 || t.rank_at(k - 1) != 1)
            throw Error(ErrorKind::DegreeOutOfRange, "apply_delta works on rank-one blocks inside the tower");
        y[k] += a;
        y[k - 1] += t.psi_at(k)(0, 0) * a;
    }
    return y;
}

}  // namespace rfloer
