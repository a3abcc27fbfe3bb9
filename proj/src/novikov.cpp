#include "rfloer/novikov.hpp"

#include <algorithm>
#include <regex>

namespace rfloer {

long lambda_degree(const NovikovContext& ctx, long power) {
    if (ctx.trivial) {
        if (power != 0) throw Error(ErrorKind::TrivialRingPower, "the Novikov ring is Z; t^" + std::to_string(power) + " does not exist");
        return 0;
    }
    return -2 * ctx.c_M * power;
}

const char* regime_name(CompletionRegime r) {
    switch (r) {
        case CompletionRegime::AllLower: return "AllLower";
        case CompletionRegime::Finite: return "Finite";
        case CompletionRegime::AllUpper: return "AllUpper";
    }
    return "?";
}

CompletionRegime regime_for(const Rat& tau, const Rat& lambda, long m) {
    if (sgn(tau) <= 0) throw Error(ErrorKind::NonPositiveTau, "tau must be positive, got " + rational_to_string(tau));
    Rat lhs = tau * (lambda - Rat(m));
    int c = cmp(lhs, Rat(m));
    if (c < 0) return CompletionRegime::AllLower;
    if (c == 0) return CompletionRegime::Finite;
    return CompletionRegime::AllUpper;
}

Rat parse_rational(const std::string& s) {
    static const std::regex re(R"(^\s*([+-]?\d+)(?:\s*/\s*([+-]?\d+))?\s*$)");
    std::smatch mt;
    if (!std::regex_match(s, mt, re)) throw Error(ErrorKind::ParseError, "not a rational 'p/q' or integer: '" + s + "'");
    Int num(mt[1].str()), den(1);
    if (mt[2].matched) den = Int(mt[2].str());
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + s + "'");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

std::string rational_to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string QmNumber::to_string() const {
    std::string s = "Q" + std::to_string(base) + "[start=" + std::to_string(start) + ", digits=";
    for (std::size_t i = 0; i < digits.size(); ++i) s += (i ? "," : "") + std::to_string(digits[i]);
    s += ", tail=" + std::to_string(tail) + "]";
    return s;
}

namespace {

void canonicalize(QmNumber& q) {
    while (!q.digits.empty() && q.digits.back() == q.tail) q.digits.pop_back();
    std::size_t lead = 0;
    while (lead < q.digits.size() && q.digits[lead] == 0) ++lead;
    if (lead == q.digits.size() && q.tail != 0) {
        q.start += static_cast<long>(lead);
        q.digits.clear();
        return;
    }
    q.digits.erase(q.digits.begin(), q.digits.begin() + static_cast<long>(lead));
    q.start += static_cast<long>(lead);
    if (q.digits.empty() && q.tail == 0) q.start = 0;
}

std::vector<long> base_digits(Int v, long m) {
    std::vector<long> d;
    Int r;
    while (sgn(v) > 0) {
        mpz_fdiv_qr_ui(v.get_mpz_t(), r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(m));
        d.push_back(static_cast<long>(r.get_ui()));
    }
    return d;
}

}  // namespace

QmNumber qm_reduce(long m, const CoeffMap& coeffs) {
    if (m < 2) throw Error(ErrorKind::BaseTooSmall, "base must be at least 2, got " + std::to_string(m));
    QmNumber q;
    q.base = m;
    long k0 = 0;
    bool any = false;
    for (const auto& [k, a] : coeffs)
        if (sgn(a) != 0) {
            if (!any || k < k0) k0 = k;
            any = true;
        }
    if (!any) return q;
    Int v = 0, mm = m;
    for (const auto& [k, a] : coeffs) {
        if (sgn(a) == 0) continue;
        Int p;
        mpz_pow_ui(p.get_mpz_t(), mm.get_mpz_t(), static_cast<unsigned long>(k - k0));
        v += a * p;
    }
    q.start = k0;
    if (sgn(v) >= 0) {
        q.digits = base_digits(v, m);
        q.tail = 0;
    } else {
        // -m^N = sum_{k >= N} (m-1) m^k, so v = (v + m^N) + tail of (m-1)'s from N on
        Int pw = 1;
        std::size_t n = 0;
        while (cmp(pw, abs(v)) <= 0) {
            pw *= m;
            ++n;
        }
        q.digits = base_digits(v + pw, m);
        q.digits.resize(n, 0);
        q.tail = m - 1;
    }
    canonicalize(q);
    return q;
}

CoeffMap qm_coefficients(const QmNumber& a) {
    CoeffMap c;
    for (std::size_t i = 0; i < a.digits.size(); ++i)
        if (a.digits[i] != 0) c[a.start + static_cast<long>(i)] = a.digits[i];
    if (a.tail != 0) c[a.start + static_cast<long>(a.digits.size())] += -1;
    return c;
}

QmNumber qm_add(const QmNumber& a, const QmNumber& b) {
    if (a.base != b.base)
        throw Error(ErrorKind::BaseMismatch, "cannot add Q_" + std::to_string(a.base) + " and Q_" + std::to_string(b.base));
    CoeffMap c = qm_coefficients(a);
    for (const auto& [k, v] : qm_coefficients(b)) c[k] += v;
    return qm_reduce(a.base, c);
}

QmNumber qm_negate(const QmNumber& a) {
    CoeffMap c = qm_coefficients(a);
    for (auto& [k, v] : c) v = -v;
    return qm_reduce(a.base, c);
}

Int qm_evaluate(const QmNumber& a, long shift) {
    if (a.tail != 0) throw Error(ErrorKind::OverflowIntoInfinite, "number has an infinite tail");
    if (a.start < shift && !a.digits.empty()) throw Error(ErrorKind::ShapeMismatch, "digits below the evaluation shift");
    Int v = 0, mm = a.base;
    for (std::size_t i = 0; i < a.digits.size(); ++i) {
        Int p;
        mpz_pow_ui(p.get_mpz_t(), mm.get_mpz_t(), static_cast<unsigned long>(a.start + static_cast<long>(i) - shift));
        v += a.digits[i] * p;
    }
    return v;
}

Int qm_mod_power(const QmNumber& a, unsigned n) {
    Int mod, mm = a.base;
    mpz_pow_ui(mod.get_mpz_t(), mm.get_mpz_t(), n);
    Int v = 0;
    for (const auto& [k, c] : qm_coefficients(a)) {
        if (k < 0) throw Error(ErrorKind::ShapeMismatch, "negative positions have no residue mod m^N");
        Int p;
        mpz_pow_ui(p.get_mpz_t(), mm.get_mpz_t(), static_cast<unsigned long>(k));
        v += c * p;
    }
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
    return r;
}

QmNumber qmtilde_add(const QmNumber& a, const QmNumber& b, long top) {
    if (a.tail != 0 || b.tail != 0) throw Error(ErrorKind::OverflowIntoInfinite, "Q~_m elements have finite support");
    QmNumber s = qm_add(a, b);
    if (s.tail != 0 || (!s.digits.empty() && s.start + static_cast<long>(s.digits.size()) - 1 > top))
        throw Error(ErrorKind::OverflowIntoInfinite, "carry escapes the finite window at position " + std::to_string(top));
    return s;
}

nlohmann::json qm_to_json(const QmNumber& a) {
    return {{"base", a.base}, {"start", a.start}, {"digits", a.digits}, {"tail", a.tail}};
}

QmNumber qm_from_json(const nlohmann::json& j) {
    QmNumber q;
    q.base = j.at("base").get<long>();
    q.start = j.at("start").get<long>();
    q.digits = j.at("digits").get<std::vector<long>>();
    q.tail = j.at("tail").get<long>();
    if (q.base < 2) throw Error(ErrorKind::BaseTooSmall, "base must be at least 2");
    for (long d : q.digits)
        if (d < 0 || d >= q.base) throw Error(ErrorKind::ParseError, "digit out of range");
    if (q.tail != 0 && q.tail != q.base - 1) throw Error(ErrorKind::ParseError, "tail must be 0 or m-1");
    QmNumber c = q;
    canonicalize(c);
    return c;
}

}  // namespace rfloer
