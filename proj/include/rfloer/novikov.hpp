#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "rfloer/exactlin.hpp"

namespace rfloer {

struct NovikovContext {
    bool trivial = true;
    long c_M = 0;  // minimal Chern number when nontrivial
};

long lambda_degree(const NovikovContext& ctx, long power);

enum class CompletionRegime { AllLower, Finite, AllUpper };

const char* regime_name(CompletionRegime r);
CompletionRegime regime_for(const Rat& tau, const Rat& lambda, long m);

// Parses "p/q" or an integer literal; no decimals.
Rat parse_rational(const std::string& s);
std::string rational_to_string(const Rat& r);

// Element of Q_m with finitely many digits followed by a constant tail in {0, m-1}.
struct QmNumber {
    long base = 2;
    long start = 0;
    std::vector<long> digits;
    long tail = 0;

    bool is_zero() const { return digits.empty() && tail == 0; }
    bool operator==(const QmNumber& o) const {
        return base == o.base && start == o.start && digits == o.digits && tail == o.tail;
    }
    std::string to_string() const;
};

using CoeffMap = std::map<long, Int>;

QmNumber qm_reduce(long m, const CoeffMap& coeffs);
QmNumber qm_add(const QmNumber& a, const QmNumber& b);
QmNumber qm_negate(const QmNumber& a);
// Finitely supported representative: a = sum of the returned coefficients times m^k.
CoeffMap qm_coefficients(const QmNumber& a);
// Evaluates a tail-0 number scaled by m^(-shift) as an integer: sum a_k m^(k - shift).
Int qm_evaluate(const QmNumber& a, long shift);
// Residue of a modulo m^N, for numbers with start >= 0.
Int qm_mod_power(const QmNumber& a, unsigned n);

// Q~_m: finite digit support only. Addition fails if a carry leaves the window [.., top].
QmNumber qmtilde_add(const QmNumber& a, const QmNumber& b, long top);

nlohmann::json qm_to_json(const QmNumber& a);
QmNumber qm_from_json(const nlohmann::json& j);

}  // namespace rfloer
