#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "rfloer/basemodel.hpp"
#include "rfloer/novikov.hpp"

namespace rfloer {

struct Coefficients {
    unsigned long p = 0;  // 0 means Z

    bool field() const { return p != 0; }
    std::string name() const;
    static Coefficients parse(const std::string& s);  // "z" or "fp:<prime>"
};

// The tower V_k = FH_{d+1+2k}, Psi_k : V_k -> V_{k-1}, on free parts.
struct CapTower {
    long degree = 0;
    long kmin = 0, kmax = 0;
    std::vector<std::size_t> ranks;  // indexed by k - kmin
    std::vector<IntMatrix> psi;      // psi[k - kmin] : V_k -> V_{k-1}; empty shape at kmin
    bool torsion_free = true;

    std::size_t rank_at(long k) const { return ranks[static_cast<std::size_t>(k - kmin)]; }
    const IntMatrix& psi_at(long k) const { return psi[static_cast<std::size_t>(k - kmin)]; }
    // V_k -> V_{k-n}
    IntMatrix composite(long k, std::size_t n) const;
};

CapTower cap_tower(const BaseModel& model, long m, long degree, long kmin, long kmax);

// Steps after which the tower repeats (Lambda-periodicity of FH); 1 for aspherical bases.
long tower_period(const BaseModel& model);

enum class FullKind { Zero, Presentation, Field, Qm, QmTilde, Relations };

struct FullRFHValue {
    FullKind kind = FullKind::Zero;
    ZModulePresentation presentation;  // Presentation
    std::size_t dimension = 0;         // Field
    unsigned long p = 0;               // Field
    long m = 0;                        // Qm, QmTilde
    std::size_t copies = 1;            // Qm, QmTilde
    nlohmann::json relations;          // Relations

    bool operator==(const FullRFHValue& o) const;
    std::string to_string() const;
    nlohmann::json to_json() const;
};

struct FullRFHResult {
    CompletionRegime regime = CompletionRegime::Finite;
    Coefficients coeff;
    DegreeRange degrees;
    std::vector<FullRFHValue> values;  // indexed by d - degrees.lo

    const FullRFHValue& at(long d) const { return values[static_cast<std::size_t>(d - degrees.lo)]; }
    nlohmann::json to_json() const;
};

FullRFHResult full_rfh(const BaseModel& model, long m, const Rat& tau, DegreeRange degrees, Coefficients coeff = {});

struct DeltaDegreeReport {
    long degree = 0;
    std::size_t columns = 0;
    std::size_t nullity = 0;
    bool depth_certificate = true;  // ker Psi meets deep images trivially (upper completion only)
    bool ok() const { return nullity == 0 && depth_certificate; }
};

struct DeltaInjectivityReport {
    CompletionRegime regime = CompletionRegime::Finite;
    long truncation = 0;
    std::vector<DeltaDegreeReport> degrees;
    bool ok() const;
};

// id + Psi on sum_{|k| <= K} V_k, landing in k in [-K-1, K].
IntMatrix delta_block(const CapTower& t, long K);
// Psi alone on the same truncation, landing in k in [-K-1, K-1].
IntMatrix psi_block(const CapTower& t, long K);

DeltaInjectivityReport delta_injectivity(const BaseModel& model, long m, const Rat& tau, long truncation, DegreeRange degrees);

// Rank-one towers with Psi_k = sign_k * m (the CP^n pattern): the class of a finitely supported
// element of sum V_k in Q_m, sending e_k to eps_k m^k with eps chosen so that id + Psi dies.
struct QmClassMap {
    long m = 2;
    long kmin = 0, kmax = 0;
    std::vector<int> eps;  // indexed by k - kmin

    QmNumber operator()(const CoeffMap& x) const;
};

QmClassMap qm_class_map(const CapTower& t, long m);
CoeffMap apply_delta(const CapTower& t, const CoeffMap& x);

}  // namespace rfloer
