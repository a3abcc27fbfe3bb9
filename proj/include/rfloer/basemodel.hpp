#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rfloer/chaincplx.hpp"
#include "rfloer/novikov.hpp"

namespace rfloer {

struct CritPoint {
    std::string label;
    long index = 0;  // Morse index of -f
};

// One matrix entry of a Lambda-linear map on the k = 0 sector: (from, 0) -> coeff * (to, dk).
struct SectorEntry {
    std::size_t from = 0;
    std::size_t to = 0;
    long dk = 0;
    Int coeff;
};

struct BaseModel {
    std::string name;
    long dim = 0;
    long nu = 0;                  // omega(pi_2) = nu Z; 0 when aspherical
    Rat lambda = 0;               // c_1 = lambda omega on pi_2
    long c_M = 0;
    std::vector<CritPoint> crit;
    std::vector<SectorEntry> cap;    // cap product with [omega] (multiply by m for -c_1(E))
    std::vector<SectorEntry> morse;  // Morse differential, dk = 0
    bool primitive_omega = false;
    std::vector<std::string> warnings;

    bool aspherical() const { return nu == 0; }
    long half_dim() const { return dim / 2; }
    // c_1 of the generator of Gamma_M, i.e. lambda * nu (an integer)
    long chern_step() const;
    NovikovContext novikov() const;
    long fh_degree(std::size_t q, long k) const;  // mu_FH(q, k)
    Rat fh_action(long k) const;                   // a_f(q, k) = -k nu
    bool has_consecutive_indices() const;
    std::size_t betti_sum() const;
};

BaseModel cp_model(long n);
BaseModel surface_model(long genus);
BaseModel point_model();
BaseModel model_from_json(const nlohmann::json& j);
// "cp:<n>", "surface:<g>", "point", "file:<path>"
BaseModel parse_model(const std::string& spec);
// Checks the invariants (condition A2 bounds, degree compatibility of the cap data).
void validate_model(BaseModel& m);

struct FloerGenerator {
    std::size_t crit = 0;
    long k = 0;
};

// Open action interval; missing ends are infinite.
struct Window {
    std::optional<Rat> lo, hi;
    bool finite() const { return lo && hi; }
    bool contains(const Rat& a) const { return (!lo || *lo < a) && (!hi || a < *hi); }
    static Window all() { return {}; }
};

Window parse_window(const std::string& s);  // "a..b", either side may be "-inf"/"inf"

struct FcOptions {
    long max_widening_steps = 40;
};

// Windowed Floer complex, basis ordered by (k, crit order) in each degree.
struct FloerComplex {
    GradedComplex complex;
    Window window;
    std::vector<std::vector<FloerGenerator>> gens;  // indexed by degree - lo

    const std::vector<FloerGenerator>& at(long d) const;
    long position(long d, const FloerGenerator& g) const;
};

std::string fc_label(const BaseModel& model, const FloerGenerator& g);

// For infinite windows the caller supplies the degree range; margin 2 marks the truncation.
FloerComplex build_fc(const BaseModel& model, const Window& window, std::optional<DegreeRange> degrees,
                      const FcOptions& opts = {});

ChainMap cap_map(const BaseModel& model, long m, const FloerComplex& fc);
ChainMap cap_map(const BaseModel& model, long m, const Window& window, DegreeRange degrees);

struct CapStabilization {
    std::size_t n_stab = 0;
    std::size_t stabilized_image_rank = 0;  // rank over Lambda of im(Psi^n_stab)
    std::vector<std::size_t> ranks;         // rank of Psi^n for n = 0, 1, ...
};

CapStabilization cap_stabilization(const BaseModel& model, long m);

struct PrimitivityReport {
    bool primitive = false;
};

PrimitivityReport primitivity_report(const BaseModel& model, long m);

// Psi induced on the free part of FH_d for d in a degree range (infinite window).
struct InducedCap {
    DegreeRange degrees;
    std::vector<HomologyBasis> fh;  // indexed by d - degrees.lo
    std::vector<IntMatrix> psi;     // free coordinates of FH_d -> FH_{d-2}; empty when d-2 is outside
    bool torsion_free = true;

    const HomologyBasis& at(long d) const { return fh[static_cast<std::size_t>(d - degrees.lo)]; }
    std::size_t rank(long d) const { return degrees.contains(d) ? at(d).free_rank() : 0; }
    const IntMatrix& psi_at(long d) const { return psi[static_cast<std::size_t>(d - degrees.lo)]; }
    // Psi^n : FH_d -> FH_{d-2n}; needs d-2n inside the range
    IntMatrix psi_power(long d, std::size_t n) const;
};

InducedCap induced_cap(const BaseModel& model, long m, DegreeRange fh_degrees);

}  // namespace rfloer
