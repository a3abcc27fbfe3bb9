#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rfloer/basemodel.hpp"
#include "rfloer/chaincplx.hpp"

namespace rfloer {

enum class Flag { Check, Hat };  // min / max of the auxiliary Morse function on a critical circle

struct RFHGenerator {
    std::size_t crit = 0;
    long ell = 0;  // covering number
    long k = 0;    // sphere class
    Flag flag = Flag::Check;

    auto operator<=>(const RFHGenerator&) const = default;
};

// Exact gradings and actions of one generator for a fixed bundle degree m and tau.
struct RFHData {
    long winding = 0;
    Rat eta;
    long mu = 0;      // mu_RFH of the critical circle
    long mu_h = 0;    // degree of the generator: mu plus one for hat
    Rat action;       // A^tau_f
    long mu_fh = 0;   // mu_FH of the projected pair (crit, k)
    Rat a_f;          // a_f of the projected pair
};

RFHData rfh_data(const BaseModel& model, long m, const Rat& tau, const RFHGenerator& g);
long rfh_degree(const BaseModel& model, long m, const RFHGenerator& g);
std::string rfh_label(const BaseModel& model, const RFHGenerator& g);
// Label of the corresponding cone generator ("hat:q1[k=0]"); only meaningful in winding zero.
std::string cone_label(const BaseModel& model, const RFHGenerator& g);

struct EnumerateOptions {
    std::optional<DegreeRange> degrees;
    Window window;                // action window for A^tau_f
    std::optional<long> winding;  // keep only this winding number
    std::optional<std::pair<long, long>> k_range;
};

// Sorted by (degree, k, ell, flag, crit).
std::vector<RFHGenerator> enumerate(const BaseModel& model, long m, const Rat& tau, const EnumerateOptions& opts);

// Zero-winding Rabinowitz Floer complex built directly from generators.
struct RFComplex {
    GradedComplex complex;
    std::vector<std::vector<RFHGenerator>> gens;  // indexed by degree - lo

    const std::vector<RFHGenerator>& at(long d) const;
};

// Degrees within one step of the ends are affected by the degree truncation (margin 1).
RFComplex rfc_w0(const BaseModel& model, long m, const Rat& tau, const Window& window, DegreeRange degrees);
// RFH^{w0} in the given degrees; the complex is built one degree wider on each side.
std::vector<ZModulePresentation> rfh_w0(const BaseModel& model, long m, const Rat& tau, DegreeRange degrees,
                                        const Window& window = Window::all());

// Cone of the cap map on FH, built wide enough that `degrees` is trusted.
GradedComplex cap_cone(const BaseModel& model, long m, DegreeRange degrees);

struct GysinResult {
    LongExactSequence les;
    ExactnessReport report;
};

// RFH^{w0}_d -> FH_d -> FH_{d-2} -> RFH^{w0}_{d-1}; every node with degree in `degrees` is checked.
GysinResult gysin(const BaseModel& model, long m, DegreeRange degrees);

using FormalChain = std::map<RFHGenerator, Int>;

void add_term(FormalChain& c, const RFHGenerator& g, const Int& coeff);
FormalChain boundary_full(const RFHGenerator& g, const BaseModel& model, long m);
FormalChain boundary_full(const FormalChain& c, const BaseModel& model, long m);
std::string chain_to_string(const BaseModel& model, const FormalChain& c);

// All generators with |k| <= K and |ell| <= L and their full boundary; terms leaving the box are kept
// as outside terms, so the complex is a quotient by the out-of-box part only when dropped_terms is zero.
struct BoxComplex {
    GradedComplex complex;
    std::size_t dropped_terms = 0;
};

BoxComplex full_box_complex(const BaseModel& model, long m, long K, long L);

// Partial sums x_N with d(x_N) = target + residual, residual a single generator with coefficient +-m^N
// (lower) or +-1 (upper, m = 1 only).
struct PrimitiveStep {
    FormalChain partial_sum;
    RFHGenerator residual;
    Int residual_coeff;
};

std::vector<PrimitiveStep> primitive_lower(const BaseModel& model, long m, const RFHGenerator& target, std::size_t terms);
std::vector<PrimitiveStep> primitive_upper(const BaseModel& model, long m, const RFHGenerator& target, std::size_t terms);

struct TransferMaps {
    RFComplex source;  // bundle degree m
    RFComplex base;    // bundle degree 1
    ChainMap T;        // source -> base
    ChainMap P;        // base -> source
};

TransferMaps transfer_maps(const BaseModel& model, const Rat& tau, const Window& window, long m, DegreeRange degrees);

struct TransferCheck {
    bool t_chain_map = false;
    bool p_chain_map = false;
    bool pt_is_m = false;
    bool tp_is_m = false;
    bool ok() const { return t_chain_map && p_chain_map && pt_is_m && tp_is_m; }
};

TransferCheck check_transfer(const TransferMaps& tm, long m);

struct OrderabilityReport {
    bool rfh_w0_nonzero = false;
    bool cap_surjective = false;
    bool c1_primitive = false;
    std::optional<bool> orderable;  // nullopt = unknown
    std::optional<bool> translated_points;
    DegreeRange degrees;
};

OrderabilityReport orderability_report(const BaseModel& model, long m);

}  // namespace rfloer
