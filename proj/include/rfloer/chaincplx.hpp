#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rfloer/exactlin.hpp"

namespace rfloer {

struct DegreeRange {
    long lo = -8;
    long hi = 8;
    bool contains(long d) const { return lo <= d && d <= hi; }
    long size() const { return hi - lo + 1; }
};

// Chain complex of free Z-modules on degrees [lo, hi]; zero outside. d_d : C_d -> C_{d-1}.
class GradedComplex {
public:
    GradedComplex() = default;
    GradedComplex(long lo, long hi);

    long lo() const { return lo_; }
    long hi() const { return hi_; }
    // Degrees within `margin` of either end may be affected by truncation.
    int margin() const { return margin_; }
    void set_margin(int m) { margin_ = m; }
    DegreeRange trusted() const { return {lo_ + margin_, hi_ - margin_}; }

    std::size_t rank(long d) const;
    const std::vector<std::string>& basis(long d) const;
    void set_basis(long d, std::vector<std::string> labels);
    // boundary out of degree d, shape rank(d-1) x rank(d); zero matrices outside the range
    IntMatrix boundary(long d) const;
    void set_boundary(long d, IntMatrix m);
    // position of a label in degree d, or -1
    long index_of(long d, const std::string& label) const;

    nlohmann::json to_json() const;

private:
    long lo_ = 0, hi_ = -1;
    int margin_ = 0;
    std::vector<std::vector<std::string>> basis_;
    std::vector<IntMatrix> boundary_;
};

struct BoundaryCheck {
    bool ok = true;
    std::optional<long> first_bad_degree;
};

BoundaryCheck verify_boundary(const GradedComplex& c);

// Chain map of degree `shift`: maps(d) : C_d -> D_{d+shift}.
struct ChainMap {
    GradedComplex source, target;
    long shift = 0;
    std::vector<IntMatrix> maps;  // indexed by source degree - source.lo()

    IntMatrix at(long d) const;
    // d^target . phi == phi . d^source, first failing source degree if not
    std::optional<long> commutation_failure() const;
};

ChainMap zero_map(const GradedComplex& c, long shift);
// g . f; needs f.target and g.source to share bases
ChainMap compose(const ChainMap& g, const ChainMap& f);

GradedComplex mapping_cone(const ChainMap& psi);

ZModulePresentation homology_at(const GradedComplex& c, long d);
HomologyBasis homology_basis_at(const GradedComplex& c, long d);
std::vector<ZModulePresentation> homology_table(const GradedComplex& c, DegreeRange degrees);
// Reference implementation kept for testing the parallel table.
std::vector<ZModulePresentation> homology_table_serial(const GradedComplex& c, DegreeRange degrees);

enum class LesComplex { Cone, Base };

struct LesNode {
    std::string label;
    long degree = 0;        // the * of the triple  H_*(Cone) -> H_*(C) -> H_{*-2}(C)
    LesComplex which = LesComplex::Base;
    long chain_degree = 0;  // degree inside `which`
    ZModulePresentation group;
    IntMatrix to_next;      // chain-level map to the next node's chain group
};

struct LongExactSequence {
    GradedComplex base;  // C
    GradedComplex cone;  // Cone(psi)
    std::vector<LesNode> nodes;  // ordered by decreasing degree

    const GradedComplex& complex_of(const LesNode& n) const { return n.which == LesComplex::Cone ? cone : base; }
};

LongExactSequence cone_les(const ChainMap& psi, DegreeRange degrees);

struct NodeReport {
    std::string label;
    bool ok = true;
    std::string reason;
};

struct ExactnessReport {
    bool ok = true;
    std::vector<NodeReport> nodes;
};

ExactnessReport verify_exactness(const LongExactSequence& les, DegreeRange degrees);

}  // namespace rfloer
