#include "rfloer/chaincplx.hpp"

#include "rfloer/report.hpp"

namespace rfloer {

GradedComplex::GradedComplex(long lo, long hi) : lo_(lo), hi_(hi) {
    if (hi < lo - 1) throw Error(ErrorKind::ShapeMismatch, "degree range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    basis_.resize(static_cast<std::size_t>(hi - lo + 1));
    boundary_.resize(basis_.size());
}

std::size_t GradedComplex::rank(long d) const {
    if (d < lo_ || d > hi_) return 0;
    return basis_[static_cast<std::size_t>(d - lo_)].size();
}

const std::vector<std::string>& GradedComplex::basis(long d) const {
    static const std::vector<std::string> empty;
    if (d < lo_ || d > hi_) return empty;
    return basis_[static_cast<std::size_t>(d - lo_)];
}

void GradedComplex::set_basis(long d, std::vector<std::string> labels) {
    if (d < lo_ || d > hi_) throw Error(ErrorKind::DegreeOutOfRange, "basis degree " + std::to_string(d));
    basis_[static_cast<std::size_t>(d - lo_)] = std::move(labels);
}

IntMatrix GradedComplex::boundary(long d) const {
    const std::size_t r = rank(d - 1), c = rank(d);
    if (d >= lo_ && d <= hi_) {
        const IntMatrix& m = boundary_[static_cast<std::size_t>(d - lo_)];
        if (m.rows() == r && m.cols() == c) return m;
    }
    return IntMatrix(r, c);
}

void GradedComplex::set_boundary(long d, IntMatrix m) {
    if (d < lo_ || d > hi_) throw Error(ErrorKind::DegreeOutOfRange, "boundary degree " + std::to_string(d));
    if (m.rows() != rank(d - 1) || m.cols() != rank(d))
        throw Error(ErrorKind::ShapeMismatch, "boundary in degree " + std::to_string(d) + " has shape " +
                                                  std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    boundary_[static_cast<std::size_t>(d - lo_)] = std::move(m);
}

long GradedComplex::index_of(long d, const std::string& label) const {
    const auto& b = basis(d);
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i] == label) return static_cast<long>(i);
    return -1;
}

nlohmann::json GradedComplex::to_json() const {
    nlohmann::json j;
    j["degrees"] = {lo_, hi_};
    nlohmann::json basis = nlohmann::json::object(), bd = nlohmann::json::object();
    for (long d = lo_; d <= hi_; ++d) {
        basis[std::to_string(d)] = this->basis(d);
        bd[std::to_string(d)] = matrix_to_json(boundary(d));
    }
    j["basis"] = basis;
    j["boundary"] = bd;
    return j;
}

BoundaryCheck verify_boundary(const GradedComplex& c) {
    for (long d = c.lo() + 1; d <= c.hi(); ++d)
        if (!(c.boundary(d - 1) * c.boundary(d)).is_zero()) return {false, d};
    return {};
}

IntMatrix ChainMap::at(long d) const {
    const std::size_t r = target.rank(d + shift), c = source.rank(d);
    if (d >= source.lo() && d <= source.hi()) {
        const IntMatrix& m = maps[static_cast<std::size_t>(d - source.lo())];
        if (m.rows() == r && m.cols() == c) return m;
    }
    return IntMatrix(r, c);
}

std::optional<long> ChainMap::commutation_failure() const {
    for (long d = source.lo(); d <= source.hi(); ++d) {
        IntMatrix lhs = target.boundary(d + shift) * at(d);
        IntMatrix rhs = at(d - 1) * source.boundary(d);
        if (lhs != rhs) return d;
    }
    return std::nullopt;
}

ChainMap zero_map(const GradedComplex& c, long shift) {
    ChainMap z{c, c, shift, {}};
    for (long d = c.lo(); d <= c.hi(); ++d) z.maps.emplace_back(c.rank(d + shift), c.rank(d));
    return z;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
    for (long d = f.target.lo(); d <= f.target.hi(); ++d)
        if (f.target.basis(d) != g.source.basis(d)) throw Error(ErrorKind::NotAChainMap, "composition of maps with different bases");
    ChainMap h{f.source, g.target, f.shift + g.shift, {}};
    for (long d = f.source.lo(); d <= f.source.hi(); ++d) h.maps.push_back(g.at(d + f.shift) * f.at(d));
    return h;
}

namespace {

void require_cone_input(const ChainMap& psi) {
    if (psi.shift != -2) throw Error(ErrorKind::NotAChainMap, "cone map must have degree -2");
    if (psi.source.lo() != psi.target.lo() || psi.source.hi() != psi.target.hi())
        throw Error(ErrorKind::NotAChainMap, "cone map must be an endomorphism");
    for (long d = psi.source.lo(); d <= psi.source.hi(); ++d)
        if (psi.source.basis(d) != psi.target.basis(d))
            throw Error(ErrorKind::NotAChainMap, "cone map must be an endomorphism");
    if (auto bad = psi.commutation_failure())
        throw Error(ErrorKind::NotAChainMap, "d psi != psi d in degree " + std::to_string(*bad));
}

}  // namespace

GradedComplex mapping_cone(const ChainMap& psi) {
    require_cone_input(psi);
    const GradedComplex& c = psi.source;
    GradedComplex cone(c.lo(), c.hi() + 1);
    cone.set_margin(c.margin());
    for (long d = cone.lo(); d <= cone.hi(); ++d) {
        std::vector<std::string> labels;
        for (const auto& s : c.basis(d - 1)) labels.push_back("hat:" + s);
        for (const auto& s : c.basis(d)) labels.push_back("check:" + s);
        cone.set_basis(d, std::move(labels));
    }
    for (long d = cone.lo(); d <= cone.hi(); ++d) {
        IntMatrix upper_left = Int(-1) * c.boundary(d - 1);
        IntMatrix lower_left(c.rank(d - 1), c.rank(d - 1));
        cone.set_boundary(d, block2x2(upper_left, psi.at(d), lower_left, c.boundary(d)));
    }
    return cone;
}

ZModulePresentation homology_at(const GradedComplex& c, long d) {
    return homology(c.boundary(d), c.boundary(d + 1));
}

HomologyBasis homology_basis_at(const GradedComplex& c, long d) {
    return homology_basis(c.boundary(d), c.boundary(d + 1));
}

namespace {

void require_trusted(const GradedComplex& c, DegreeRange degrees) {
    DegreeRange t = c.trusted();
    if (degrees.lo > degrees.hi || degrees.lo < t.lo || degrees.hi > t.hi)
        throw Error(ErrorKind::DegreeOutOfRange, "degrees [" + std::to_string(degrees.lo) + ", " + std::to_string(degrees.hi) +
                                                     "] are not inside the trusted range [" + std::to_string(t.lo) + ", " +
                                                     std::to_string(t.hi) + "]");
}

}  // namespace

std::vector<ZModulePresentation> homology_table(const GradedComplex& c, DegreeRange degrees) {
    require_trusted(c, degrees);
    std::vector<ZModulePresentation> out(static_cast<std::size_t>(degrees.size()));
    const long n = degrees.size();
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = homology_at(c, degrees.lo + i);
    return out;
}

std::vector<ZModulePresentation> homology_table_serial(const GradedComplex& c, DegreeRange degrees) {
    require_trusted(c, degrees);
    std::vector<ZModulePresentation> out;
    for (long d = degrees.lo; d <= degrees.hi; ++d) out.push_back(homology_at(c, d));
    return out;
}

LongExactSequence cone_les(const ChainMap& psi, DegreeRange degrees) {
    LongExactSequence les;
    les.base = psi.source;
    les.cone = mapping_cone(psi);
    require_trusted(les.base, {degrees.lo - 2, degrees.hi});
    require_trusted(les.cone, {degrees.lo - 1, degrees.hi});
    const GradedComplex& c = les.base;
    for (long d = degrees.hi; d >= degrees.lo; --d) {
        LesNode a{"H_" + std::to_string(d) + "(Cone)", d, LesComplex::Cone, d, homology_at(les.cone, d), {}};
        a.to_next = hcat(IntMatrix(c.rank(d), c.rank(d - 1)), IntMatrix::identity(c.rank(d)));
        LesNode b{"H_" + std::to_string(d) + "(C)", d, LesComplex::Base, d, homology_at(c, d), psi.at(d)};
        LesNode e{"H_" + std::to_string(d - 2) + "(C)", d, LesComplex::Base, d - 2, homology_at(c, d - 2), {}};
        e.to_next = vcat(IntMatrix::identity(c.rank(d - 2)), IntMatrix(c.rank(d - 1), c.rank(d - 2)));
        les.nodes.push_back(std::move(a));
        les.nodes.push_back(std::move(b));
        les.nodes.push_back(std::move(e));
    }
    return les;
}

namespace {

NodeReport check_node(const LongExactSequence& les, const LesNode& prev, const LesNode& x, const LesNode& next) {
    NodeReport r{x.label, true, ""};
    const GradedComplex& kp = les.complex_of(prev);
    const GradedComplex& kx = les.complex_of(x);
    const GradedComplex& kn = les.complex_of(next);
    const IntMatrix& f = prev.to_next;
    const IntMatrix& g = x.to_next;
    IntMatrix dx = kx.boundary(x.chain_degree);
    IntMatrix bx = kx.boundary(x.chain_degree + 1);
    IntMatrix zp = kernel_basis(kp.boundary(prev.chain_degree));
    IntMatrix bp = kp.boundary(prev.chain_degree + 1);
    IntMatrix bn = kn.boundary(next.chain_degree + 1);
    IntMatrix zx = kernel_basis(dx);

    if (f.rows() != kx.rank(x.chain_degree) || f.cols() != kp.rank(prev.chain_degree) ||
        g.rows() != kn.rank(next.chain_degree) || g.cols() != kx.rank(x.chain_degree)) {
        return {x.label, false, "map shapes do not match chain groups"};
    }
    if (!(dx * f * zp).is_zero()) return {x.label, false, "incoming map does not send cycles to cycles"};
    SpanTester boundaries_x(bx);
    if (!boundaries_x.contains_columns(f * bp)) return {x.label, false, "incoming map does not send boundaries to boundaries"};
    SpanTester boundaries_n(bn);
    if (!boundaries_n.contains_columns(g * f * zp)) return {x.label, false, "im(in) is not inside ker(out)"};
    // ker(out) = { z in Z_x : g z in B_n }
    IntMatrix rel = hcat(g * zx, Int(-1) * bn);
    IntMatrix kb = kernel_basis(rel);
    IntMatrix ker_out = zx * kb.rows_range(0, zx.cols());
    SpanTester image_in(hcat(f * zp, bx));
    if (!image_in.contains_columns(ker_out)) return {x.label, false, "ker(out) is not inside im(in)"};
    return r;
}

}  // namespace

ExactnessReport verify_exactness(const LongExactSequence& les, DegreeRange degrees) {
    if (les.nodes.empty()) throw Error(ErrorKind::DegreeOutOfRange, "empty sequence");
    long top = les.nodes.front().degree, bottom = les.nodes.back().degree;
    if (degrees.lo > degrees.hi || degrees.hi > top || degrees.lo < bottom)
        throw Error(ErrorKind::DegreeOutOfRange, "degrees [" + std::to_string(degrees.lo) + ", " + std::to_string(degrees.hi) +
                                                     "] not covered by the sequence [" + std::to_string(bottom) + ", " +
                                                     std::to_string(top) + "]");
    ExactnessReport rep;
    for (std::size_t i = 1; i + 1 < les.nodes.size(); ++i) {
        const LesNode& x = les.nodes[i];
        if (!degrees.contains(x.degree)) continue;
        NodeReport nr = check_node(les, les.nodes[i - 1], x, les.nodes[i + 1]);
        rep.ok = rep.ok && nr.ok;
        rep.nodes.push_back(std::move(nr));
    }
    return rep;
}

}  // namespace rfloer
