#include "rfloer/rfh.hpp"

#include <algorithm>
#include <sstream>

namespace rfloer {

namespace {

long flag_shift(Flag f) { return f == Flag::Hat ? 1 : 0; }

// c_1 - m omega on the sphere generator, i.e. (lambda - m) nu
long relative_step(const BaseModel& model, long m) { return model.chern_step() - m * model.nu; }

Int floor_div(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Int ceil_div(const Rat& r) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

}  // namespace

long rfh_degree(const BaseModel& model, long m, const RFHGenerator& g) {
    return -2 * g.ell - 2 * relative_step(model, m) * g.k + model.crit[g.crit].index - model.half_dim() + flag_shift(g.flag);
}

RFHData rfh_data(const BaseModel& model, long m, const Rat& tau, const RFHGenerator& g) {
    if (m < 1) throw Error(ErrorKind::InvalidModel, "bundle degree m must be positive");
    if (sgn(tau) <= 0) throw Error(ErrorKind::NonPositiveTau, "tau must be positive");
    RFHData r;
    r.winding = g.ell - m * g.k * model.nu;
    r.eta = Rat(-g.ell, m);
    r.eta.canonicalize();
    r.mu = rfh_degree(model, m, g) - flag_shift(g.flag);
    r.mu_h = r.mu + flag_shift(g.flag);
    r.action = Rat(-g.k * model.nu) - tau / Rat(m) * Rat(g.ell);
    r.mu_fh = model.fh_degree(g.crit, g.k);
    r.a_f = model.fh_action(g.k);
    return r;
}

std::string rfh_label(const BaseModel& model, const RFHGenerator& g) {
    return std::string(g.flag == Flag::Hat ? "hat:" : "check:") + model.crit[g.crit].label + "[l=" + std::to_string(g.ell) +
           ",k=" + std::to_string(g.k) + "]";
}

std::string cone_label(const BaseModel& model, const RFHGenerator& g) {
    return std::string(g.flag == Flag::Hat ? "hat:" : "check:") + fc_label(model, {g.crit, g.k});
}

std::vector<RFHGenerator> enumerate(const BaseModel& model, long m, const Rat& tau, const EnumerateOptions& opts) {
    if (m < 1) throw Error(ErrorKind::InvalidModel, "bundle degree m must be positive");
    if (sgn(tau) <= 0) throw Error(ErrorKind::NonPositiveTau, "tau must be positive");
    const Window& w = opts.window;
    if (w.lo && w.hi && !(*w.lo < *w.hi)) throw Error(ErrorKind::EmptyWindow, "window (a, b) needs a < b");
    if (!opts.degrees) throw Error(ErrorKind::UnboundedEnumeration, "enumeration needs a degree range");
    if (opts.k_range && opts.k_range->first > opts.k_range->second) throw Error(ErrorKind::EmptyWindow, "empty k range");
    const DegreeRange r = *opts.degrees;
    const long rel = relative_step(model, m);
    const long c = model.chern_step();
    std::vector<RFHGenerator> out;
    auto consider = [&](const RFHGenerator& g) {
        if (opts.winding && g.ell - m * g.k * model.nu != *opts.winding) return;
        if (!w.contains(rfh_data(model, m, tau, g).action)) return;
        out.push_back(g);
    };
    for (long d = r.lo; d <= r.hi; ++d)
        for (std::size_t q = 0; q < model.crit.size(); ++q)
            for (Flag f : {Flag::Check, Flag::Hat}) {
                long twice = model.crit[q].index - model.half_dim() + flag_shift(f) - d;
                if (twice % 2 != 0) continue;
                const long ell0 = twice / 2;  // ell at k = 0; ell(k) = ell0 - rel * k
                auto at_k = [&](long k) { return RFHGenerator{q, ell0 - rel * k, k, f}; };
                if (model.aspherical()) {
                    consider(at_k(0));
                } else if (opts.k_range) {
                    for (long k = opts.k_range->first; k <= opts.k_range->second; ++k) consider(at_k(k));
                } else if (opts.winding) {
                    // winding = ell0 - c k
                    long num = ell0 - *opts.winding;
                    if (num % c == 0) consider(at_k(num / c));
                } else {
                    // action(k) = alpha k + beta
                    Rat alpha = Rat(-model.nu) + tau * Rat(rel) / Rat(m);
                    Rat beta = -tau * Rat(ell0) / Rat(m);
                    if (sgn(alpha) == 0) {
                        if (w.contains(beta)) throw Error(ErrorKind::UnboundedEnumeration, "action is constant along the family (regime boundary)");
                        continue;
                    }
                    if (!w.finite()) throw Error(ErrorKind::UnboundedEnumeration, "infinite window without winding or k bounds");
                    Rat x = (*w.lo - beta) / alpha, y = (*w.hi - beta) / alpha;
                    if (y < x) std::swap(x, y);
                    long kmin = floor_div(x).get_si() + 1, kmax = ceil_div(y).get_si() - 1;
                    for (long k = kmin; k <= kmax; ++k) consider(at_k(k));
                }
            }
    std::sort(out.begin(), out.end(), [&](const RFHGenerator& a, const RFHGenerator& b) {
        long da = rfh_degree(model, m, a), db = rfh_degree(model, m, b);
        if (da != db) return da < db;
        if (a.k != b.k) return a.k < b.k;
        if (a.ell != b.ell) return a.ell < b.ell;
        if (a.flag != b.flag) return a.flag < b.flag;
        return a.crit < b.crit;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

const std::vector<RFHGenerator>& RFComplex::at(long d) const {
    static const std::vector<RFHGenerator> empty;
    if (d < complex.lo() || d > complex.hi()) return empty;
    return gens[static_cast<std::size_t>(d - complex.lo())];
}

RFComplex rfc_w0(const BaseModel& model, long m, const Rat& tau, const Window& window, DegreeRange degrees) {
    EnumerateOptions opts;
    opts.degrees = degrees;
    opts.window = window;
    opts.winding = 0;
    std::vector<RFHGenerator> all = enumerate(model, m, tau, opts);
    RFComplex rc;
    rc.complex = GradedComplex(degrees.lo, degrees.hi);
    rc.complex.set_margin(1);
    rc.gens.resize(static_cast<std::size_t>(degrees.size()));
    std::map<RFHGenerator, long> pos;
    for (const auto& g : all) {
        auto& v = rc.gens[static_cast<std::size_t>(rfh_degree(model, m, g) - degrees.lo)];
        pos[g] = static_cast<long>(v.size());
        v.push_back(g);
    }
    for (long d = degrees.lo; d <= degrees.hi; ++d) {
        std::vector<std::string> labels;
        for (const auto& g : rc.at(d)) labels.push_back(rfh_label(model, g));
        rc.complex.set_basis(d, std::move(labels));
    }
    auto in_complex = [&](const RFHGenerator& t) -> long {
        auto it = pos.find(t);
        return it == pos.end() ? -1 : it->second;
    };
    for (long d = degrees.lo; d <= degrees.hi; ++d) {
        const auto& src = rc.at(d);
        IntMatrix b(rc.at(d - 1).size(), src.size());
        for (std::size_t j = 0; j < src.size(); ++j) {
            const RFHGenerator& g = src[j];
            for (const auto& e : model.morse) {
                if (e.from != g.crit) continue;
                long i = in_complex({e.to, g.ell, g.k, g.flag});
                if (i >= 0) b(static_cast<std::size_t>(i), j) += g.flag == Flag::Hat ? Int(-e.coeff) : e.coeff;
            }
            if (g.flag == Flag::Hat) continue;
            for (const auto& e : model.cap) {
                if (e.from != g.crit) continue;
                RFHGenerator t{e.to, g.ell + m * model.nu * e.dk, g.k + e.dk, Flag::Hat};
                long i = in_complex(t);
                if (i >= 0) {
                    b(static_cast<std::size_t>(i), j) += Int(m) * e.coeff;
                } else if (window.hi && d - 1 >= degrees.lo && !(rfh_data(model, m, tau, t).action < *window.hi)) {
                    throw Error(ErrorKind::WindowMismatch, "cap raises action beyond the window");
                }
            }
        }
        rc.complex.set_boundary(d, std::move(b));
    }
    return rc;
}

std::vector<ZModulePresentation> rfh_w0(const BaseModel& model, long m, const Rat& tau, DegreeRange degrees, const Window& window) {
    RFComplex rc = rfc_w0(model, m, tau, window, {degrees.lo - 1, degrees.hi + 1});
    return homology_table(rc.complex, degrees);
}

GradedComplex cap_cone(const BaseModel& model, long m, DegreeRange degrees) {
    FloerComplex fc = build_fc(model, Window::all(), DegreeRange{degrees.lo - 3, degrees.hi + 2});
    return mapping_cone(cap_map(model, m, fc));
}

GysinResult gysin(const BaseModel& model, long m, DegreeRange degrees) {
    FloerComplex fc = build_fc(model, Window::all(), DegreeRange{degrees.lo - 5, degrees.hi + 3});
    GysinResult g;
    g.les = cone_les(cap_map(model, m, fc), {degrees.lo - 1, degrees.hi + 1});
    for (auto& node : g.les.nodes) {
        if (node.which == LesComplex::Cone) node.label = "RFH^{w0}_" + std::to_string(node.chain_degree);
        else node.label = "FH_" + std::to_string(node.chain_degree);
    }
    g.report = verify_exactness(g.les, degrees);
    return g;
}

void add_term(FormalChain& c, const RFHGenerator& g, const Int& coeff) {
    if (sgn(coeff) == 0) return;
    Int& x = c[g];
    x += coeff;
    if (sgn(x) == 0) c.erase(g);
}

FormalChain boundary_full(const RFHGenerator& g, const BaseModel& model, long m) {
    if (model.has_consecutive_indices())
        throw Error(ErrorKind::ConsecutiveIndexModel, "the fiberwise splitting of the boundary needs a base without consecutive indices");
    FormalChain out;
    if (g.flag == Flag::Hat) return out;
    add_term(out, {g.crit, g.ell + 1, g.k, Flag::Hat}, 1);
    for (const auto& e : model.cap) {
        if (e.from != g.crit) continue;
        add_term(out, {e.to, g.ell + m * model.nu * e.dk, g.k + e.dk, Flag::Hat}, Int(m) * e.coeff);
    }
    return out;
}

FormalChain boundary_full(const FormalChain& c, const BaseModel& model, long m) {
    FormalChain out;
    for (const auto& [g, x] : c)
        for (const auto& [t, y] : boundary_full(g, model, m)) add_term(out, t, x * y);
    return out;
}

std::string chain_to_string(const BaseModel& model, const FormalChain& c) {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [g, x] : c) {
        if (!first) os << (sgn(x) < 0 ? " - " : " + ");
        else if (sgn(x) < 0) os << "-";
        Int a = abs(x);
        if (a != 1) os << a.get_str() << "*";
        os << rfh_label(model, g);
        first = false;
    }
    return os.str();
}

BoxComplex full_box_complex(const BaseModel& model, long m, long K, long L) {
    std::vector<RFHGenerator> gens;
    for (long k = -K; k <= K; ++k)
        for (long l = -L; l <= L; ++l)
            for (std::size_t q = 0; q < model.crit.size(); ++q)
                for (Flag f : {Flag::Check, Flag::Hat}) gens.push_back({q, l, k, f});
    long lo = 0, hi = -1;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        long d = rfh_degree(model, m, gens[i]);
        if (i == 0 || d < lo) lo = d;
        if (i == 0 || d > hi) hi = d;
    }
    BoxComplex box;
    box.complex = GradedComplex(lo, hi);
    std::vector<std::vector<RFHGenerator>> by_degree(static_cast<std::size_t>(hi - lo + 1));
    std::map<RFHGenerator, std::size_t> pos;
    std::sort(gens.begin(), gens.end());
    for (const auto& g : gens) {
        auto& v = by_degree[static_cast<std::size_t>(rfh_degree(model, m, g) - lo)];
        pos[g] = v.size();
        v.push_back(g);
    }
    for (long d = lo; d <= hi; ++d) {
        std::vector<std::string> labels;
        for (const auto& g : by_degree[static_cast<std::size_t>(d - lo)]) labels.push_back(rfh_label(model, g));
        box.complex.set_basis(d, std::move(labels));
    }
    for (long d = lo; d <= hi; ++d) {
        const auto& src = by_degree[static_cast<std::size_t>(d - lo)];
        IntMatrix b(box.complex.rank(d - 1), src.size());
        for (std::size_t j = 0; j < src.size(); ++j)
            for (const auto& [t, x] : boundary_full(src[j], model, m)) {
                auto it = pos.find(t);
                if (it == pos.end()) {
                    ++box.dropped_terms;
                    continue;
                }
                b(it->second, j) += x;
            }
        box.complex.set_boundary(d, std::move(b));
    }
    return box;
}

namespace {

// d(x) - target must be a single generator
std::pair<RFHGenerator, Int> single_residual(const BaseModel& model, long m, const FormalChain& x, const RFHGenerator& target) {
    FormalChain r = boundary_full(x, model, m);
    add_term(r, target, -1);
    if (r.size() != 1) throw Error(ErrorKind::InvalidModel, "primitive series needs one cap entry per critical point");
    return *r.begin();
}

}  // namespace

std::vector<PrimitiveStep> primitive_lower(const BaseModel& model, long m, const RFHGenerator& target, std::size_t terms) {
    if (target.flag != Flag::Hat) throw Error(ErrorKind::InvalidModel, "primitives are built for hat generators");
    std::vector<PrimitiveStep> out;
    FormalChain x;
    add_term(x, {target.crit, target.ell - 1, target.k, Flag::Check}, 1);
    for (std::size_t n = 1; n <= terms; ++n) {
        auto [g, c] = single_residual(model, m, x, target);
        out.push_back({x, g, c});
        if (n == terms) break;
        // the spill c * hat(j, l', k') is the d_0 image of check(j, l'-1, k')
        add_term(x, {g.crit, g.ell - 1, g.k, Flag::Check}, -c);
    }
    return out;
}

std::vector<PrimitiveStep> primitive_upper(const BaseModel& model, long m, const RFHGenerator& target, std::size_t terms) {
    if (target.flag != Flag::Hat) throw Error(ErrorKind::InvalidModel, "primitives are built for hat generators");
    if (m != 1) throw Error(ErrorKind::InvalidModel, "the upward primitive is integral only for m = 1");
    // check(e.from, l - m nu dk, k - dk) has cap image coeff * hat(e.to, l, k)
    auto preimage = [&](const RFHGenerator& h) {
        const SectorEntry* hit = nullptr;
        for (const auto& e : model.cap)
            if (e.to == h.crit) {
                if (hit) throw Error(ErrorKind::InvalidModel, "primitive series needs one cap entry per critical point");
                hit = &e;
            }
        if (!hit || abs(hit->coeff) != 1) throw Error(ErrorKind::InvalidModel, "no unit cap preimage for " + model.crit[h.crit].label);
        return std::make_pair(RFHGenerator{hit->from, h.ell - m * model.nu * hit->dk, h.k - hit->dk, Flag::Check}, hit->coeff);
    };
    std::vector<PrimitiveStep> out;
    FormalChain x;
    auto [g0, s0] = preimage(target);
    add_term(x, g0, s0);
    for (std::size_t n = 1; n <= terms; ++n) {
        auto [g, c] = single_residual(model, m, x, target);
        out.push_back({x, g, c});
        if (n == terms) break;
        auto [p, s] = preimage(g);
        add_term(x, p, -c * s);
    }
    return out;
}

TransferMaps transfer_maps(const BaseModel& model, const Rat& tau, const Window& window, long m, DegreeRange degrees) {
    TransferMaps tm;
    tm.source = rfc_w0(model, m, tau, window, degrees);
    tm.base = rfc_w0(model, 1, tau, window, degrees);
    for (long d = degrees.lo; d <= degrees.hi; ++d) {
        const auto& a = tm.source.at(d);
        const auto& b = tm.base.at(d);
        bool same = a.size() == b.size();
        for (std::size_t i = 0; same && i < a.size(); ++i) same = cone_label(model, a[i]) == cone_label(model, b[i]);
        if (!same) throw Error(ErrorKind::WindowMismatch, "generators of degree " + std::to_string(d) + " do not align");
    }
    tm.T = {tm.source.complex, tm.base.complex, 0, {}};
    tm.P = {tm.base.complex, tm.source.complex, 0, {}};
    for (long d = degrees.lo; d <= degrees.hi; ++d) {
        const auto& gens = tm.source.at(d);
        IntMatrix t(gens.size(), gens.size()), p(gens.size(), gens.size());
        for (std::size_t i = 0; i < gens.size(); ++i) {
            bool hat = gens[i].flag == Flag::Hat;
            t(i, i) = hat ? 1 : m;
            p(i, i) = hat ? m : 1;
        }
        tm.T.maps.push_back(std::move(t));
        tm.P.maps.push_back(std::move(p));
    }
    return tm;
}

TransferCheck check_transfer(const TransferMaps& tm, long m) {
    TransferCheck c;
    c.t_chain_map = !tm.T.commutation_failure();
    c.p_chain_map = !tm.P.commutation_failure();
    ChainMap pt = compose(tm.P, tm.T), tp = compose(tm.T, tm.P);
    c.pt_is_m = c.tp_is_m = true;
    for (long d = tm.source.complex.lo(); d <= tm.source.complex.hi(); ++d) {
        if (pt.at(d) != IntMatrix::scalar(tm.source.complex.rank(d), m)) c.pt_is_m = false;
        if (tp.at(d) != IntMatrix::scalar(tm.base.complex.rank(d), m)) c.tp_is_m = false;
    }
    return c;
}

OrderabilityReport orderability_report(const BaseModel& model, long m) {
    OrderabilityReport r;
    r.degrees = {-model.dim - 2, model.dim + 2};
    for (const auto& h : rfh_w0(model, m, Rat(1), r.degrees))
        if (!h.is_zero()) r.rfh_w0_nonzero = true;
    InducedCap ic = induced_cap(model, m, r.degrees);
    r.cap_surjective = ic.torsion_free;
    for (long d = r.degrees.lo + 2; d <= r.degrees.hi; ++d)
        if (!is_surjective_over_Z(ic.psi_at(d))) r.cap_surjective = false;
    r.c1_primitive = primitivity_report(model, m).primitive;
    if (r.rfh_w0_nonzero) r.orderable = r.translated_points = true;
    return r;
}

}  // namespace rfloer
