#include "rfloer/basemodel.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace rfloer {

long BaseModel::chern_step() const {
    if (aspherical()) return 0;
    Rat c = lambda * Rat(nu);
    if (c.get_den() != 1) throw Error(ErrorKind::InvalidModel, "lambda * nu must be an integer");
    return c.get_num().get_si();
}

NovikovContext BaseModel::novikov() const {
    if (aspherical()) return {true, 0};
    return {false, c_M};
}

long BaseModel::fh_degree(std::size_t q, long k) const {
    return crit[q].index - half_dim() - 2 * chern_step() * k;
}

Rat BaseModel::fh_action(long k) const { return Rat(-k * nu); }

bool BaseModel::has_consecutive_indices() const {
    std::set<long> idx;
    for (const auto& c : crit) idx.insert(c.index);
    for (long i : idx)
        if (idx.count(i + 1)) return true;
    return false;
}

std::size_t BaseModel::betti_sum() const {
    // classical Morse complex graded by the index of -f
    GradedComplex c(0, dim);
    std::map<long, std::vector<std::size_t>> by_index;
    for (std::size_t q = 0; q < crit.size(); ++q) by_index[crit[q].index].push_back(q);
    auto pos = [&](std::size_t q) {
        const auto& v = by_index[crit[q].index];
        return static_cast<std::size_t>(std::find(v.begin(), v.end(), q) - v.begin());
    };
    for (long d = 0; d <= dim; ++d) c.set_basis(d, std::vector<std::string>(by_index[d].size()));
    for (long d = 1; d <= dim; ++d) {
        IntMatrix b(by_index[d - 1].size(), by_index[d].size());
        for (const auto& e : morse)
            if (crit[e.from].index == d) b(pos(e.to), pos(e.from)) += e.coeff;
        c.set_boundary(d, b);
    }
    std::size_t total = 0;
    for (long d = 0; d <= dim; ++d) total += homology_at(c, d).free_rank;
    return total;
}

BaseModel cp_model(long n) {
    if (n < 1) throw Error(ErrorKind::InvalidModel, "cp:<n> needs n >= 1");
    BaseModel m;
    m.name = "cp:" + std::to_string(n);
    m.dim = 2 * n;
    m.nu = 1;
    m.lambda = Rat(n + 1);
    m.c_M = n + 1;
    for (long i = 0; i <= n; ++i) m.crit.push_back({"q" + std::to_string(i), 2 * i});
    for (long i = 1; i <= n; ++i) m.cap.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i - 1), 0, 1});
    m.cap.push_back({0, static_cast<std::size_t>(n), 1, 1});
    m.primitive_omega = true;
    return m;
}

BaseModel surface_model(long genus) {
    if (genus < 1) throw Error(ErrorKind::InvalidModel, "surface:<g> needs g >= 1 (the sphere is cp:1)");
    BaseModel m;
    m.name = "surface:" + std::to_string(genus);
    m.dim = 2;
    m.nu = 0;
    m.lambda = 0;
    m.c_M = 0;
    m.crit.push_back({"q0", 0});
    for (long i = 1; i <= genus; ++i) {
        m.crit.push_back({"a" + std::to_string(i), 1});
        m.crit.push_back({"b" + std::to_string(i), 1});
    }
    m.crit.push_back({"q2", 2});
    m.cap.push_back({m.crit.size() - 1, 0, 0, 1});
    m.primitive_omega = true;
    return m;
}

BaseModel point_model() {
    BaseModel m;
    m.name = "point";
    m.dim = 0;
    m.nu = 0;
    m.crit.push_back({"q0", 0});
    return m;
}

namespace {

std::vector<std::size_t> crit_in_degree(const BaseModel& m, long d, long k) {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < m.crit.size(); ++q)
        if (m.fh_degree(q, k) == d) out.push_back(q);
    return out;
}

// Generators of FH degree d over all k, ordered by (k, crit order).
std::vector<FloerGenerator> generators_in_degree(const BaseModel& m, long d) {
    std::vector<FloerGenerator> out;
    const long c = m.chern_step();
    for (std::size_t q = 0; q < m.crit.size(); ++q) {
        long num = m.crit[q].index - m.half_dim() - d;
        if (c == 0) {
            if (num == 0) out.push_back({q, 0});
        } else if (num % (2 * c) == 0) {
            out.push_back({q, num / (2 * c)});
        }
    }
    std::sort(out.begin(), out.end(), [](const FloerGenerator& a, const FloerGenerator& b) {
        return a.k != b.k ? a.k < b.k : a.crit < b.crit;
    });
    return out;
}

IntMatrix json_matrix(const nlohmann::json& j) {
    if (!j.is_array()) throw Error(ErrorKind::ParseError, "matrix must be an array of rows");
    std::size_t rows = j.size(), cols = rows ? j[0].size() : 0;
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw Error(ErrorKind::ParseError, "ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& v = j[i][c];
            if (v.is_string()) m(i, c) = Int(v.get<std::string>());
            else if (v.is_number_integer()) m(i, c) = Int(v.get<long>());
            else throw Error(ErrorKind::ParseError, "matrix entries must be integers");
        }
    }
    return m;
}

void sector_from_matrices(const BaseModel& m, const nlohmann::json& spec, long drop, std::vector<SectorEntry>& out) {
    for (const auto& [key, mat] : spec.items()) {
        long d = std::stol(key);
        IntMatrix a = json_matrix(mat);
        auto cols = crit_in_degree(m, d, 0);
        std::vector<FloerGenerator> rows;
        if (drop == 1) {
            for (std::size_t q : crit_in_degree(m, d - 1, 0)) rows.push_back({q, 0});
        } else {
            rows = generators_in_degree(m, d - drop);
        }
        if (a.rows() != rows.size() || a.cols() != cols.size())
            throw Error(ErrorKind::InvalidModel, "matrix for degree " + key + " must be " + std::to_string(rows.size()) + "x" +
                                                     std::to_string(cols.size()));
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t c = 0; c < a.cols(); ++c)
                if (sgn(a(i, c)) != 0) out.push_back({cols[c], rows[i].crit, rows[i].k, a(i, c)});
    }
}

}  // namespace

void validate_model(BaseModel& m) {
    if (m.dim < 0 || m.dim % 2 != 0) throw Error(ErrorKind::InvalidModel, "dimension must be even and nonnegative");
    if (m.crit.empty()) throw Error(ErrorKind::InvalidModel, "at least one critical point is needed");
    std::set<std::string> labels;
    for (const auto& c : m.crit) {
        if (c.label.empty() || !labels.insert(c.label).second)
            throw Error(ErrorKind::InvalidModel, "critical point labels must be unique and nonempty");
        if (c.index < 0 || c.index > m.dim) throw Error(ErrorKind::InvalidModel, "Morse index out of range for " + c.label);
    }
    if (m.nu < 0) throw Error(ErrorKind::InvalidModel, "nu must be nonnegative");
    if (!m.aspherical()) {
        Rat ln = m.lambda * Rat(m.nu);
        if (ln.get_den() != 1) throw Error(ErrorKind::InvalidModel, "lambda * nu must be an integer (it is c_1 on the generator)");
        long c = ln.get_num().get_si();
        if (c == 0) throw Error(ErrorKind::InvalidModel, "lambda*nu = 0 with nu > 0 is not monotone; set nu = 0 for aspherical bases");
        if (c >= 2 || c <= -m.half_dim()) {
            // condition (A2)
        } else if (c == 1) {
            m.warnings.push_back("lambda*nu = 1 is outside (A2) (which asks lambda*nu >= 2); accepted under the weaker bound");
        } else {
            throw Error(ErrorKind::InvalidModel, "lambda*nu = " + std::to_string(c) + " violates (A2): need >= 2 or <= -dim/2");
        }
        if (m.c_M == 0) m.c_M = std::abs(c);
        if (m.c_M != std::abs(c)) throw Error(ErrorKind::InvalidModel, "c_M must equal |lambda * nu|");
    }
    for (const auto& e : m.cap) {
        if (e.from >= m.crit.size() || e.to >= m.crit.size()) throw Error(ErrorKind::InvalidModel, "cap entry out of range");
        if (m.aspherical() && e.dk != 0) throw Error(ErrorKind::InvalidModel, "aspherical cap data cannot shift the sphere class");
        if (m.fh_degree(e.to, e.dk) != m.fh_degree(e.from, 0) - 2)
            throw Error(ErrorKind::InvalidModel, "cap entry " + m.crit[e.from].label + " -> " + m.crit[e.to].label + " is not of degree -2");
    }
    for (const auto& e : m.morse) {
        if (e.from >= m.crit.size() || e.to >= m.crit.size()) throw Error(ErrorKind::InvalidModel, "Morse entry out of range");
        if (e.dk != 0 || m.crit[e.to].index != m.crit[e.from].index - 1)
            throw Error(ErrorKind::InvalidModel, "Morse entry " + m.crit[e.from].label + " -> " + m.crit[e.to].label + " is not of degree -1");
    }
    // d^2 = 0 and d psi = psi d on one Lambda-period (or everything when aspherical)
    long span = m.aspherical() ? 0 : 2 * std::abs(m.chern_step());
    DegreeRange r{-m.half_dim() - span - 4, m.half_dim() + span + 4};
    FloerComplex fc = build_fc(m, Window::all(), r);
    if (!verify_boundary(fc.complex).ok) throw Error(ErrorKind::InvalidModel, "Morse differential does not square to zero");
    cap_map(m, 1, fc);
}

BaseModel model_from_json(const nlohmann::json& j) {
    BaseModel m;
    try {
        m.name = j.value("name", std::string("file"));
        m.dim = j.at("dim").get<long>();
        m.nu = j.at("nu").get<long>();
        if (j.contains("lambda")) {
            const auto& l = j.at("lambda");
            m.lambda = l.is_string() ? parse_rational(l.get<std::string>()) : Rat(l.get<long>());
        }
        m.c_M = j.value("cM", 0L);
        for (const auto& c : j.at("crit")) m.crit.push_back({c.at("label").get<std::string>(), c.at("index").get<long>()});
        m.primitive_omega = j.value("primitiveOmega", false);
        if (j.contains("morse")) sector_from_matrices(m, j.at("morse"), 1, m.morse);
        const auto& cap = j.at("cap");
        if (cap.is_string()) {
            std::string kind = cap.get<std::string>();
            std::vector<std::size_t> order(m.crit.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return m.crit[a].index < m.crit[b].index; });
            if (kind == "builtin:cpn") {
                for (std::size_t i = 0; i < order.size(); ++i)
                    if (m.crit[order[i]].index != static_cast<long>(2 * i) || m.dim != static_cast<long>(2 * (order.size() - 1)))
                        throw Error(ErrorKind::InvalidModel, "builtin:cpn needs indices 0, 2, ..., dim");
                for (std::size_t i = 1; i < order.size(); ++i) m.cap.push_back({order[i], order[i - 1], 0, 1});
                m.cap.push_back({order.front(), order.back(), 1, 1});
            } else if (kind == "builtin:surface") {
                if (m.crit[order.back()].index != m.dim || m.crit[order.front()].index != 0)
                    throw Error(ErrorKind::InvalidModel, "builtin:surface needs a minimum and a maximum");
                m.cap.push_back({order.back(), order.front(), 0, 1});
            } else {
                throw Error(ErrorKind::ParseError, "unknown cap kind '" + kind + "'");
            }
        } else {
            sector_from_matrices(m, cap, 2, m.cap);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("model file: ") + e.what());
    }
    validate_model(m);
    return m;
}

BaseModel parse_model(const std::string& spec) {
    auto number_after = [&](std::size_t pos) {
        std::string s = spec.substr(pos);
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw Error(ErrorKind::ParseError, "bad model spec '" + spec + "'");
        return std::stol(s);
    };
    if (spec.rfind("cp:", 0) == 0) return cp_model(number_after(3));
    if (spec.rfind("surface:", 0) == 0) return surface_model(number_after(8));
    if (spec == "point") return point_model();
    if (spec.rfind("file:", 0) == 0) {
        std::ifstream in(spec.substr(5));
        if (!in) throw Error(ErrorKind::ParseError, "cannot open model file '" + spec.substr(5) + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::ParseError, std::string("model file: ") + e.what());
        }
        return model_from_json(j);
    }
    throw Error(ErrorKind::ParseError, "unknown model '" + spec + "' (use cp:<n>, surface:<g>, point or file:<path>)");
}

Window parse_window(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) throw Error(ErrorKind::ParseError, "window must look like a..b");
    auto side = [](const std::string& t, bool low) -> std::optional<Rat> {
        if (t == "inf" || t == "+inf" || (low && t == "-inf")) return std::nullopt;
        if (!low && t == "-inf") throw Error(ErrorKind::EmptyWindow, "upper end -inf");
        return parse_rational(t);
    };
    Window w{side(s.substr(0, dots), true), side(s.substr(dots + 2), false)};
    if (w.lo && w.hi && !(*w.lo < *w.hi)) throw Error(ErrorKind::EmptyWindow, "window '" + s + "' is empty");
    return w;
}

const std::vector<FloerGenerator>& FloerComplex::at(long d) const {
    static const std::vector<FloerGenerator> empty;
    if (d < complex.lo() || d > complex.hi()) return empty;
    return gens[static_cast<std::size_t>(d - complex.lo())];
}

long FloerComplex::position(long d, const FloerGenerator& g) const {
    const auto& v = at(d);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i].crit == g.crit && v[i].k == g.k) return static_cast<long>(i);
    return -1;
}

std::string fc_label(const BaseModel& model, const FloerGenerator& g) {
    return model.crit[g.crit].label + "[k=" + std::to_string(g.k) + "]";
}

namespace {

// Generators with action in `w` whose degree lies in `r` (if given); k is bounded by the window.
std::vector<std::pair<long, FloerGenerator>> collect(const BaseModel& model, const Window& w, long kmin, long kmax,
                                                     std::optional<DegreeRange> r) {
    std::vector<std::pair<long, FloerGenerator>> out;
    for (long k = kmin; k <= kmax; ++k) {
        if (!w.contains(model.fh_action(k))) continue;
        for (std::size_t q = 0; q < model.crit.size(); ++q) {
            long d = model.fh_degree(q, k);
            if (!r || r->contains(d)) out.push_back({d, {q, k}});
        }
    }
    return out;
}

}  // namespace

FloerComplex build_fc(const BaseModel& model, const Window& window, std::optional<DegreeRange> degrees, const FcOptions& opts) {
    if (window.lo && window.hi && !(*window.lo < *window.hi)) throw Error(ErrorKind::EmptyWindow, "window (a, b) needs a < b");
    if (degrees && degrees->lo > degrees->hi) throw Error(ErrorKind::DegreeOutOfRange, "empty degree range");
    std::vector<std::pair<long, FloerGenerator>> gens;
    bool truncated = false;
    if (model.aspherical()) {
        gens = collect(model, window, 0, 0, degrees);
        if (degrees) truncated = collect(model, window, 0, 0, std::nullopt).size() != gens.size();
    } else if (window.finite()) {
        // -k nu in (lo, hi)
        Rat a = -*window.hi / Rat(model.nu), b = -*window.lo / Rat(model.nu);
        Int kmin, kmax;
        mpz_fdiv_q(kmin.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
        mpz_cdiv_q(kmax.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
        gens = collect(model, window, kmin.get_si(), kmax.get_si(), degrees);
        if (degrees) truncated = collect(model, window, kmin.get_si(), kmax.get_si(), std::nullopt).size() != gens.size();
    } else {
        if (!degrees) throw Error(ErrorKind::DegreeOutOfRange, "an infinite window needs a degree range");
        // widen a half-integer action grid until the generator set in the degree range stops growing
        // and the grid covers every sphere class that can reach the range
        const long c = std::abs(model.chern_step());
        const long reach = (std::max(std::abs(degrees->lo), std::abs(degrees->hi)) + model.dim) / (2 * c) + 2;
        std::size_t prev = 0;
        bool stable = false;
        for (long step = 0, s = 1; step < opts.max_widening_steps; ++step, s *= 2) {
            Window grid{Rat(2 * -s - 1, 2) * Rat(model.nu), Rat(2 * s + 1, 2) * Rat(model.nu)};
            Window w{window.lo ? std::max(*window.lo, *grid.lo) : *grid.lo, window.hi ? std::min(*window.hi, *grid.hi) : *grid.hi};
            gens = collect(model, w, -s - 1, s + 1, degrees);
            if (step > 0 && gens.size() == prev && s > reach) {
                stable = true;
                break;
            }
            prev = gens.size();
        }
        if (!stable) throw Error(ErrorKind::UnstabilizedDegree, "window widening did not stabilize");
        truncated = true;
    }
    long lo, hi;
    if (degrees) {
        lo = degrees->lo;
        hi = degrees->hi;
    } else if (gens.empty()) {
        lo = 0;
        hi = -1;
    } else {
        lo = hi = gens.front().first;
        for (const auto& [d, g] : gens) {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    FloerComplex fc;
    fc.window = window;
    fc.complex = GradedComplex(lo, hi);
    fc.complex.set_margin(truncated ? 2 : 0);
    fc.gens.resize(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& [d, g] : gens) fc.gens[static_cast<std::size_t>(d - lo)].push_back(g);
    for (auto& v : fc.gens)
        std::sort(v.begin(), v.end(), [](const FloerGenerator& a, const FloerGenerator& b) {
            return a.k != b.k ? a.k < b.k : a.crit < b.crit;
        });
    for (long d = lo; d <= hi; ++d) {
        std::vector<std::string> labels;
        for (const auto& g : fc.at(d)) labels.push_back(fc_label(model, g));
        fc.complex.set_basis(d, std::move(labels));
    }
    for (long d = lo; d <= hi; ++d) {
        IntMatrix b(fc.at(d - 1).size(), fc.at(d).size());
        const auto& src = fc.at(d);
        for (std::size_t j = 0; j < src.size(); ++j)
            for (const auto& e : model.morse) {
                if (e.from != src[j].crit) continue;
                long i = fc.position(d - 1, {e.to, src[j].k});
                if (i >= 0) b(static_cast<std::size_t>(i), j) += e.coeff;
            }
        fc.complex.set_boundary(d, std::move(b));
    }
    return fc;
}

ChainMap cap_map(const BaseModel& model, long m, const FloerComplex& fc) {
    const GradedComplex& c = fc.complex;
    ChainMap psi{c, c, -2, {}};
    for (long d = c.lo(); d <= c.hi(); ++d) {
        const auto& src = fc.at(d);
        IntMatrix a(fc.at(d - 2).size(), src.size());
        for (std::size_t j = 0; j < src.size(); ++j)
            for (const auto& e : model.cap) {
                if (e.from != src[j].crit) continue;
                FloerGenerator t{e.to, src[j].k + e.dk};
                long i = fc.position(d - 2, t);
                if (i >= 0) {
                    a(static_cast<std::size_t>(i), j) += Int(m) * e.coeff;
                } else if (fc.window.hi && d - 2 >= c.lo() && model.fh_action(t.k) >= *fc.window.hi) {
                    // the windowed complex is a quotient by lower actions; escaping upward is not allowed
                    throw Error(ErrorKind::WindowMismatch, "cap raises action beyond the window");
                }
            }
        psi.maps.push_back(std::move(a));
    }
    if (auto bad = psi.commutation_failure())
        throw Error(ErrorKind::NotAChainMap, "cap data does not commute with the differential in degree " + std::to_string(*bad));
    return psi;
}

ChainMap cap_map(const BaseModel& model, long m, const Window& window, DegreeRange degrees) {
    return cap_map(model, m, build_fc(model, window, degrees));
}

IntMatrix InducedCap::psi_power(long d, std::size_t n) const {
    if (!degrees.contains(d) || !degrees.contains(d - 2 * static_cast<long>(n)))
        throw Error(ErrorKind::DegreeOutOfRange, "Psi^" + std::to_string(n) + " from degree " + std::to_string(d));
    IntMatrix p = IntMatrix::identity(rank(d));
    for (std::size_t i = 0; i < n; ++i) p = psi_at(d - 2 * static_cast<long>(i)) * p;
    return p;
}

InducedCap induced_cap(const BaseModel& model, long m, DegreeRange r) {
    FloerComplex fc = build_fc(model, Window::all(), DegreeRange{r.lo - 3, r.hi + 3});
    ChainMap psi = cap_map(model, m, fc);
    InducedCap ic;
    ic.degrees = r;
    for (long d = r.lo; d <= r.hi; ++d) {
        ic.fh.push_back(homology_basis_at(fc.complex, d));
        if (!ic.fh.back().torsion_free()) ic.torsion_free = false;
    }
    for (long d = r.lo; d <= r.hi; ++d) {
        const HomologyBasis& src = ic.at(d);
        IntMatrix a(ic.rank(d - 2), src.free_rank());
        if (r.contains(d - 2)) {
            const HomologyBasis& dst = ic.at(d - 2);
            IntMatrix map = psi.at(d);
            for (std::size_t j = 0; j < src.free_rank(); ++j) {
                IntVec y = dst.free_coordinates(map.apply(src.free_generator(j)));
                for (std::size_t i = 0; i < y.size(); ++i) a(i, j) = y[i];
            }
        }
        ic.psi.push_back(std::move(a));
    }
    return ic;
}

CapStabilization cap_stabilization(const BaseModel& model, long m) {
    const std::size_t bound = model.betti_sum();
    // one Lambda-period of degrees carries a Lambda-basis
    long period = model.aspherical() ? 2 * model.half_dim() + 1 : 2 * std::abs(model.chern_step());
    long top = model.aspherical() ? model.half_dim() : period - 1;
    long bottom = model.aspherical() ? -model.half_dim() : 0;
    DegreeRange r{bottom - 2 * static_cast<long>(bound + 2), top};
    InducedCap ic = induced_cap(model, m, r);
    CapStabilization out;
    for (std::size_t n = 0; n <= bound + 1; ++n) {
        std::size_t total = 0;
        for (long d = bottom; d <= top; ++d) total += rank(ic.psi_power(d, n));
        out.ranks.push_back(total);
    }
    for (std::size_t n = 1; n <= bound; ++n)
        if (out.ranks[n] == out.ranks[n + 1]) {
            out.n_stab = n;
            out.stabilized_image_rank = out.ranks[n];
            return out;
        }
    throw Error(ErrorKind::UnstabilizedDegree, "image of Psi^n did not stabilize within the Betti bound");
}

PrimitivityReport primitivity_report(const BaseModel& model, long m) { return {m == 1 && model.primitive_omega}; }

}  // namespace rfloer
