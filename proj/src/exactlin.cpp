#include "rfloer/exactlin.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace rfloer {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::NotAComplex: return "NotAComplex";
        case ErrorKind::NotSquare: return "NotSquare";
        case ErrorKind::NonPositiveTau: return "NonPositiveTau";
        case ErrorKind::BaseTooSmall: return "BaseTooSmall";
        case ErrorKind::BaseMismatch: return "BaseMismatch";
        case ErrorKind::OverflowIntoInfinite: return "OverflowIntoInfinite";
        case ErrorKind::TrivialRingPower: return "TrivialRingPower";
        case ErrorKind::NotAChainMap: return "NotAChainMap";
        case ErrorKind::DegreeOutOfRange: return "DegreeOutOfRange";
        case ErrorKind::EmptyWindow: return "EmptyWindow";
        case ErrorKind::UnstabilizedDegree: return "UnstabilizedDegree";
        case ErrorKind::WindowMismatch: return "WindowMismatch";
        case ErrorKind::ConsecutiveIndexModel: return "ConsecutiveIndexModel";
        case ErrorKind::UnstabilizedTruncation: return "UnstabilizedTruncation";
        case ErrorKind::TruncationTooNarrow: return "TruncationTooNarrow";
        case ErrorKind::UnboundedEnumeration: return "UnboundedEnumeration";
        case ErrorKind::InvalidModel: return "InvalidModel";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Error";
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw Error(ErrorKind::ShapeMismatch, "ragged matrix literal");
        for (long v : r) a_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) { return scalar(n, 1); }

IntMatrix IntMatrix::scalar(std::size_t n, const Int& c) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = c;
    return m;
}

IntMatrix IntMatrix::column_of(const IntVec& v) {
    IntMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

bool IntMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Int& x) { return sgn(x) == 0; });
}

bool IntMatrix::operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntVec IntMatrix::column(std::size_t j) const {
    IntVec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

IntVec IntMatrix::row(std::size_t i) const {
    return IntVec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

IntMatrix IntMatrix::cols_range(std::size_t begin, std::size_t end) const {
    IntMatrix m(rows_, end - begin);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = begin; j < end; ++j) m(i, j - begin) = (*this)(i, j);
    return m;
}

IntMatrix IntMatrix::rows_range(std::size_t begin, std::size_t end) const {
    IntMatrix m(end - begin, cols_);
    for (std::size_t i = begin; i < end; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(i - begin, j) = (*this)(i, j);
    return m;
}

IntVec IntMatrix::apply(const IntVec& x) const {
    if (x.size() != cols_) throw Error(ErrorKind::ShapeMismatch, "matrix-vector product");
    IntVec y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (sgn(x[j]) != 0) y[i] += (*this)(i, j) * x[j];
    return y;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
}

void IntMatrix::swap_cols(std::size_t j, std::size_t l) {
    if (j == l) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, j), (*this)(i, l));
}

void IntMatrix::add_row(std::size_t dst, std::size_t src, const Int& q) {
    for (std::size_t j = 0; j < cols_; ++j)
        if (sgn((*this)(src, j)) != 0) (*this)(dst, j) += q * (*this)(src, j);
}

void IntMatrix::add_col(std::size_t dst, std::size_t src, const Int& q) {
    for (std::size_t i = 0; i < rows_; ++i)
        if (sgn((*this)(i, src)) != 0) (*this)(i, dst) += q * (*this)(i, src);
}

void IntMatrix::negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
}

void IntMatrix::negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw Error(ErrorKind::ShapeMismatch, "matrix product");
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Int& x = a(i, k);
            if (sgn(x) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (sgn(b(k, j)) != 0) c(i, j) += x * b(k, j);
        }
    return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::ShapeMismatch, "matrix sum");
    IntMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) { return a + Int(-1) * b; }

IntMatrix operator*(const Int& c, const IntMatrix& a) {
    IntMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = c * a(i, j);
    return r;
}

IntMatrix hcat(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows()) throw Error(ErrorKind::ShapeMismatch, "hcat");
    IntMatrix c(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
    }
    return c;
}

IntMatrix vcat(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.cols()) throw Error(ErrorKind::ShapeMismatch, "vcat");
    IntMatrix c(a.rows() + b.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) = a(i, j);
        for (std::size_t i = 0; i < b.rows(); ++i) c(a.rows() + i, j) = b(i, j);
    }
    return c;
}

IntMatrix block2x2(const IntMatrix& a, const IntMatrix& b, const IntMatrix& c, const IntMatrix& d) {
    if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols())
        throw Error(ErrorKind::ShapeMismatch, "block matrix");
    return vcat(hcat(a, b), hcat(c, d));
}

IntVec SmithDecomposition::invariant_factors() const {
    IntVec f;
    for (std::size_t i = 0; i < rank; ++i) f.push_back(D(i, i));
    return f;
}

ZModulePresentation ZModulePresentation::cyclic(const Int& m) {
    return presentation_from_factors({m}, 0);
}

std::string ZModulePresentation::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    if (free_rank == 1) s = "Z";
    else if (free_rank > 1) s = "Z^" + std::to_string(free_rank);
    // group equal factors as Z_d^k
    for (std::size_t i = 0; i < torsion.size();) {
        std::size_t j = i;
        while (j < torsion.size() && torsion[j] == torsion[i]) ++j;
        if (!s.empty()) s += " ⊕ ";
        s += "Z_" + torsion[i].get_str();
        if (j - i > 1) s += "^" + std::to_string(j - i);
        i = j;
    }
    return s;
}

ZModulePresentation presentation_from_factors(const IntVec& factors, std::size_t extra_free) {
    ZModulePresentation p;
    p.free_rank = extra_free;
    for (const Int& f : factors) {
        Int a = abs(f);
        if (a == 0) ++p.free_rank;
        else if (a != 1) p.torsion.push_back(a);
    }
    std::sort(p.torsion.begin(), p.torsion.end());
    return p;
}

namespace {

int cmpabs(const Int& a, const Int& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

// Locates the nonzero entry of smallest absolute value in D[t.., t..].
bool find_pivot(const IntMatrix& d, std::size_t t, std::size_t& pi, std::size_t& pj) {
    bool found = false;
    Int best;
    for (std::size_t i = t; i < d.rows(); ++i)
        for (std::size_t j = t; j < d.cols(); ++j) {
            const Int& x = d(i, j);
            if (sgn(x) == 0) continue;
            if (!found || cmpabs(x, best) < 0) {
                found = true;
                best = abs(x);
                pi = i;
                pj = j;
                if (best == 1) return true;
            }
        }
    return found;
}

struct Reducer {
    SmithDecomposition s;

    void row_swap(std::size_t i, std::size_t k) {
        s.D.swap_rows(i, k);
        s.U.swap_rows(i, k);
        s.U_inv.swap_cols(i, k);
    }
    void col_swap(std::size_t j, std::size_t l) {
        s.D.swap_cols(j, l);
        s.V.swap_cols(j, l);
        s.V_inv.swap_rows(j, l);
    }
    // row dst += q row src
    void row_add(std::size_t dst, std::size_t src, const Int& q) {
        s.D.add_row(dst, src, q);
        s.U.add_row(dst, src, q);
        s.U_inv.add_col(src, dst, -q);
    }
    // col dst += q col src
    void col_add(std::size_t dst, std::size_t src, const Int& q) {
        s.D.add_col(dst, src, q);
        s.V.add_col(dst, src, q);
        s.V_inv.add_row(src, dst, -q);
    }
    void row_negate(std::size_t i) {
        s.D.negate_row(i);
        s.U.negate_row(i);
        s.U_inv.negate_col(i);
    }
};

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    Reducer r;
    r.s.D = a;
    r.s.U = IntMatrix::identity(m);
    r.s.U_inv = IntMatrix::identity(m);
    r.s.V = IntMatrix::identity(n);
    r.s.V_inv = IntMatrix::identity(n);
    IntMatrix& d = r.s.D;

    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
        std::size_t pi = 0, pj = 0;
        if (!find_pivot(d, t, pi, pj)) break;
        r.row_swap(t, pi);
        r.col_swap(t, pj);
        for (;;) {
            for (std::size_t i = t + 1; i < m; ++i) {
                if (sgn(d(i, t)) == 0) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
                if (sgn(q) != 0) r.row_add(i, t, -q);
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (sgn(d(t, j)) == 0) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
                if (sgn(q) != 0) r.col_add(j, t, -q);
            }
            // remainders smaller than the pivot become the new pivot
            std::size_t bi = t, bj = t;
            for (std::size_t i = t + 1; i < m; ++i)
                if (sgn(d(i, t)) != 0 && cmpabs(d(i, t), d(bi, bj)) < 0) { bi = i; bj = t; }
            for (std::size_t j = t + 1; j < n; ++j)
                if (sgn(d(t, j)) != 0 && cmpabs(d(t, j), d(bi, bj)) < 0) { bi = t; bj = j; }
            if (bi != t || bj != t) {
                if (bi != t) r.row_swap(t, bi);
                else r.col_swap(t, bj);
                continue;
            }
            bool fixed = false;
            for (std::size_t i = t + 1; i < m && !fixed; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
                        r.row_add(t, i, 1);
                        fixed = true;
                        break;
                    }
            if (!fixed) break;
        }
        if (sgn(d(t, t)) < 0) r.row_negate(t);
    }
    r.s.rank = t;
    return r.s;
}

std::vector<SmithDecomposition> smith_normal_form_batch(const std::vector<IntMatrix>& as) {
    std::vector<SmithDecomposition> out(as.size());
    const long n = static_cast<long>(as.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) out[i] = smith_normal_form(as[i]);
    return out;
}

std::vector<SmithDecomposition> smith_normal_form_batch_serial(const std::vector<IntMatrix>& as) {
    std::vector<SmithDecomposition> out;
    out.reserve(as.size());
    for (const auto& a : as) out.push_back(smith_normal_form(a));
    return out;
}

void check_complex_pair(const IntMatrix& d_out, const IntMatrix& d_in) {
    if (d_out.cols() != d_in.rows())
        throw Error(ErrorKind::ShapeMismatch, "d_out has " + std::to_string(d_out.cols()) +
                                                  " columns but d_in has " + std::to_string(d_in.rows()) + " rows");
    if (!(d_out * d_in).is_zero()) throw Error(ErrorKind::NotAComplex, "d_out * d_in != 0");
}

HomologyBasis homology_basis(const IntMatrix& d_out, const IntMatrix& d_in) {
    check_complex_pair(d_out, d_in);
    const std::size_t n = d_out.cols();
    HomologyBasis h;
    h.ambient = n;
    SmithDecomposition s = smith_normal_form(d_out);
    h.cycles = s.V.cols_range(s.rank, n);
    h.cycle_coords = s.V_inv.rows_range(s.rank, n);
    IntMatrix x = h.cycle_coords * d_in;
    SmithDecomposition sx = smith_normal_form(x);
    h.Q = sx.U;
    h.Q_inv = sx.U_inv;
    h.factors = sx.invariant_factors();
    h.group = presentation_from_factors(h.factors, h.cycles.cols() - sx.rank);
    return h;
}

IntVec HomologyBasis::coordinates(const IntVec& cycle) const {
    IntVec y = Q.apply(cycle_coords.apply(cycle));
    for (std::size_t i = 0; i < factors.size(); ++i) {
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), y[i].get_mpz_t(), factors[i].get_mpz_t());
        y[i] = r;
    }
    return y;
}

IntVec HomologyBasis::free_coordinates(const IntVec& cycle) const {
    IntVec y = Q.apply(cycle_coords.apply(cycle));
    return IntVec(y.begin() + static_cast<long>(first_free()), y.end());
}

IntVec HomologyBasis::free_generator(std::size_t i) const {
    IntVec e(num_cycles());
    e[first_free() + i] = 1;
    return cycles.apply(Q_inv.apply(e));
}

ZModulePresentation homology(const IntMatrix& d_out, const IntMatrix& d_in) {
    return homology_basis(d_out, d_in).group;
}

ZModulePresentation cokernel(const IntMatrix& a) {
    SmithDecomposition s = smith_normal_form(a);
    return presentation_from_factors(s.invariant_factors(), a.rows() - s.rank);
}

bool is_surjective_over_Z(const IntMatrix& a) { return cokernel(a).is_zero(); }

IntMatrix matrix_power(const IntMatrix& a, std::size_t n) {
    if (!a.is_square()) throw Error(ErrorKind::NotSquare, "matrix_power needs a square matrix");
    IntMatrix result = IntMatrix::identity(a.rows());
    IntMatrix base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

IntMatrix kernel_basis(const IntMatrix& a) {
    SmithDecomposition s = smith_normal_form(a);
    return s.V.cols_range(s.rank, a.cols());
}

std::size_t rank(const IntMatrix& a) { return smith_normal_form(a).rank; }

std::size_t rank_bareiss(const IntMatrix& a) {
    IntMatrix m = a;
    const std::size_t rows = m.rows(), cols = m.cols();
    std::size_t r = 0;
    Int prev = 1;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && sgn(m(p, c)) == 0) ++p;
        if (p == rows) continue;
        m.swap_rows(p, r);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                Int v = m(r, c) * m(i, j) - m(i, c) * m(r, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m(i, j) = v;
            }
            m(i, c) = 0;
        }
        prev = m(r, c);
        ++r;
    }
    return r;
}

std::size_t rank_mod_p(const IntMatrix& a, unsigned long p) {
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<unsigned long> m(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            Int r;
            mpz_fdiv_r_ui(r.get_mpz_t(), a(i, j).get_mpz_t(), p);
            m[i * cols + j] = r.get_ui();
        }
    auto inv = [p](unsigned long x) {
        unsigned long result = 1, e = p - 2;
        unsigned long long b = x;
        while (e) {
            if (e & 1) result = static_cast<unsigned long>((static_cast<unsigned long long>(result) * b) % p);
            b = (b * b) % p;
            e >>= 1;
        }
        return result;
    };
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv * cols + c] == 0) ++piv;
        if (piv == rows) continue;
        for (std::size_t j = 0; j < cols; ++j) std::swap(m[piv * cols + j], m[r * cols + j]);
        unsigned long iv = inv(m[r * cols + c]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            unsigned long f = static_cast<unsigned long>((static_cast<unsigned long long>(m[i * cols + c]) * iv) % p);
            if (f == 0) continue;
            for (std::size_t j = c; j < cols; ++j) {
                unsigned long long sub = (static_cast<unsigned long long>(f) * m[r * cols + j]) % p;
                m[i * cols + j] = static_cast<unsigned long>((m[i * cols + j] + p - sub) % p);
            }
        }
        ++r;
    }
    return r;
}

Int determinant(const IntMatrix& a) {
    if (!a.is_square()) throw Error(ErrorKind::NotSquare, "determinant needs a square matrix");
    IntMatrix m = a;
    const std::size_t n = m.rows();
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && sgn(m(p, k)) == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            m.swap_rows(p, k);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int v = m(k, k) * m(i, j) - m(i, k) * m(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m(i, j) = v;
            }
        }
        prev = m(k, k);
    }
    return n == 0 ? Int(1) : Int(sign * m(n - 1, n - 1));
}

SpanTester::SpanTester(const IntMatrix& span) : rows_(span.rows()), snf_(smith_normal_form(span)) {}

bool SpanTester::contains(const IntVec& v) const {
    if (v.size() != rows_) throw Error(ErrorKind::ShapeMismatch, "span membership");
    IntVec c = snf_.U.apply(v);
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i < snf_.rank) {
            if (!mpz_divisible_p(c[i].get_mpz_t(), snf_.D(i, i).get_mpz_t())) return false;
        } else if (sgn(c[i]) != 0) {
            return false;
        }
    }
    return true;
}

bool SpanTester::contains_columns(const IntMatrix& m) const {
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!contains(m.column(j))) return false;
    return true;
}

}  // namespace rfloer
