#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "rfloer/errors.hpp"

namespace rfloer {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix scalar(std::size_t n, const Int& c);
    static IntMatrix column_of(const IntVec& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool is_zero() const;
    bool is_square() const { return rows_ == cols_; }
    bool operator==(const IntMatrix& o) const;
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    IntMatrix transpose() const;
    IntVec column(std::size_t j) const;
    IntVec row(std::size_t i) const;
    IntMatrix cols_range(std::size_t begin, std::size_t end) const;
    IntMatrix rows_range(std::size_t begin, std::size_t end) const;
    IntVec apply(const IntVec& x) const;

    // elementary operations, used by the Smith reduction
    void swap_rows(std::size_t i, std::size_t k);
    void swap_cols(std::size_t j, std::size_t l);
    void add_row(std::size_t dst, std::size_t src, const Int& q);  // row dst += q * row src
    void add_col(std::size_t dst, std::size_t src, const Int& q);  // col dst += q * col src
    void negate_row(std::size_t i);
    void negate_col(std::size_t j);

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> a_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator*(const Int& c, const IntMatrix& a);

IntMatrix hcat(const IntMatrix& a, const IntMatrix& b);
IntMatrix vcat(const IntMatrix& a, const IntMatrix& b);
// [[a, b], [c, d]]; zero-size blocks are fine as long as shapes agree
IntMatrix block2x2(const IntMatrix& a, const IntMatrix& b, const IntMatrix& c, const IntMatrix& d);

struct SmithDecomposition {
    IntMatrix U, D, V;
    IntMatrix U_inv, V_inv;
    std::size_t rank = 0;

    // nonzero diagonal entries d_1 | d_2 | ...
    IntVec invariant_factors() const;
};

struct ZModulePresentation {
    std::size_t free_rank = 0;
    IntVec torsion;  // each >= 2, each divides the next

    bool is_zero() const { return free_rank == 0 && torsion.empty(); }
    bool operator==(const ZModulePresentation& o) const {
        return free_rank == o.free_rank && torsion == o.torsion;
    }
    bool operator!=(const ZModulePresentation& o) const { return !(*this == o); }
    std::string to_string() const;

    static ZModulePresentation free(std::size_t r) { return {r, {}}; }
    static ZModulePresentation cyclic(const Int& m);
};

// Builds the canonical presentation from a list of diagonal entries (zeros count as free summands
// only through `extra_free`). Units are dropped.
ZModulePresentation presentation_from_factors(const IntVec& factors, std::size_t extra_free);

SmithDecomposition smith_normal_form(const IntMatrix& a);
std::vector<SmithDecomposition> smith_normal_form_batch(const std::vector<IntMatrix>& as);
std::vector<SmithDecomposition> smith_normal_form_batch_serial(const std::vector<IntMatrix>& as);

// Cycle/boundary data of one degree: H = ker(d_out) / im(d_in).
struct HomologyBasis {
    std::size_t ambient = 0;
    IntMatrix cycles;        // ambient x z, a Z-basis of ker(d_out)
    IntMatrix cycle_coords;  // z x ambient, integral left inverse of `cycles` on ker(d_out)
    IntMatrix Q;             // z x z unimodular, homology coordinates y = Q x
    IntMatrix Q_inv;
    IntVec factors;          // diagonal of SNF of im(d_in) written in cycle coordinates
    ZModulePresentation group;

    std::size_t num_cycles() const { return cycles.cols(); }
    std::size_t first_free() const { return factors.size(); }
    // Coordinates of a cycle in the adapted basis: first factors.size() entries are torsion-type
    // (taken modulo the factor), the rest are free coordinates.
    IntVec coordinates(const IntVec& cycle) const;
    IntVec free_coordinates(const IntVec& cycle) const;
    // Cycle representing the i-th free generator.
    IntVec free_generator(std::size_t i) const;
    std::size_t free_rank() const { return group.free_rank; }
    bool torsion_free() const { return group.torsion.empty(); }
};

void check_complex_pair(const IntMatrix& d_out, const IntMatrix& d_in);
HomologyBasis homology_basis(const IntMatrix& d_out, const IntMatrix& d_in);
ZModulePresentation homology(const IntMatrix& d_out, const IntMatrix& d_in);

ZModulePresentation cokernel(const IntMatrix& a);
bool is_surjective_over_Z(const IntMatrix& a);
IntMatrix matrix_power(const IntMatrix& a, std::size_t n);

IntMatrix kernel_basis(const IntMatrix& a);
std::size_t rank(const IntMatrix& a);
std::size_t rank_bareiss(const IntMatrix& a);
std::size_t rank_mod_p(const IntMatrix& a, unsigned long p);
Int determinant(const IntMatrix& a);

// Column span membership over Z, via one Smith decomposition of `span`.
class SpanTester {
public:
    explicit SpanTester(const IntMatrix& span);
    bool contains(const IntVec& v) const;
    bool contains_columns(const IntMatrix& m) const;

private:
    std::size_t rows_;
    SmithDecomposition snf_;
};

}  // namespace rfloer
