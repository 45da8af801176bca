#pragma once

#include "syzlab/rational.hpp"

#include <string>
#include <vector>

namespace syzlab {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}
    static IntMatrix identity(int n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Z& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
    const Z& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

    IntMatrix transpose() const;
    bool is_zero() const;
    // Copies `b` into this matrix with its top-left corner at (r, c).
    void set_block(int r, int c, const IntMatrix& b);
    IntMatrix column_block(int c0, int count) const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
    friend IntMatrix operator-(const IntMatrix& a);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b);

    std::string str() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Z> data_;
};

// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... > 0.
struct SmithForm {
    IntMatrix U, D, V;
    std::vector<Z> diagonal;  // the nonzero invariant factors
    int rank() const { return static_cast<int>(diagonal.size()); }
};
SmithForm smith_normal_form(const IntMatrix& a);

// Columns form a basis of {v : A v = 0} in Z^cols (a saturated sublattice).
IntMatrix integer_kernel(const IntMatrix& a);
Z determinant(const IntMatrix& a);
// Throws Errc::NonInvertible unless |det| = 1.
IntMatrix unimodular_inverse(const IntMatrix& a);
int rational_rank(const IntMatrix& a);

// Finitely generated abelian group Z^rank + sum Z/d_i with d_i > 1, d_i | d_{i+1}.
struct AbelianGroup {
    int rank = 0;
    std::vector<Z> torsion;
    std::string str() const;
    Z torsion_order() const;
    friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) = default;
};
AbelianGroup make_group(int rank, std::vector<Z> divisors);

// Cochain complex C^0 -> C^1 -> ... with d[k] : C^k -> C^{k+1} (dims[k+1] x dims[k]).
// Throws Errc::BoundarySquare when d[k+1] d[k] != 0.
std::vector<AbelianGroup> cochain_cohomology(const std::vector<int>& dims, const std::vector<IntMatrix>& d);
// Chain complex with boundary[k] : C_k -> C_{k-1} (dims[k-1] x dims[k]), boundary[0] unused.
std::vector<AbelianGroup> chain_homology(const std::vector<int>& dims, const std::vector<IntMatrix>& boundary);

}  // namespace syzlab
