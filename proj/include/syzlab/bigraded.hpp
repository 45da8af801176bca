#pragma once

#include "syzlab/expr.hpp"

#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace syzlab {

// Index sets over {1..n} as bitmasks (bit i-1 for index i).
using IndexSet = unsigned;
IndexSet index_set(std::initializer_list<int> one_based);
int popcount(IndexSet s);
// (-1)^{#{(a, b) : a in A, b in B, a > b}}: the sign of merging A then B into order.
int merge_sign(IndexSet a, IndexSet b);

struct BiKey {
    IndexSet J = 0;  // dy_J
    IndexSet I = 0;  // d/dx_I
    friend bool operator<(const BiKey& a, const BiKey& b) { return a.J != b.J ? a.J < b.J : a.I < b.I; }
    friend bool operator==(const BiKey& a, const BiKey& b) { return a.J == b.J && a.I == b.I; }
};

struct Bidegree {
    int p = 0;  // -|I|
    int q = 0;  // |J|
    friend bool operator<(const Bidegree& a, const Bidegree& b) { return a.p != b.p ? a.p < b.p : a.q < b.q; }
    friend bool operator==(const Bidegree& a, const Bidegree& b) { return a.p == b.p && a.q == b.q; }
};

inline Bidegree bidegree_of(const BiKey& k) { return {-popcount(k.I), popcount(k.J)}; }

// Sparse element of the bigraded algebra: sum of c * dy_J (x) d/dx_I.
class BigradedElement {
public:
    explicit BigradedElement(int n = 2);

    // Entries given as ordered index lists (1-based, any order); the permutation
    // sign is absorbed into the coefficient. Repeated indices give zero.
    static BigradedElement term(int n, const std::vector<int>& J, const std::vector<int>& I, const ComplexExpr& c);
    static BigradedElement scalar(int n, const ComplexExpr& c) { return term(n, {}, {}, c); }

    int n() const { return n_; }
    const std::map<BiKey, ComplexExpr>& terms() const { return c_; }
    ComplexExpr coef(IndexSet J, IndexSet I) const;
    void add(IndexSet J, IndexSet I, const ComplexExpr& c);
    void add_ordered(const std::vector<int>& J, const std::vector<int>& I, const ComplexExpr& c);

    bool is_zero() const { return c_.empty(); }
    std::set<Bidegree> bidegrees() const;
    bool is_homogeneous() const { return bidegrees().size() <= 1; }
    BigradedElement component(Bidegree d) const;
    std::vector<BigradedElement> components() const;
    unsigned var_mask() const;

    BigradedElement operator-() const;
    BigradedElement& operator+=(const BigradedElement& o);
    BigradedElement& operator-=(const BigradedElement& o);
    friend BigradedElement operator+(BigradedElement a, const BigradedElement& b) { return a += b; }
    friend BigradedElement operator-(BigradedElement a, const BigradedElement& b) { return a -= b; }
    friend BigradedElement operator*(const ComplexExpr& s, const BigradedElement& e);
    BigradedElement re() const;
    BigradedElement im() const;
    BigradedElement map_coefficients(const std::function<ComplexExpr(const ComplexExpr&)>& f) const;

    friend bool operator==(const BigradedElement& a, const BigradedElement& b);
    std::string str() const;

private:
    int n_;
    std::map<BiKey, ComplexExpr> c_;
};

BigradedElement product(const BigradedElement& a, const BigradedElement& b);

enum class GradedOp { Dx, Dy, DxPrime };
struct GradedOperatorHandle {
    GradedOp op;
    Bidegree shift() const { return op == GradedOp::Dy ? Bidegree{0, 1} : Bidegree{1, 0}; }
    const char* name() const;
};

BigradedElement differential(GradedOp op, const BigradedElement& e);
inline BigradedElement d_x(const BigradedElement& e) { return differential(GradedOp::Dx, e); }
inline BigradedElement d_y(const BigradedElement& e) { return differential(GradedOp::Dy, e); }
inline BigradedElement d_xprime(const BigradedElement& e) { return differential(GradedOp::DxPrime, e); }

// Koszul sign exponent for homogeneous pieces: p p' + q q'.
int koszul(Bidegree a, Bidegree b);

// Phi^r_D for r in {2, 3}, extended bilinearly over homogeneous components.
BigradedElement operator_order_defect(GradedOp op, int r, const std::vector<BigradedElement>& args);
BigradedElement bracket(const BigradedElement& a, const BigradedElement& b);
// Vector-field formula for (-1,1) inputs: [v, w] = sum [v_l, w_m] dy_l ^ dy_m.
BigradedElement bracket_vector_fields(const BigradedElement& a, const BigradedElement& b);

// beta = sum beta_ij dy_j (x) d/dx_i from an n x n matrix.
BigradedElement beta_element(const Matrix<ComplexExpr>& beta);
Matrix<ComplexExpr> beta_matrix(const BigradedElement& beta);
BigradedElement exp_beta(const BigradedElement& beta);
BigradedElement power(const BigradedElement& a, int k);

}  // namespace syzlab
