#pragma once

#include "syzlab/bigraded.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace syzlab {

// Coordinate slots of the total space: dy_i is slot i-1, dx_i is slot 2+i.
// Masks order slots as y1 < y2 < y3 < x1 < x2 < x3.
constexpr int dy_slot(int i) { return i - 1; }  // 1-based i
constexpr int dx_slot(int i) { return 2 + i; }
inline int slot_var(int slot) { return slot < 3 ? yvar(slot) : xvar(slot - 3); }

class DifferentialForm {
public:
    explicit DifferentialForm(int n = 2) : n_(n) {}

    // c * dz_{s_1} ^ ... ^ dz_{s_k}, slots in any order.
    static DifferentialForm term(int n, const std::vector<int>& slots, const ComplexExpr& c);
    static DifferentialForm dx(int n, int i) { return term(n, {dx_slot(i)}, ComplexExpr(1)); }
    static DifferentialForm dy(int n, int i) { return term(n, {dy_slot(i)}, ComplexExpr(1)); }

    int n() const { return n_; }
    const std::map<unsigned, ComplexExpr>& terms() const { return c_; }
    ComplexExpr coef(unsigned mask) const;
    void add(unsigned mask, const ComplexExpr& c);
    bool is_zero() const { return c_.empty(); }
    unsigned var_mask() const;

    DifferentialForm operator-() const;
    DifferentialForm& operator+=(const DifferentialForm& o);
    DifferentialForm& operator-=(const DifferentialForm& o);
    friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
    friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) { return a -= b; }
    friend DifferentialForm operator*(const ComplexExpr& s, const DifferentialForm& f);
    DifferentialForm re() const;
    DifferentialForm im() const;

    friend bool operator==(const DifferentialForm& a, const DifferentialForm& b);
    std::string str() const;

private:
    int n_;
    std::map<unsigned, ComplexExpr> c_;
};

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
// Exterior derivative by symbolic differentiation in every coordinate.
DifferentialForm exterior_derivative(const DifferentialForm& f);
// Front-slot contraction: iota(d/dz_slot) alpha = alpha(d/dz_slot, ...).
DifferentialForm contract(int slot, const DifferentialForm& f);
// Keep only the dx-part (restriction to a fibre).
DifferentialForm restrict_to_fibre(const DifferentialForm& f);
// Pullback along z_k -> phi_k(z); phi holds one expression per slot of the chart
// (y-slots first, then x-slots).
DifferentialForm pullback(const DifferentialForm& f, const std::vector<ScalarExpr>& phi);
DifferentialForm substitute(const DifferentialForm& f, const std::array<const ScalarExpr*, kNumVars>& r);

// theta (x) v  ->  theta ^ iota(v) (dx_1 ^ ... ^ dx_n).
DifferentialForm to_form(const BigradedElement& e);
// Inverse of to_form; throws DegreeOutOfRange when a term has no preimage.
BigradedElement from_form(const DifferentialForm& f);
// Sign (-1)^M of iota(d/dx_I) Omega_0 = (-1)^M dx_{I*}.
int contraction_sign(int n, IndexSet I);

// The standard symplectic form sum_i dx_i ^ dy_i.
DifferentialForm standard_omega(int n);

}  // namespace syzlab
