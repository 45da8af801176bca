#pragma once

#include "syzlab/rational.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace syzlab {

// Variable slots: y1..y3 = 0..2, x1..x3 = 3..5, family parameters b1..b3 = 6..8.
constexpr int kNumVars = 9;
constexpr int yvar(int i) { return i; }      // i is 0-based
constexpr int xvar(int i) { return 3 + i; }
constexpr int bvar(int i) { return 6 + i; }
constexpr unsigned kYMask = 0x7u;
constexpr unsigned kXMask = 0x38u;
constexpr unsigned kBMask = 0x1C0u;
const char* var_name(int v);

class ScalarExpr;
struct AtomNode;
struct PolyNode;
using Atom = std::shared_ptr<const AtomNode>;

enum class AtomKind : std::uint8_t { Var, Pi, Sqrt, Inv, Exp, Sin, Cos };

struct Factor {
    Atom atom;
    int exp;
};
using Monomial = std::vector<Factor>;

struct Term {
    Monomial mono;
    Q coef;
};

// A scalar field kept in a canonical form: a finite sum of rational multiples of
// Laurent monomials in atoms (variables, pi, and sqrt/inv/exp/sin/cos of
// canonical subexpressions). Structural equality is decidable, so identities
// between polynomial expressions in these atoms are checked exactly.
class ScalarExpr {
public:
    ScalarExpr();
    ScalarExpr(long v);  // NOLINT(google-explicit-constructor)
    ScalarExpr(const Q& q);  // NOLINT(google-explicit-constructor)

    static ScalarExpr var(int id);
    static ScalarExpr pi();
    static ScalarExpr from_double(double v);

    ScalarExpr operator-() const;
    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
    ScalarExpr& operator+=(const ScalarExpr& o) { return *this = *this + o; }
    ScalarExpr& operator-=(const ScalarExpr& o) { return *this = *this - o; }
    ScalarExpr& operator*=(const ScalarExpr& o) { return *this = *this * o; }

    ScalarExpr pow(int k) const;
    ScalarExpr inverse() const;
    ScalarExpr diff(int var) const;
    // Simultaneous substitution; null entries leave the variable alone.
    ScalarExpr substitute(const std::array<const ScalarExpr*, kNumVars>& repl) const;
    ScalarExpr substitute(int var, const ScalarExpr& value) const;

    bool is_zero() const;
    bool is_constant() const;
    std::optional<Q> as_rational() const;
    unsigned var_mask() const;
    bool depends_on(int var) const { return (var_mask() >> var) & 1u; }
    // Polynomial degree in a variable, or -1 if it also occurs inside an atom
    // argument or with a negative power.
    int poly_degree_in(int var) const;

    double eval(const double* point) const;
    std::string str() const;
    const std::vector<Term>& terms() const;
    std::size_t hash() const;

    friend int compare(const ScalarExpr& a, const ScalarExpr& b);
    friend bool operator==(const ScalarExpr& a, const ScalarExpr& b) { return compare(a, b) == 0; }
    friend bool operator!=(const ScalarExpr& a, const ScalarExpr& b) { return compare(a, b) != 0; }
    friend bool operator<(const ScalarExpr& a, const ScalarExpr& b) { return compare(a, b) < 0; }

private:
    explicit ScalarExpr(std::shared_ptr<const PolyNode> p) : p_(std::move(p)) {}
    friend struct ExprBuilder;
    std::shared_ptr<const PolyNode> p_;
};

ScalarExpr sin(const ScalarExpr& a);
ScalarExpr cos(const ScalarExpr& a);
ScalarExpr exp(const ScalarExpr& a);
ScalarExpr sqrt(const ScalarExpr& a);

struct AtomNode {
    AtomKind kind;
    int var;         // only for Var
    ScalarExpr arg;  // for Sqrt/Inv/Exp/Sin/Cos
    unsigned mask;
    std::size_t hash;
};

int compare_atoms(const Atom& a, const Atom& b);

// x-variables occur only through periodic building blocks:
// sin/cos of 2*pi*(integer)*x_i + (x-free phase), or functions of such terms.
bool is_fibre_periodic(const ScalarExpr& e);

// Antiderivative in one variable for polynomial and sin/cos/exp-of-linear
// integrands. Throws Errc::NotExpressible otherwise.
ScalarExpr antiderivative(const ScalarExpr& e, int var);

ScalarExpr parse_expr(const std::string& text);

struct ComplexExpr {
    ScalarExpr re;
    ScalarExpr im;

    ComplexExpr() = default;
    ComplexExpr(ScalarExpr r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    ComplexExpr(ScalarExpr r, ScalarExpr i) : re(std::move(r)), im(std::move(i)) {}
    ComplexExpr(long v) : re(v) {}  // NOLINT(google-explicit-constructor)

    static ComplexExpr i() { return {ScalarExpr(), ScalarExpr(1)}; }

    ComplexExpr operator-() const { return {-re, -im}; }
    friend ComplexExpr operator+(const ComplexExpr& a, const ComplexExpr& b) { return {a.re + b.re, a.im + b.im}; }
    friend ComplexExpr operator-(const ComplexExpr& a, const ComplexExpr& b) { return {a.re - b.re, a.im - b.im}; }
    friend ComplexExpr operator*(const ComplexExpr& a, const ComplexExpr& b);
    friend ComplexExpr operator*(const ScalarExpr& s, const ComplexExpr& b) { return {s * b.re, s * b.im}; }
    ComplexExpr& operator+=(const ComplexExpr& o) { return *this = *this + o; }
    ComplexExpr& operator-=(const ComplexExpr& o) { return *this = *this - o; }

    ComplexExpr conj() const { return {re, -im}; }
    ComplexExpr diff(int var) const { return {re.diff(var), im.diff(var)}; }
    ComplexExpr substitute(const std::array<const ScalarExpr*, kNumVars>& r) const {
        return {re.substitute(r), im.substitute(r)};
    }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    unsigned var_mask() const { return re.var_mask() | im.var_mask(); }
    std::string str() const;
    friend bool operator==(const ComplexExpr& a, const ComplexExpr& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const ComplexExpr& a, const ComplexExpr& b) { return !(a == b); }
};

// Straight-line evaluation of many expressions with shared atoms.
class CompiledExprs {
public:
    CompiledExprs() = default;
    explicit CompiledExprs(const std::vector<ScalarExpr>& exprs);

    std::size_t size() const { return outputs_.size(); }
    std::size_t scratch_size() const { return kNumVars + 1 + atoms_.size(); }
    void eval(const double* point, double* out, std::vector<double>& scratch) const;
    std::vector<double> eval(const double* point) const;

private:
    struct CFactor { std::uint32_t slot; int exp; };
    struct CTerm { double coef; std::uint32_t fbeg, fend; };
    struct CPoly { std::uint32_t tbeg, tend; };
    struct CAtom { AtomKind kind; std::uint32_t arg; };

    std::uint32_t add_poly(const ScalarExpr& e, void* atom_index);
    std::uint32_t add_atom(const Atom& a, void* atom_index);
    double eval_poly(std::uint32_t p, const double* slots) const;

    std::vector<CFactor> factors_;
    std::vector<CTerm> terms_;
    std::vector<CPoly> polys_;
    std::vector<CAtom> atoms_;
    std::vector<std::uint32_t> outputs_;
};

template <class T>
using Matrix = std::vector<std::vector<T>>;

}  // namespace syzlab
