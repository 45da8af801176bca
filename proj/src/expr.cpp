#include "syzlab/expr.hpp"

#include "syzlab/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace syzlab {

struct PolyNode {
    std::vector<Term> terms;
    unsigned mask = 0;
    std::size_t hash = 0;
};

namespace {

inline std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const std::shared_ptr<const PolyNode>& zero_node() {
    static const auto z = std::make_shared<const PolyNode>();
    return z;
}

int compare_mono(const Monomial& a, const Monomial& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare_atoms(a[i].atom, b[i].atom);
        if (c != 0) return c;
        if (a[i].exp != b[i].exp) return a[i].exp < b[i].exp ? -1 : 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

std::size_t mono_hash(const Monomial& m) {
    std::size_t h = 17;
    for (const auto& f : m) h = mix(mix(h, f.atom->hash), static_cast<std::size_t>(f.exp + 1000));
    return h;
}

unsigned mono_mask(const Monomial& m) {
    unsigned k = 0;
    for (const auto& f : m) k |= f.atom->mask;
    return k;
}

bool needs_normalization(const Monomial& m) {
    for (const auto& f : m) {
        if (f.atom->kind == AtomKind::Sqrt && (f.exp >= 2 || f.exp <= -2)) return true;
        if (f.atom->kind == AtomKind::Inv && f.exp < 0) return true;
    }
    return false;
}

Monomial merge(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size()) {
            out.push_back(a[i++]);
        } else if (i == a.size()) {
            out.push_back(b[j++]);
        } else {
            int c = compare_atoms(a[i].atom, b[j].atom);
            if (c < 0) {
                out.push_back(a[i++]);
            } else if (c > 0) {
                out.push_back(b[j++]);
            } else {
                int e = a[i].exp + b[j].exp;
                if (e != 0) out.push_back({a[i].atom, e});
                ++i;
                ++j;
            }
        }
    }
    return out;
}

int kind_rank(AtomKind k) { return static_cast<int>(k); }

}  // namespace

const char* var_name(int v) {
    static const char* names[kNumVars] = {"y1", "y2", "y3", "x1", "x2", "x3", "b1", "b2", "b3"};
    if (v < 0 || v >= kNumVars) return "?";
    return names[v];
}

int compare_atoms(const Atom& a, const Atom& b) {
    if (a.get() == b.get()) return 0;
    if (a->kind != b->kind) return kind_rank(a->kind) < kind_rank(b->kind) ? -1 : 1;
    if (a->kind == AtomKind::Var) return a->var == b->var ? 0 : (a->var < b->var ? -1 : 1);
    if (a->kind == AtomKind::Pi) return 0;
    return compare(a->arg, b->arg);
}

struct ExprBuilder {
    static ScalarExpr finish(std::vector<Term>&& terms) {
        if (terms.empty()) return ScalarExpr();
        auto node = std::make_shared<PolyNode>();
        std::size_t h = 0x1234;
        unsigned mask = 0;
        for (const auto& t : terms) {
            h = mix(mix(h, mono_hash(t.mono)), hash_value(t.coef));
            mask |= mono_mask(t.mono);
        }
        node->terms = std::move(terms);
        node->hash = h;
        node->mask = mask;
        return ScalarExpr(std::shared_ptr<const PolyNode>(std::move(node)));
    }

    static ScalarExpr normalize(std::vector<Term>&& raw) {
        std::sort(raw.begin(), raw.end(), [](const Term& a, const Term& b) { return compare_mono(a.mono, b.mono) < 0; });
        std::vector<Term> out;
        out.reserve(raw.size());
        for (auto& t : raw) {
            if (!out.empty() && compare_mono(out.back().mono, t.mono) == 0) {
                out.back().coef += t.coef;
            } else {
                if (!out.empty() && out.back().coef == 0) out.pop_back();
                out.push_back(std::move(t));
            }
        }
        if (!out.empty() && out.back().coef == 0) out.pop_back();
        return finish(std::move(out));
    }

    static Atom make_atom(AtomKind kind, int var, ScalarExpr arg) {
        auto a = std::make_shared<AtomNode>();
        a->kind = kind;
        a->var = var;
        a->mask = kind == AtomKind::Var ? (1u << var) : arg.var_mask();
        a->hash = mix(mix(static_cast<std::size_t>(kind) * 7919u, static_cast<std::size_t>(var + 3)), arg.hash());
        a->arg = std::move(arg);
        return a;
    }

    // coef * monomial, resolving sqrt powers beyond +-1 and negative inv powers.
    static ScalarExpr mono_expr(const Q& coef, const Monomial& m) {
        if (coef == 0) return ScalarExpr();
        Monomial clean;
        std::vector<ScalarExpr> pending;
        for (const auto& f : m) {
            if (f.exp == 0) continue;
            if (f.atom->kind == AtomKind::Sqrt && (f.exp >= 2 || f.exp <= -2)) {
                int k = f.exp / 2;
                int r = f.exp - 2 * k;
                if (r != 0) clean.push_back({f.atom, r});
                pending.push_back(f.atom->arg.pow(k));
            } else if (f.atom->kind == AtomKind::Inv && f.exp < 0) {
                pending.push_back(f.atom->arg.pow(-f.exp));
            } else {
                clean.push_back(f);
            }
        }
        std::vector<Term> t;
        t.push_back({std::move(clean), coef});
        ScalarExpr r = finish(std::move(t));
        for (const auto& p : pending) r = r * p;
        return r;
    }

    static ScalarExpr atom_expr(const Atom& a) { return mono_expr(Q(1), Monomial{{a, 1}}); }
};

ScalarExpr::ScalarExpr() : p_(zero_node()) {}

ScalarExpr::ScalarExpr(long v) : ScalarExpr(Q(v)) {}

ScalarExpr::ScalarExpr(const Q& q) : p_(zero_node()) {
    if (q != 0) {
        std::vector<Term> t;
        t.push_back({Monomial{}, q});
        *this = ExprBuilder::finish(std::move(t));
    }
}

ScalarExpr ScalarExpr::var(int id) {
    if (id < 0 || id >= kNumVars) throw Error(Errc::Internal, "variable index out of range");
    return ExprBuilder::atom_expr(ExprBuilder::make_atom(AtomKind::Var, id, ScalarExpr()));
}

ScalarExpr ScalarExpr::pi() {
    static const ScalarExpr p = ExprBuilder::atom_expr(ExprBuilder::make_atom(AtomKind::Pi, -1, ScalarExpr()));
    return p;
}

ScalarExpr ScalarExpr::from_double(double v) { return ScalarExpr(rational_from_double(v)); }

const std::vector<Term>& ScalarExpr::terms() const { return p_->terms; }
std::size_t ScalarExpr::hash() const { return p_->hash; }
unsigned ScalarExpr::var_mask() const { return p_->mask; }
bool ScalarExpr::is_zero() const { return p_->terms.empty(); }

bool ScalarExpr::is_constant() const { return p_->mask == 0; }

std::optional<Q> ScalarExpr::as_rational() const {
    if (is_zero()) return Q(0);
    if (p_->terms.size() == 1 && p_->terms[0].mono.empty()) return p_->terms[0].coef;
    return std::nullopt;
}

int compare(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.p_.get() == b.p_.get()) return 0;
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    if (a.hash() == b.hash() && ta.size() == tb.size()) {
        // fall through to the structural comparison; hashes only short-cut inequality
    }
    std::size_t n = std::min(ta.size(), tb.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare_mono(ta[i].mono, tb[i].mono);
        if (c != 0) return c;
        int d = cmp(ta[i].coef, tb[i].coef);
        if (d != 0) return d < 0 ? -1 : 1;
    }
    if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
    return 0;
}

ScalarExpr ScalarExpr::operator-() const {
    if (is_zero()) return *this;
    std::vector<Term> t = terms();
    for (auto& x : t) x.coef = -x.coef;
    return ExprBuilder::finish(std::move(t));
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    std::vector<Term> out;
    out.reserve(ta.size() + tb.size());
    std::size_t i = 0, j = 0;
    while (i < ta.size() || j < tb.size()) {
        if (j == tb.size()) {
            out.push_back(ta[i++]);
        } else if (i == ta.size()) {
            out.push_back(tb[j++]);
        } else {
            int c = compare_mono(ta[i].mono, tb[j].mono);
            if (c < 0) {
                out.push_back(ta[i++]);
            } else if (c > 0) {
                out.push_back(tb[j++]);
            } else {
                Q s = ta[i].coef + tb[j].coef;
                if (s != 0) out.push_back({ta[i].mono, s});
                ++i;
                ++j;
            }
        }
    }
    return ExprBuilder::finish(std::move(out));
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return a + (-b); }

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.is_zero() || b.is_zero()) return ScalarExpr();
    auto scale = [](const ScalarExpr& e, const Q& c) {
        if (c == 1) return e;
        std::vector<Term> t = e.terms();
        for (auto& x : t) x.coef *= c;
        return ExprBuilder::finish(std::move(t));
    };
    if (auto qa = a.as_rational()) return scale(b, *qa);
    if (auto qb = b.as_rational()) return scale(a, *qb);

    std::vector<Term> raw;
    std::vector<ScalarExpr> slow;
    raw.reserve(a.terms().size() * b.terms().size());
    for (const auto& x : a.terms()) {
        for (const auto& y : b.terms()) {
            Monomial m = merge(x.mono, y.mono);
            Q c = x.coef * y.coef;
            if (needs_normalization(m))
                slow.push_back(ExprBuilder::mono_expr(c, m));
            else
                raw.push_back({std::move(m), std::move(c)});
        }
    }
    ScalarExpr r = ExprBuilder::normalize(std::move(raw));
    for (const auto& s : slow) r = r + s;
    return r;
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) { return a * b.inverse(); }

ScalarExpr ScalarExpr::inverse() const {
    if (is_zero()) throw Error(Errc::DivisionByZero, "division by an identically zero expression");
    const auto& t = terms();
    if (t.size() == 1) {
        Monomial m = t[0].mono;
        for (auto& f : m) f.exp = -f.exp;
        return ExprBuilder::mono_expr(Q(1) / t[0].coef, m);
    }
    Q lc = t[0].coef;
    ScalarExpr normalized = *this * ScalarExpr(Q(1) / lc);
    Atom a = ExprBuilder::make_atom(AtomKind::Inv, -1, normalized);
    return ExprBuilder::mono_expr(Q(1) / lc, Monomial{{a, 1}});
}

ScalarExpr ScalarExpr::pow(int k) const {
    if (k == 0) return ScalarExpr(1);
    if (k < 0) return inverse().pow(-k);
    if (is_zero()) return *this;
    const auto& t = terms();
    if (t.size() == 1) {
        Monomial m = t[0].mono;
        for (auto& f : m) f.exp *= k;
        Q c;
        mpz_pow_ui(c.get_num_mpz_t(), t[0].coef.get_num_mpz_t(), static_cast<unsigned long>(k));
        mpz_pow_ui(c.get_den_mpz_t(), t[0].coef.get_den_mpz_t(), static_cast<unsigned long>(k));
        c.canonicalize();
        return ExprBuilder::mono_expr(c, m);
    }
    ScalarExpr result(1), base = *this;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

ScalarExpr sin(const ScalarExpr& a) {
    if (a.is_zero()) return ScalarExpr();
    if (sgn(a.terms()[0].coef) < 0) return -sin(-a);
    return ExprBuilder::atom_expr(ExprBuilder::make_atom(AtomKind::Sin, -1, a));
}

ScalarExpr cos(const ScalarExpr& a) {
    if (a.is_zero()) return ScalarExpr(1);
    if (sgn(a.terms()[0].coef) < 0) return cos(-a);
    return ExprBuilder::atom_expr(ExprBuilder::make_atom(AtomKind::Cos, -1, a));
}

ScalarExpr exp(const ScalarExpr& a) {
    if (a.is_zero()) return ScalarExpr(1);
    return ExprBuilder::atom_expr(ExprBuilder::make_atom(AtomKind::Exp, -1, a));
}

ScalarExpr sqrt(const ScalarExpr& a) {
    if (a.is_zero()) return ScalarExpr();
    if (auto q = a.as_rational()) {
        if (sgn(*q) < 0) throw Error(Errc::Incompatible, "square root of a negative constant");
        Q r;
        if (exact_sqrt(*q, r)) return ScalarExpr(r);
    }
    return ExprBuilder::atom_expr(ExprBuilder::make_atom(AtomKind::Sqrt, -1, a));
}

namespace {

ScalarExpr atom_derivative(const Atom& a, int v) {
    switch (a->kind) {
        case AtomKind::Var: return a->var == v ? ScalarExpr(1) : ScalarExpr();
        case AtomKind::Pi: return ScalarExpr();
        case AtomKind::Sqrt:
            return ScalarExpr(Q(1, 2)) * a->arg.diff(v) * ExprBuilder::mono_expr(Q(1), Monomial{{a, -1}});
        case AtomKind::Inv: return -a->arg.diff(v) * ExprBuilder::mono_expr(Q(1), Monomial{{a, 2}});
        case AtomKind::Exp: return ExprBuilder::atom_expr(a) * a->arg.diff(v);
        case AtomKind::Sin: return cos(a->arg) * a->arg.diff(v);
        case AtomKind::Cos: return -sin(a->arg) * a->arg.diff(v);
    }
    return ScalarExpr();
}

}  // namespace

ScalarExpr ScalarExpr::diff(int v) const {
    if (!depends_on(v)) return ScalarExpr();
    ScalarExpr out;
    for (const auto& t : terms()) {
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            const auto& f = t.mono[i];
            if (!((f.atom->mask >> v) & 1u)) continue;
            Monomial rest = t.mono;
            rest[i].exp -= 1;
            if (rest[i].exp == 0) rest.erase(rest.begin() + static_cast<long>(i));
            out += ExprBuilder::mono_expr(t.coef * f.exp, rest) * atom_derivative(f.atom, v);
        }
    }
    return out;
}

ScalarExpr ScalarExpr::substitute(const std::array<const ScalarExpr*, kNumVars>& repl) const {
    unsigned rmask = 0;
    for (int v = 0; v < kNumVars; ++v)
        if (repl[v]) rmask |= 1u << v;
    if (!(var_mask() & rmask)) return *this;

    auto subst_atom = [&](const Atom& a) -> ScalarExpr {
        switch (a->kind) {
            case AtomKind::Var: return *repl[a->var];
            case AtomKind::Pi: return ScalarExpr::pi();
            case AtomKind::Sqrt: return sqrt(a->arg.substitute(repl));
            case AtomKind::Inv: return a->arg.substitute(repl).inverse();
            case AtomKind::Exp: return exp(a->arg.substitute(repl));
            case AtomKind::Sin: return sin(a->arg.substitute(repl));
            case AtomKind::Cos: return cos(a->arg.substitute(repl));
        }
        return ScalarExpr();
    };

    ScalarExpr out;
    for (const auto& t : terms()) {
        Monomial keep;
        std::vector<ScalarExpr> parts;
        for (const auto& f : t.mono) {
            if (f.atom->mask & rmask)
                parts.push_back(subst_atom(f.atom).pow(f.exp));
            else
                keep.push_back(f);
        }
        ScalarExpr prod = ExprBuilder::mono_expr(t.coef, keep);
        for (const auto& p : parts) prod = prod * p;
        out += prod;
    }
    return out;
}

ScalarExpr ScalarExpr::substitute(int var, const ScalarExpr& value) const {
    std::array<const ScalarExpr*, kNumVars> r{};
    r[static_cast<std::size_t>(var)] = &value;
    return substitute(r);
}

int ScalarExpr::poly_degree_in(int v) const {
    int deg = 0;
    for (const auto& t : terms()) {
        for (const auto& f : t.mono) {
            if (!((f.atom->mask >> v) & 1u)) continue;
            if (f.atom->kind != AtomKind::Var || f.exp < 0) return -1;
            deg = std::max(deg, f.exp);
        }
    }
    return deg;
}

namespace {

double ipow(double x, int e) {
    if (e == 1) return x;
    if (e == 2) return x * x;
    if (e < 0) return 1.0 / ipow(x, -e);
    double r = 1.0;
    while (e) {
        if (e & 1) r *= x;
        x *= x;
        e >>= 1;
    }
    return r;
}

double apply_atom(AtomKind k, double v) {
    switch (k) {
        case AtomKind::Sqrt: return std::sqrt(v);
        case AtomKind::Inv: return 1.0 / v;
        case AtomKind::Exp: return std::exp(v);
        case AtomKind::Sin: return std::sin(v);
        case AtomKind::Cos: return std::cos(v);
        default: return 0.0;
    }
}

double eval_atom(const Atom& a, const double* point) {
    switch (a->kind) {
        case AtomKind::Var: return point[a->var];
        case AtomKind::Pi: return M_PI;
        default: return apply_atom(a->kind, a->arg.eval(point));
    }
}

}  // namespace

double ScalarExpr::eval(const double* point) const {
    double s = 0.0;
    for (const auto& t : terms()) {
        double v = t.coef.get_d();
        for (const auto& f : t.mono) v *= ipow(eval_atom(f.atom, point), f.exp);
        s += v;
    }
    return s;
}

namespace {

std::string atom_str(const Atom& a) {
    switch (a->kind) {
        case AtomKind::Var: return var_name(a->var);
        case AtomKind::Pi: return "pi";
        case AtomKind::Sqrt: return "sqrt(" + a->arg.str() + ")";
        case AtomKind::Inv: return "(" + a->arg.str() + ")";
        case AtomKind::Exp: return "exp(" + a->arg.str() + ")";
        case AtomKind::Sin: return "sin(" + a->arg.str() + ")";
        case AtomKind::Cos: return "cos(" + a->arg.str() + ")";
    }
    return "?";
}

std::string factor_str(const Factor& f) {
    std::string s = atom_str(f.atom);
    int e = f.atom->kind == AtomKind::Inv ? -f.exp : f.exp;
    if (e == 1) return s;
    if (e < 0) return s + "^(" + std::to_string(e) + ")";
    return s + "^" + std::to_string(e);
}

}  // namespace

std::string ScalarExpr::str() const {
    if (is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms()) {
        Q c = t.coef;
        bool neg = sgn(c) < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        std::string fs;
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            if (i) fs += "*";
            fs += factor_str(t.mono[i]);
        }
        if (fs.empty()) {
            out += to_string(c);
        } else if (c == 1) {
            out += fs;
        } else {
            out += to_string(c) + "*" + fs;
        }
    }
    return out;
}

bool is_fibre_periodic(const ScalarExpr& e);

namespace {

bool linear_periodic_arg(const ScalarExpr& a) {
    for (const auto& t : a.terms()) {
        unsigned m = 0;
        for (const auto& f : t.mono) m |= f.atom->mask;
        if (!(m & kXMask)) continue;
        if (t.mono.size() != 2) return false;
        const auto& f0 = t.mono[0];
        const auto& f1 = t.mono[1];
        if (f0.atom->kind != AtomKind::Var || f0.exp != 1 || !((f0.atom->mask) & kXMask)) return false;
        if (f1.atom->kind != AtomKind::Pi || f1.exp != 1) return false;
        if (t.coef.get_den() != 1) return false;
        if (mpz_odd_p(t.coef.get_num_mpz_t())) return false;
    }
    return true;
}

}  // namespace

bool is_fibre_periodic(const ScalarExpr& e) {
    if (!(e.var_mask() & kXMask)) return true;
    for (const auto& t : e.terms()) {
        for (const auto& f : t.mono) {
            if (!(f.atom->mask & kXMask)) continue;
            switch (f.atom->kind) {
                case AtomKind::Var:
                case AtomKind::Pi: return false;
                case AtomKind::Sin:
                case AtomKind::Cos:
                    if (!linear_periodic_arg(f.atom->arg) && !is_fibre_periodic(f.atom->arg)) return false;
                    break;
                default:
                    if (!is_fibre_periodic(f.atom->arg)) return false;
            }
        }
    }
    return true;
}

namespace {

// integral of v^k * f(arg) dv where f in {sin, cos, exp}, arg linear in v with slope a.
ScalarExpr integrate_power_times(int k, AtomKind kind, const ScalarExpr& arg, const ScalarExpr& a, int v) {
    ScalarExpr inv_a = a.inverse();
    ScalarExpr F;  // antiderivative of f(arg)
    AtomKind next = kind;
    Q sign(1);
    switch (kind) {
        case AtomKind::Sin:
            F = -cos(arg) * inv_a;
            next = AtomKind::Cos;
            sign = -1;
            break;
        case AtomKind::Cos:
            F = sin(arg) * inv_a;
            next = AtomKind::Sin;
            break;
        case AtomKind::Exp:
            F = exp(arg) * inv_a;
            next = AtomKind::Exp;
            break;
        default: throw Error(Errc::NotExpressible, "unsupported antiderivative");
    }
    if (k == 0) return F;
    // integral v^k F = v^k G - k integral v^{k-1} G with F = sign*inv_a*f_next
    ScalarExpr vk = ScalarExpr::var(v).pow(k);
    ScalarExpr rest = integrate_power_times(k - 1, next, arg, a, v);
    return vk * F - ScalarExpr(Q(k) * sign) * inv_a * rest;
}

}  // namespace

ScalarExpr antiderivative(const ScalarExpr& e, int v) {
    ScalarExpr out;
    for (const auto& t : e.terms()) {
        Monomial indep;
        int k = 0;
        const Factor* special = nullptr;
        for (const auto& f : t.mono) {
            if (!((f.atom->mask >> v) & 1u)) {
                indep.push_back(f);
                continue;
            }
            if (f.atom->kind == AtomKind::Var) {
                k = f.exp;
                continue;
            }
            if (special || f.exp != 1 ||
                (f.atom->kind != AtomKind::Sin && f.atom->kind != AtomKind::Cos && f.atom->kind != AtomKind::Exp))
                throw Error(Errc::NotExpressible, std::string("no antiderivative in ") + var_name(v) + " for " + e.str());
            special = &f;
        }
        ScalarExpr c = ExprBuilder::mono_expr(t.coef, indep);
        if (!special) {
            if (k == -1) throw Error(Errc::NotExpressible, std::string("logarithmic antiderivative in ") + var_name(v));
            out += c * ScalarExpr(Q(1, k + 1)) * ScalarExpr::var(v).pow(k + 1);
            continue;
        }
        ScalarExpr slope = special->atom->arg.diff(v);
        if (slope.is_zero() || slope.depends_on(v) || k < 0)
            throw Error(Errc::NotExpressible, std::string("non-linear argument in ") + var_name(v) + " for " + e.str());
        out += c * integrate_power_times(k, special->atom->kind, special->atom->arg, slope, v);
    }
    return out;
}

ComplexExpr operator*(const ComplexExpr& a, const ComplexExpr& b) {
    if (a.im.is_zero() && b.im.is_zero()) return {a.re * b.re, ScalarExpr()};
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

std::string ComplexExpr::str() const {
    if (im.is_zero()) return re.str();
    if (re.is_zero()) return "i*(" + im.str() + ")";
    return re.str() + " + i*(" + im.str() + ")";
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    ScalarExpr parse() {
        ScalarExpr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(Errc::Parse, "expression '" + s_ + "' at " + std::to_string(pos_) + ": " + msg);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ScalarExpr expr() {
        ScalarExpr e = term();
        for (;;) {
            if (accept('+'))
                e = e + term();
            else if (accept('-'))
                e = e - term();
            else
                return e;
        }
    }

    ScalarExpr term() {
        ScalarExpr e = unary();
        for (;;) {
            if (accept('*')) {
                e = e * unary();
            } else if (accept('/')) {
                ScalarExpr d = unary();
                if (d.is_zero()) fail("division by zero");
                e = e / d;
            } else {
                return e;
            }
        }
    }

    ScalarExpr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    ScalarExpr power() {
        ScalarExpr base = primary();
        if (!accept('^')) return base;
        ScalarExpr ex = unary();
        auto q = ex.as_rational();
        if (!q) fail("exponent must be a constant");
        Q twice = *q * 2;
        if (twice.get_den() != 1) fail("exponent must be an integer or half-integer");
        long t = twice.get_num().get_si();
        if (t % 2 == 0) return base.pow(static_cast<int>(t / 2));
        return sqrt(base).pow(static_cast<int>(t));
    }

    ScalarExpr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ScalarExpr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string id = s_.substr(start, pos_ - start);
            if (id == "pi") return ScalarExpr::pi();
            for (int v = 0; v < kNumVars; ++v)
                if (id == var_name(v)) return ScalarExpr::var(v);
            if (id == "sin" || id == "cos" || id == "exp" || id == "sqrt") {
                if (!accept('(')) fail("expected '(' after " + id);
                ScalarExpr a = expr();
                if (!accept(')')) fail("expected ')'");
                if (id == "sin") return sin(a);
                if (id == "cos") return cos(a);
                if (id == "exp") return exp(a);
                return sqrt(a);
            }
            pos_ = start;
            fail("unknown identifier '" + id + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    ScalarExpr number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        return ScalarExpr(parse_rational(s_.substr(start, pos_ - start)));
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

ScalarExpr parse_expr(const std::string& text) { return Parser(text).parse(); }

// ---------------------------------------------------------------- compiled evaluation

namespace {

struct AtomLess {
    bool operator()(const Atom& a, const Atom& b) const { return compare_atoms(a, b) < 0; }
};
using AtomIndex = std::map<Atom, std::uint32_t, AtomLess>;

}  // namespace

CompiledExprs::CompiledExprs(const std::vector<ScalarExpr>& exprs) {
    AtomIndex index;
    outputs_.reserve(exprs.size());
    for (const auto& e : exprs) outputs_.push_back(add_poly(e, &index));
}

std::uint32_t CompiledExprs::add_atom(const Atom& a, void* idx) {
    if (a->kind == AtomKind::Var) return static_cast<std::uint32_t>(a->var);
    if (a->kind == AtomKind::Pi) return kNumVars;
    auto& index = *static_cast<AtomIndex*>(idx);
    auto it = index.find(a);
    if (it != index.end()) return it->second;
    std::uint32_t arg = add_poly(a->arg, idx);
    atoms_.push_back({a->kind, arg});
    auto slot = static_cast<std::uint32_t>(kNumVars + 1 + atoms_.size() - 1);
    index.emplace(a, slot);
    return slot;
}

std::uint32_t CompiledExprs::add_poly(const ScalarExpr& e, void* idx) {
    // Atoms first so that nested polys are laid out before this one's terms.
    std::vector<std::vector<CFactor>> fs;
    fs.reserve(e.terms().size());
    for (const auto& t : e.terms()) {
        std::vector<CFactor> f;
        for (const auto& x : t.mono) f.push_back({add_atom(x.atom, idx), x.exp});
        fs.push_back(std::move(f));
    }
    CPoly p{static_cast<std::uint32_t>(terms_.size()), 0};
    for (std::size_t i = 0; i < fs.size(); ++i) {
        CTerm ct{e.terms()[i].coef.get_d(), static_cast<std::uint32_t>(factors_.size()), 0};
        for (const auto& f : fs[i]) factors_.push_back(f);
        ct.fend = static_cast<std::uint32_t>(factors_.size());
        terms_.push_back(ct);
    }
    p.tend = static_cast<std::uint32_t>(terms_.size());
    polys_.push_back(p);
    return static_cast<std::uint32_t>(polys_.size() - 1);
}

double CompiledExprs::eval_poly(std::uint32_t p, const double* slots) const {
    double s = 0.0;
    const CPoly& cp = polys_[p];
    for (std::uint32_t t = cp.tbeg; t < cp.tend; ++t) {
        const CTerm& ct = terms_[t];
        double v = ct.coef;
        for (std::uint32_t f = ct.fbeg; f < ct.fend; ++f) v *= ipow(slots[factors_[f].slot], factors_[f].exp);
        s += v;
    }
    return s;
}

void CompiledExprs::eval(const double* point, double* out, std::vector<double>& scratch) const {
    scratch.resize(scratch_size());
    for (int v = 0; v < kNumVars; ++v) scratch[static_cast<std::size_t>(v)] = point[v];
    scratch[kNumVars] = M_PI;
    for (std::size_t a = 0; a < atoms_.size(); ++a)
        scratch[kNumVars + 1 + a] = apply_atom(atoms_[a].kind, eval_poly(atoms_[a].arg, scratch.data()));
    for (std::size_t i = 0; i < outputs_.size(); ++i) out[i] = eval_poly(outputs_[i], scratch.data());
}

std::vector<double> CompiledExprs::eval(const double* point) const {
    std::vector<double> out(outputs_.size()), scratch;
    eval(point, out.data(), scratch);
    return out;
}

}  // namespace syzlab
