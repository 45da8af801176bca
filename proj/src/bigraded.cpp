#include "syzlab/bigraded.hpp"

#include "syzlab/error.hpp"

#include <bit>
#include <sstream>

namespace syzlab {

IndexSet index_set(std::initializer_list<int> one_based) {
    IndexSet s = 0;
    for (int i : one_based) s |= 1u << (i - 1);
    return s;
}

int popcount(IndexSet s) { return std::popcount(s); }

int merge_sign(IndexSet a, IndexSet b) {
    int inversions = 0;
    for (unsigned x = a; x; x &= x - 1) {
        int bit = std::countr_zero(x);
        inversions += std::popcount(b & ((1u << bit) - 1u));
    }
    return (inversions & 1) ? -1 : 1;
}

namespace {

// Sign and set of an ordered index list; sign 0 when indices repeat.
std::pair<int, IndexSet> ordered_to_set(const std::vector<int>& idx, int n) {
    IndexSet s = 0;
    int sign = 1;
    for (int i : idx) {
        if (i < 1 || i > n) throw Error(Errc::DegreeOutOfRange, "index " + std::to_string(i) + " outside 1.." + std::to_string(n));
        IndexSet bit = 1u << (i - 1);
        if (s & bit) return {0, 0};
        // moving i past the already placed larger indices
        if (std::popcount(s & ~((bit << 1) - 1u)) & 1) sign = -sign;
        s |= bit;
    }
    return {sign, s};
}

void check_same_chart(const BigradedElement& a, const BigradedElement& b) {
    if (a.n() != b.n()) throw Error(Errc::ChartMismatch, "bigraded elements over charts of different dimension");
}

std::string set_str(IndexSet s) {
    std::string o;
    for (int i = 0; i < 3; ++i)
        if (s & (1u << i)) o += std::to_string(i + 1);
    return o;
}

}  // namespace

BigradedElement::BigradedElement(int n) : n_(n) {
    if (n < 1 || n > 3) throw Error(Errc::Schema, "dimension must be 1, 2 or 3");
}

BigradedElement BigradedElement::term(int n, const std::vector<int>& J, const std::vector<int>& I, const ComplexExpr& c) {
    BigradedElement e(n);
    e.add_ordered(J, I, c);
    return e;
}

void BigradedElement::add_ordered(const std::vector<int>& J, const std::vector<int>& I, const ComplexExpr& c) {
    auto [sj, mj] = ordered_to_set(J, n_);
    auto [si, mi] = ordered_to_set(I, n_);
    if (sj * si == 0) return;
    add(mj, mi, sj * si == 1 ? c : -c);
}

void BigradedElement::add(IndexSet J, IndexSet I, const ComplexExpr& c) {
    IndexSet full = (1u << n_) - 1u;
    if ((J & ~full) || (I & ~full)) throw Error(Errc::DegreeOutOfRange, "index set outside the chart dimension");
    if (c.is_zero()) return;
    BiKey k{J, I};
    auto it = c_.find(k);
    if (it == c_.end()) {
        c_.emplace(k, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) c_.erase(it);
    }
}

ComplexExpr BigradedElement::coef(IndexSet J, IndexSet I) const {
    auto it = c_.find(BiKey{J, I});
    return it == c_.end() ? ComplexExpr() : it->second;
}

std::set<Bidegree> BigradedElement::bidegrees() const {
    std::set<Bidegree> s;
    for (const auto& [k, v] : c_) s.insert(bidegree_of(k));
    return s;
}

BigradedElement BigradedElement::component(Bidegree d) const {
    BigradedElement out(n_);
    for (const auto& [k, v] : c_)
        if (bidegree_of(k) == d) out.c_.emplace(k, v);
    return out;
}

std::vector<BigradedElement> BigradedElement::components() const {
    std::vector<BigradedElement> out;
    for (const auto& d : bidegrees()) out.push_back(component(d));
    return out;
}

unsigned BigradedElement::var_mask() const {
    unsigned m = 0;
    for (const auto& [k, v] : c_) m |= v.var_mask();
    return m;
}

BigradedElement BigradedElement::operator-() const {
    BigradedElement out(n_);
    for (const auto& [k, v] : c_) out.c_.emplace(k, -v);
    return out;
}

BigradedElement& BigradedElement::operator+=(const BigradedElement& o) {
    check_same_chart(*this, o);
    for (const auto& [k, v] : o.c_) add(k.J, k.I, v);
    return *this;
}

BigradedElement& BigradedElement::operator-=(const BigradedElement& o) {
    check_same_chart(*this, o);
    for (const auto& [k, v] : o.c_) add(k.J, k.I, -v);
    return *this;
}

BigradedElement operator*(const ComplexExpr& s, const BigradedElement& e) {
    BigradedElement out(e.n());
    for (const auto& [k, v] : e.terms()) out.add(k.J, k.I, s * v);
    return out;
}

BigradedElement BigradedElement::re() const {
    return map_coefficients([](const ComplexExpr& c) { return ComplexExpr(c.re); });
}

BigradedElement BigradedElement::im() const {
    return map_coefficients([](const ComplexExpr& c) { return ComplexExpr(c.im); });
}

BigradedElement BigradedElement::map_coefficients(const std::function<ComplexExpr(const ComplexExpr&)>& f) const {
    BigradedElement out(n_);
    for (const auto& [k, v] : c_) out.add(k.J, k.I, f(v));
    return out;
}

bool operator==(const BigradedElement& a, const BigradedElement& b) {
    if (a.n_ != b.n_ || a.c_.size() != b.c_.size()) return false;
    auto it = b.c_.begin();
    for (const auto& [k, v] : a.c_) {
        if (!(k == it->first) || v != it->second) return false;
        ++it;
    }
    return true;
}

std::string BigradedElement::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << v.str() << ")";
        if (k.J) os << " dy" << set_str(k.J);
        if (k.I) os << " d/dx" << set_str(k.I);
    }
    return os.str();
}

BigradedElement product(const BigradedElement& a, const BigradedElement& b) {
    check_same_chart(a, b);
    BigradedElement out(a.n());
    for (const auto& [ka, va] : a.terms()) {
        for (const auto& [kb, vb] : b.terms()) {
            if ((ka.J & kb.J) || (ka.I & kb.I)) continue;
            int s = merge_sign(ka.J, kb.J) * merge_sign(ka.I, kb.I);
            ComplexExpr c = va * vb;
            out.add(ka.J | kb.J, ka.I | kb.I, s > 0 ? c : -c);
        }
    }
    return out;
}

const char* GradedOperatorHandle::name() const {
    switch (op) {
        case GradedOp::Dx: return "d_x";
        case GradedOp::Dy: return "d_y";
        case GradedOp::DxPrime: return "d_x'";
    }
    return "?";
}

BigradedElement differential(GradedOp op, const BigradedElement& e) {
    int n = e.n();
    BigradedElement out(n);
    for (const auto& [k, c] : e.terms()) {
        if (op == GradedOp::Dy) {
            for (int kk = 0; kk < n; ++kk) {
                IndexSet bit = 1u << kk;
                if (k.J & bit) continue;
                ComplexExpr d = c.diff(yvar(kk));
                if (d.is_zero()) continue;
                // dy_k ^ dy_J reordered
                int s = (std::popcount(k.J & (bit - 1u)) & 1) ? -1 : 1;
                out.add(k.J | bit, k.I, s > 0 ? d : -d);
            }
        } else {
            int qsign = (std::popcount(k.J) & 1) ? -1 : 1;
            if (op == GradedOp::DxPrime) {
                int p = -std::popcount(k.I), q = std::popcount(k.J);
                if (((p + q + 1) % 2 + 2) % 2 == 1) qsign = -qsign;
            }
            for (int i = 0; i < n; ++i) {
                IndexSet bit = 1u << i;
                if (!(k.I & bit)) continue;
                ComplexExpr d = c.diff(xvar(i));
                if (d.is_zero()) continue;
                // d/dx_I with d/dx_i moved to the back, then contracted with dx_i
                int s = qsign * ((std::popcount(k.I & ~((bit << 1) - 1u)) & 1) ? -1 : 1);
                out.add(k.J, k.I & ~bit, s > 0 ? d : -d);
            }
        }
    }
    return out;
}

int koszul(Bidegree a, Bidegree b) { return a.p * b.p + a.q * b.q; }

namespace {

inline BigradedElement signed_elem(int exponent, const BigradedElement& e) { return (exponent & 1) ? -e : e; }

Bidegree degree_of(const BigradedElement& e) {
    auto d = e.bidegrees();
    return d.empty() ? Bidegree{} : *d.begin();
}

BigradedElement apply(GradedOp op, const BigradedElement& e) { return differential(op, e); }

// Homogeneous pieces only.
BigradedElement phi2_h(GradedOp op, const BigradedElement& a, const BigradedElement& b) {
    int n = a.n();
    BigradedElement one = BigradedElement::scalar(n, ComplexExpr(1));
    BigradedElement ab = product(a, b);
    BigradedElement r = apply(op, ab);
    r -= product(apply(op, a), b);
    r -= signed_elem(koszul(degree_of(a), degree_of(b)), product(apply(op, b), a));
    r += product(apply(op, one), ab);
    return r;
}

BigradedElement phi2(GradedOp op, const BigradedElement& a, const BigradedElement& b) {
    BigradedElement out(a.n());
    for (const auto& ca : a.components())
        for (const auto& cb : b.components()) out += phi2_h(op, ca, cb);
    return out;
}

BigradedElement phi3_h(GradedOp op, const BigradedElement& a, const BigradedElement& b, const BigradedElement& c) {
    BigradedElement r = phi2(op, a, product(b, c));
    r -= product(phi2(op, a, b), c);
    r -= signed_elem(koszul(degree_of(b), degree_of(c)), product(phi2(op, a, c), b));
    return r;
}

}  // namespace

BigradedElement operator_order_defect(GradedOp op, int r, const std::vector<BigradedElement>& args) {
    if (r != 2 && r != 3) throw Error(Errc::UnsupportedOrder, "operator order defect supports r = 2 or 3");
    if (static_cast<int>(args.size()) != r) throw Error(Errc::UnsupportedOrder, "expected exactly r arguments");
    for (std::size_t i = 1; i < args.size(); ++i) check_same_chart(args[0], args[i]);
    if (r == 2) return phi2(op, args[0], args[1]);
    BigradedElement out(args[0].n());
    for (const auto& a : args[0].components())
        for (const auto& b : args[1].components())
            for (const auto& c : args[2].components()) out += phi3_h(op, a, b, c);
    return out;
}

BigradedElement bracket(const BigradedElement& a, const BigradedElement& b) {
    check_same_chart(a, b);
    return phi2(GradedOp::DxPrime, a, b);
}

BigradedElement bracket_vector_fields(const BigradedElement& a, const BigradedElement& b) {
    check_same_chart(a, b);
    int n = a.n();
    for (const auto* e : {&a, &b})
        for (const auto& d : e->bidegrees())
            if (!(d == Bidegree{-1, 1})) throw Error(Errc::WrongBidegree, "vector-field bracket needs (-1,1) inputs");
    auto v = beta_matrix(a);  // v[j][l] = coefficient of dy_l (x) d/dx_j
    auto w = beta_matrix(b);
    BigradedElement out(n);
    for (int l = 0; l < n; ++l) {
        for (int m = 0; m < n; ++m) {
            if (l == m) continue;
            for (int j = 0; j < n; ++j) {
                ComplexExpr s;
                for (int i = 0; i < n; ++i) {
                    s += v[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
                         w[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)].diff(xvar(i));
                    s -= w[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] *
                         v[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)].diff(xvar(i));
                }
                out.add_ordered({l + 1, m + 1}, {j + 1}, s);
            }
        }
    }
    return out;
}

BigradedElement beta_element(const Matrix<ComplexExpr>& beta) {
    int n = static_cast<int>(beta.size());
    BigradedElement out(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(beta[static_cast<std::size_t>(i)].size()) != n) throw Error(Errc::Schema, "beta must be square");
        for (int j = 0; j < n; ++j) out.add(1u << j, 1u << i, beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    return out;
}

Matrix<ComplexExpr> beta_matrix(const BigradedElement& beta) {
    int n = beta.n();
    Matrix<ComplexExpr> m(static_cast<std::size_t>(n), std::vector<ComplexExpr>(static_cast<std::size_t>(n)));
    for (const auto& [k, c] : beta.terms()) {
        if (std::popcount(k.J) != 1 || std::popcount(k.I) != 1) throw Error(Errc::WrongBidegree, "expected a (-1,1) element");
        m[static_cast<std::size_t>(std::countr_zero(k.I))][static_cast<std::size_t>(std::countr_zero(k.J))] = c;
    }
    return m;
}

BigradedElement power(const BigradedElement& a, int k) {
    BigradedElement r = BigradedElement::scalar(a.n(), ComplexExpr(1));
    for (int i = 0; i < k; ++i) r = product(r, a);
    return r;
}

BigradedElement exp_beta(const BigradedElement& beta) {
    for (const auto& d : beta.bidegrees())
        if (!(d == Bidegree{-1, 1})) throw Error(Errc::WrongBidegree, "exp needs a bidegree (-1,1) element");
    int n = beta.n();
    BigradedElement out = BigradedElement::scalar(n, ComplexExpr(1));
    BigradedElement pw = out;
    Q fact(1);
    for (int p = 1; p <= n; ++p) {
        pw = product(pw, beta);
        fact *= p;
        out += ComplexExpr(ScalarExpr(Q(1) / fact)) * pw;
    }
    return out;
}

}  // namespace syzlab
