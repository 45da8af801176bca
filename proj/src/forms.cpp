#include "syzlab/forms.hpp"

#include "syzlab/error.hpp"

#include <bit>
#include <sstream>

namespace syzlab {

namespace {

unsigned valid_slots(int n) { return ((1u << n) - 1u) | (((1u << n) - 1u) << 3); }

void check_same(const DifferentialForm& a, const DifferentialForm& b) {
    if (a.n() != b.n()) throw Error(Errc::ChartMismatch, "forms over charts of different dimension");
}

const char* slot_name(int s) {
    static const char* names[6] = {"dy1", "dy2", "dy3", "dx1", "dx2", "dx3"};
    return names[s];
}

}  // namespace

DifferentialForm DifferentialForm::term(int n, const std::vector<int>& slots, const ComplexExpr& c) {
    DifferentialForm f(n);
    unsigned m = 0;
    int sign = 1;
    for (int s : slots) {
        unsigned bit = 1u << s;
        if (!(valid_slots(n) & bit)) throw Error(Errc::DegreeOutOfRange, "slot outside the chart");
        if (m & bit) return f;
        if (std::popcount(m & ~((bit << 1) - 1u)) & 1) sign = -sign;
        m |= bit;
    }
    f.add(m, sign > 0 ? c : -c);
    return f;
}

ComplexExpr DifferentialForm::coef(unsigned mask) const {
    auto it = c_.find(mask);
    return it == c_.end() ? ComplexExpr() : it->second;
}

void DifferentialForm::add(unsigned mask, const ComplexExpr& c) {
    if (mask & ~valid_slots(n_)) throw Error(Errc::DegreeOutOfRange, "slot outside the chart");
    if (c.is_zero()) return;
    auto it = c_.find(mask);
    if (it == c_.end()) {
        c_.emplace(mask, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) c_.erase(it);
    }
}

unsigned DifferentialForm::var_mask() const {
    unsigned m = 0;
    for (const auto& [k, v] : c_) m |= v.var_mask();
    return m;
}

DifferentialForm DifferentialForm::operator-() const {
    DifferentialForm o(n_);
    for (const auto& [k, v] : c_) o.c_.emplace(k, -v);
    return o;
}

DifferentialForm& DifferentialForm::operator+=(const DifferentialForm& o) {
    check_same(*this, o);
    for (const auto& [k, v] : o.c_) add(k, v);
    return *this;
}

DifferentialForm& DifferentialForm::operator-=(const DifferentialForm& o) {
    check_same(*this, o);
    for (const auto& [k, v] : o.c_) add(k, -v);
    return *this;
}

DifferentialForm operator*(const ComplexExpr& s, const DifferentialForm& f) {
    DifferentialForm o(f.n());
    for (const auto& [k, v] : f.terms()) o.add(k, s * v);
    return o;
}

DifferentialForm DifferentialForm::re() const {
    DifferentialForm o(n_);
    for (const auto& [k, v] : c_) o.add(k, ComplexExpr(v.re));
    return o;
}

DifferentialForm DifferentialForm::im() const {
    DifferentialForm o(n_);
    for (const auto& [k, v] : c_) o.add(k, ComplexExpr(v.im));
    return o;
}

bool operator==(const DifferentialForm& a, const DifferentialForm& b) { return a.n_ == b.n_ && a.c_ == b.c_; }

std::string DifferentialForm::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << v.str() << ")";
        for (int s = 0; s < 6; ++s)
            if (k & (1u << s)) os << " " << slot_name(s);
    }
    return os.str();
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
    check_same(a, b);
    DifferentialForm o(a.n());
    for (const auto& [ka, va] : a.terms())
        for (const auto& [kb, vb] : b.terms()) {
            if (ka & kb) continue;
            ComplexExpr c = va * vb;
            o.add(ka | kb, merge_sign(ka, kb) > 0 ? c : -c);
        }
    return o;
}

DifferentialForm exterior_derivative(const DifferentialForm& f) {
    DifferentialForm o(f.n());
    unsigned slots = valid_slots(f.n());
    for (const auto& [k, v] : f.terms()) {
        for (int s = 0; s < 6; ++s) {
            unsigned bit = 1u << s;
            if (!(slots & bit) || (k & bit)) continue;
            ComplexExpr d = v.diff(slot_var(s));
            if (d.is_zero()) continue;
            o.add(k | bit, (std::popcount(k & (bit - 1u)) & 1) ? -d : d);
        }
    }
    return o;
}

DifferentialForm contract(int slot, const DifferentialForm& f) {
    DifferentialForm o(f.n());
    unsigned bit = 1u << slot;
    for (const auto& [k, v] : f.terms()) {
        if (!(k & bit)) continue;
        int pos = std::popcount(k & (bit - 1u));
        o.add(k & ~bit, (pos & 1) ? -v : v);
    }
    return o;
}

DifferentialForm restrict_to_fibre(const DifferentialForm& f) {
    DifferentialForm o(f.n());
    for (const auto& [k, v] : f.terms())
        if (!(k & 0x7u)) o.add(k, v);
    return o;
}

DifferentialForm substitute(const DifferentialForm& f, const std::array<const ScalarExpr*, kNumVars>& r) {
    DifferentialForm o(f.n());
    for (const auto& [k, v] : f.terms()) o.add(k, v.substitute(r));
    return o;
}

DifferentialForm pullback(const DifferentialForm& f, const std::vector<ScalarExpr>& phi) {
    int n = f.n();
    if (static_cast<int>(phi.size()) != 2 * n) throw Error(Errc::Schema, "pullback map needs one expression per coordinate");
    std::array<const ScalarExpr*, kNumVars> r{};
    std::vector<int> slots;
    for (int i = 0; i < n; ++i) slots.push_back(dy_slot(i + 1));
    for (int i = 0; i < n; ++i) slots.push_back(dx_slot(i + 1));
    for (int k = 0; k < 2 * n; ++k) r[static_cast<std::size_t>(slot_var(slots[static_cast<std::size_t>(k)]))] = &phi[static_cast<std::size_t>(k)];
    // d(phi_k) as 1-forms
    std::vector<DifferentialForm> dphi;
    for (int k = 0; k < 2 * n; ++k) {
        DifferentialForm d(n);
        for (int s : slots) d.add(1u << s, ComplexExpr(phi[static_cast<std::size_t>(k)].diff(slot_var(s))));
        dphi.push_back(std::move(d));
    }
    auto slot_index = [&](int s) {
        for (int k = 0; k < 2 * n; ++k)
            if (slots[static_cast<std::size_t>(k)] == s) return k;
        return -1;
    };
    DifferentialForm out(n);
    for (const auto& [mask, v] : f.terms()) {
        DifferentialForm acc = DifferentialForm::term(n, {}, v.substitute(r));
        for (int s = 0; s < 6; ++s)
            if (mask & (1u << s)) acc = wedge(acc, dphi[static_cast<std::size_t>(slot_index(s))]);
        out += acc;
    }
    return out;
}

int contraction_sign(int n, IndexSet I) {
    IndexSet star = ((1u << n) - 1u) & ~I;
    return merge_sign(I, star);
}

DifferentialForm to_form(const BigradedElement& e) {
    int n = e.n();
    IndexSet full = (1u << n) - 1u;
    DifferentialForm out(n);
    for (const auto& [k, c] : e.terms()) {
        IndexSet star = full & ~k.I;
        unsigned mask = k.J | (star << 3);
        out.add(mask, contraction_sign(n, k.I) > 0 ? c : -c);
    }
    return out;
}

BigradedElement from_form(const DifferentialForm& f) {
    int n = f.n();
    IndexSet full = (1u << n) - 1u;
    BigradedElement out(n);
    for (const auto& [mask, c] : f.terms()) {
        IndexSet J = mask & 0x7u;
        IndexSet star = (mask >> 3) & 0x7u;
        IndexSet I = full & ~star;
        out.add(J, I, contraction_sign(n, I) > 0 ? c : -c);
    }
    return out;
}

DifferentialForm standard_omega(int n) {
    DifferentialForm w(n);
    for (int i = 1; i <= n; ++i) w += DifferentialForm::term(n, {dx_slot(i), dy_slot(i)}, ComplexExpr(1));
    return w;
}

}  // namespace syzlab
