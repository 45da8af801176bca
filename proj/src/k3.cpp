#include "syzlab/k3.hpp"

#include "syzlab/error.hpp"
#include "syzlab/forms.hpp"

#include <cmath>

namespace syzlab {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

void require_rank(const GramLattice& L, std::size_t n, const char* what) {
    if (n != sz(L.rank())) throw Error(Errc::Schema, std::string(what) + " has " + std::to_string(n) +
                                                         " coordinates, lattice rank is " + std::to_string(L.rank()));
}

bool is_primitive(const ZVector& v) {
    Z g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g == 1;
}

void violation(const std::string& what, const Q& value) {
    throw Error(Errc::InvariantViolation, what + " (got " + to_string(value) + ")");
}

}  // namespace

Q GramLattice::dot(const QVector& a, const QVector& b) const {
    Q s = 0;
    int r = rank();
    for (int i = 0; i < r; ++i) {
        if (sgn(a[sz(i)]) == 0) continue;
        Q row = 0;
        for (int j = 0; j < r; ++j)
            if (sgn(gram(i, j)) != 0) row += Q(gram(i, j)) * b[sz(j)];
        s += a[sz(i)] * row;
    }
    return s;
}

void GramLattice::validate() const {
    if (gram.rows() != gram.cols()) throw Error(Errc::Schema, "Gram matrix must be square");
    if (!(gram == gram.transpose())) throw Error(Errc::Schema, "Gram matrix must be symmetric");
    if (unimodular) {
        Z d = determinant(gram);
        if (d != 1 && d != -1) throw Error(Errc::Schema, "lattice flagged unimodular has determinant " + d.get_str());
    }
}

GramLattice hyperbolic_lattice(int copies) {
    GramLattice L;
    L.gram = IntMatrix(2 * copies, 2 * copies);
    for (int i = 0; i < copies; ++i) L.gram(2 * i, 2 * i + 1) = L.gram(2 * i + 1, 2 * i) = 1;
    L.unimodular = true;
    L.preset = "U" + std::to_string(copies);
    return L;
}

GramLattice e8_negative() {
    // Dynkin diagram: chain 0-1-2-3-4-5-6 with node 7 attached to node 4.
    GramLattice L;
    L.gram = IntMatrix(8, 8);
    for (int i = 0; i < 8; ++i) L.gram(i, i) = -2;
    auto edge = [&](int a, int b) { L.gram(a, b) = L.gram(b, a) = 1; };
    for (int i = 0; i + 1 < 7; ++i) edge(i, i + 1);
    edge(4, 7);
    L.unimodular = true;
    L.preset = "E8(-1)";
    return L;
}

GramLattice direct_sum(const GramLattice& a, const GramLattice& b) {
    GramLattice L;
    L.gram = IntMatrix(a.rank() + b.rank(), a.rank() + b.rank());
    L.gram.set_block(0, 0, a.gram);
    L.gram.set_block(a.rank(), a.rank(), b.gram);
    L.unimodular = a.unimodular && b.unimodular;
    return L;
}

GramLattice k3_lattice() {
    GramLattice L = direct_sum(direct_sum(hyperbolic_lattice(3), e8_negative()), e8_negative());
    L.preset = "K3";
    return L;
}

GramLattice lattice_preset(const std::string& name) {
    if (name == "K3") return k3_lattice();
    if (name.size() >= 2 && name[0] == 'U') {
        try {
            std::size_t used = 0;
            int k = std::stoi(name.substr(1), &used);
            if (used == name.size() - 1 && k >= 1 && k <= 16) return hyperbolic_lattice(k);
        } catch (const std::exception&) {
        }
    }
    throw Error(Errc::Schema, "unknown lattice preset '" + name + "'");
}

QVector to_qvector(const ZVector& v) {
    QVector out;
    out.reserve(v.size());
    for (const auto& x : v) out.emplace_back(x);
    return out;
}

QVector unit_vector(int rank, int i) {
    QVector v(sz(rank));
    v[sz(i)] = 1;
    return v;
}

QVector operator+(const QVector& a, const QVector& b) {
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

QVector operator-(const QVector& a, const QVector& b) {
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

QVector operator-(const QVector& a) {
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
    return out;
}

QVector operator*(const Q& s, const QVector& a) {
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

ComplexNumber dot(const GramLattice& L, const ComplexVector& a, const ComplexVector& b) {
    return {L.dot(a.re, b.re) - L.dot(a.im, b.im), L.dot(a.re, b.im) + L.dot(a.im, b.re)};
}

ComplexNumber dot(const GramLattice& L, const ComplexVector& a, const QVector& b) {
    return {L.dot(a.re, b), L.dot(a.im, b)};
}

namespace {

void validate_shapes(const K3MirrorInput& in) {
    const GramLattice& L = in.lattice;
    L.validate();
    require_rank(L, in.E.size(), "E");
    require_rank(L, in.sigma0.size(), "sigma0");
    require_rank(L, in.omega.size(), "omega");
    require_rank(L, in.B.size(), "B");
    require_rank(L, in.re_omega.size(), "Re(Omega)");
    require_rank(L, in.im_omega.size(), "Im(Omega)");
}

}  // namespace

void validate_invariants(const K3MirrorInput& in) {
    validate_shapes(in);
    const GramLattice& L = in.lattice;

    QVector E = to_qvector(in.E), s = to_qvector(in.sigma0);
    if (!is_primitive(in.E)) throw Error(Errc::NotPrimitive, "fibre class E is not primitive");
    if (Q e2 = L.dot(E, E); e2 != 0) throw Error(Errc::NotIsotropic, "fibre class E has E.E = " + to_string(e2));
    if (Q v = L.dot(s, s); v != -2) violation("section self-intersection sigma0.sigma0 must be -2", v);
    if (Q v = L.dot(s, E); v != 1) violation("sigma0.E must be 1", v);
    if (Q v = L.dot(in.omega, E); v != 0) violation("omega.E must vanish", v);
    if (Q v = L.dot(in.B, E); v != 0) violation("B.E must vanish", v);

    Q w2 = L.dot(in.omega, in.omega);
    if (w2 <= 0) violation("omega.omega must be positive", w2);
    if (Q v = L.dot(in.re_omega, in.re_omega); v != w2) violation("Re(Omega)^2 must equal omega^2", v);
    if (Q v = L.dot(in.im_omega, in.im_omega); v != w2) violation("Im(Omega)^2 must equal omega^2", v);
    if (Q v = L.dot(in.re_omega, in.im_omega); v != 0) violation("Re(Omega).Im(Omega) must vanish", v);
    if (Q v = L.dot(in.omega, in.re_omega); v != 0) violation("omega.Re(Omega) must vanish", v);
    if (Q v = L.dot(in.omega, in.im_omega); v != 0) violation("omega.Im(Omega) must vanish", v);
}

bool is_aligned(const K3MirrorInput& in) {
    QVector E = to_qvector(in.E);
    return in.lattice.dot(in.im_omega, E) == 0 && in.lattice.dot(in.re_omega, E) > 0;
}

AlignedInput validate_and_align(const K3MirrorInput& in) {
    validate_shapes(in);
    const GramLattice& L = in.lattice;
    QVector E = to_qvector(in.E);
    Q a = L.dot(in.re_omega, E), b = L.dot(in.im_omega, E);
    if (a == 0 && b == 0) throw Error(Errc::NullFibreClass, "Re(Omega).E = Im(Omega).E = 0");
    validate_invariants(in);
    Q r;
    if (!exact_sqrt(a * a + b * b, r))
        throw Error(Errc::IrrationalPhase, "no rational rotation aligns Omega: (Re, Im).E = (" + to_string(a) + ", " +
                                               to_string(b) + ")");
    AlignedInput out;
    out.cos_theta = a / r;
    out.sin_theta = -b / r;
    out.theta = std::atan2(out.sin_theta.get_d(), out.cos_theta.get_d());
    out.input = in;
    K3MirrorInput& x = out.input;
    x.re_omega = out.cos_theta * in.re_omega - out.sin_theta * in.im_omega;
    x.im_omega = out.sin_theta * in.re_omega + out.cos_theta * in.im_omega;
    QVector s = to_qvector(in.sigma0);
    x.B = x.B - L.dot(x.B, s) * E;
    validate_invariants(x);
    out.volume = L.dot(x.re_omega, E);
    return out;
}

HyperkahlerRotation hyperkahler_rotate(const K3MirrorInput& in) {
    validate_invariants(in);
    if (!is_aligned(in)) throw Error(Errc::NotAligned, "hyperkahler rotation needs Im(Omega).E = 0 and Re(Omega).E > 0");
    const GramLattice& L = in.lattice;
    HyperkahlerRotation h;
    h.omega_k = {in.im_omega, in.omega};
    h.kahler_k = in.re_omega;
    ComplexNumber sq = dot(L, h.omega_k, h.omega_k);
    Q vol = L.dot(h.kahler_k, to_qvector(in.E));
    h.checks.verdict("omega_k_square", sq == ComplexNumber{}, to_string(sq.re) + " + i " + to_string(sq.im));
    h.checks.verdict("kahler_k_positive", L.dot(h.kahler_k, h.kahler_k) > 0);
    h.checks.verdict("kahler_k_dot_E", vol > 0, to_string(vol));
    return h;
}

QuotientLattice sublattice_quotient(const GramLattice& L, const ZVector& E) {
    L.validate();
    require_rank(L, E.size(), "E");
    if (!is_primitive(E)) throw Error(Errc::NotPrimitive, "E is not primitive");
    int r = L.rank();
    IntMatrix e(r, 1);
    for (int i = 0; i < r; ++i) e(i, 0) = E[sz(i)];
    if (!(e.transpose() * L.gram * e).is_zero()) throw Error(Errc::NotIsotropic, "E is not isotropic");

    IntMatrix K = integer_kernel(e.transpose() * L.gram);  // E^perp, r x (r-1)
    // coordinates c of E in the basis K
    SmithForm s = smith_normal_form(K);
    IntMatrix y = s.U * e;
    IntMatrix c1(K.cols(), 1);
    for (int j = 0; j < K.cols(); ++j) {
        if (y(j, 0) % s.D(j, j) != 0) throw Error(Errc::Internal, "E is not in its own orthogonal complement");
        c1(j, 0) = y(j, 0) / s.D(j, j);
    }
    IntMatrix c = s.V * c1;
    // complete c to a basis of Z^{r-1}; the first column of U2^{-1} is +-c
    SmithForm s2 = smith_normal_form(c);
    IntMatrix W = unimodular_inverse(s2.U);
    QuotientLattice q;
    q.basis = K * W.column_block(1, W.cols() - 1);
    q.lattice.gram = q.basis.transpose() * L.gram * q.basis;
    q.lattice.unimodular = L.unimodular;
    return q;
}

namespace {

void require_aligned(const K3MirrorInput& in) {
    validate_invariants(in);
    if (!is_aligned(in)) throw Error(Errc::NotAligned, "input must be phase aligned");
    if (in.lattice.dot(in.B, to_qvector(in.sigma0)) != 0)
        throw Error(Errc::InvariantViolation, "B-field lift must satisfy B.sigma0 = 0");
}

}  // namespace

MirrorClasses mirror_classes(const K3MirrorInput& in) {
    require_aligned(in);
    const GramLattice& L = in.lattice;
    QVector E = to_qvector(in.E), s = to_qvector(in.sigma0);
    const QVector &w = in.omega, &B = in.B;
    MirrorClasses m;
    m.volume = L.dot(in.re_omega, E);
    Q V = m.volume;
    Q w2 = L.dot(w, w), B2 = L.dot(B, B);

    // sigma0 - (B + i w) + (1 - (B + i w)^2 / 2 + i w.sigma0) E
    m.omega_n_check.re = s - B + (1 - (B2 - w2) / 2) * E;
    m.omega_n_check.im = -w + (L.dot(w, s) - L.dot(B, w)) * E;

    QVector im_n = (1 / V) * in.im_omega;
    m.omega_check = im_n + L.dot(im_n, B - s) * E;
    m.re_omega_check = (1 / V) * (s - B - ((B2 - w2 - 2) / 2) * E);
    m.im_omega_check = (1 / V) * m.omega_n_check.im;
    m.dual_volume = L.dot(m.re_omega_check, E);
    m.b_check = (1 / V) * in.re_omega - s;
    m.b_check = m.b_check - L.dot(m.b_check, s) * E;

    ComplexNumber sq = dot(L, m.omega_n_check, m.omega_n_check);
    ComplexNumber dE = dot(L, m.omega_n_check, E);
    ComplexNumber dw = dot(L, m.omega_n_check, m.omega_check);
    Q wc2 = L.dot(m.omega_check, m.omega_check);
    Q wk2 = L.dot(in.re_omega, in.re_omega);
    auto c = [](const ComplexNumber& z) { return to_string(z.re) + " + i " + to_string(z.im); };
    m.checks.verdict("omega_n_square", sq == ComplexNumber{}, c(sq));
    m.checks.verdict("omega_n_dot_E", dE == ComplexNumber{1, 0}, c(dE));
    m.checks.verdict("omega_n_dot_omega_check", dw == ComplexNumber{}, c(dw));
    m.checks.verdict("omega_check_dot_E", L.dot(m.omega_check, E) == 0);
    m.checks.verdict("omega_check_square", wc2 == wk2 / (V * V) && wc2 > 0, to_string(wc2));
    m.checks.verdict("re_omega_check_dot_E", m.dual_volume == 1 / V, to_string(m.dual_volume));
    m.checks.verdict("volume_reciprocity", V * m.dual_volume == 1);
    Q r2 = L.dot(m.re_omega_check, m.re_omega_check), i2 = L.dot(m.im_omega_check, m.im_omega_check);
    bool normalized = r2 == wc2 && i2 == wc2 && L.dot(m.re_omega_check, m.im_omega_check) == 0 &&
                      L.dot(m.omega_check, m.re_omega_check) == 0 && L.dot(m.omega_check, m.im_omega_check) == 0;
    m.checks.verdict("mirror_normalization", normalized);
    m.checks.verdict("b_check_lift", L.dot(m.b_check, E) == 0 && L.dot(m.b_check, s) == 0);
    return m;
}

K3MirrorInput mirror_input(const K3MirrorInput& in, const MirrorClasses& m) {
    K3MirrorInput out = in;
    out.omega = m.omega_check;
    out.re_omega = m.re_omega_check;
    out.im_omega = m.im_omega_check;
    out.B = m.b_check;
    return out;
}

QVector fibrewise_negation(const GramLattice& L, const ZVector& E, const ZVector& sigma0, const QVector& x) {
    QVector e = to_qvector(E), s = to_qvector(sigma0);
    // x = a sigma0 + b E + x_perp
    Q a = L.dot(x, e);
    Q b = L.dot(x, s) - L.dot(s, s) * a;
    QVector fixed = a * s + b * e;
    return 2 * fixed - x;
}

Report double_mirror_check(const K3MirrorInput& in) {
    K3MirrorInput x = validate_and_align(in).input;
    const GramLattice& L = x.lattice;
    K3MirrorInput once = mirror_input(x, mirror_classes(x));
    K3MirrorInput twice = mirror_input(once, mirror_classes(once));
    auto neg = [&](const QVector& v) { return fibrewise_negation(L, x.E, x.sigma0, v); };
    Report r;
    r.verdict("omega", neg(twice.omega) == x.omega);
    r.verdict("re_omega", neg(twice.re_omega) == x.re_omega);
    r.verdict("im_omega", neg(twice.im_omega) == x.im_omega);
    r.verdict("B", neg(twice.B) == x.B);
    bool inv = true;
    for (const QVector* v : {&x.omega, &x.B, &x.re_omega, &x.im_omega, &once.omega, &once.B})
        inv = inv && neg(neg(*v)) == *v;
    r.verdict("negation_involution", inv);
    return r;
}

std::vector<int> minus_two_obstructions(const K3MirrorInput& in, const MirrorClasses& m,
                                        const std::vector<ZVector>& declared) {
    const GramLattice& L = in.lattice;
    std::vector<int> out;
    for (std::size_t i = 0; i < declared.size(); ++i) {
        require_rank(L, declared[i].size(), "algebraic class");
        QVector d = to_qvector(declared[i]);
        if (L.dot(d, d) == -2 && L.dot(d, m.im_omega_check) == 0 && L.dot(d, m.omega_check) == 0)
            out.push_back(static_cast<int>(i));
    }
    return out;
}

Report k3_chart_form_check() {
    const int n = 2;
    auto y = [](int i) { return ScalarExpr::var(yvar(i - 1)); };
    auto x = [](int i) { return ScalarExpr::var(xvar(i - 1)); };
    ComplexExpr I = ComplexExpr::i();
    // dw = dx1 + i dx2, dz = dy1 - i dy2
    DifferentialForm dw = DifferentialForm::dx(n, 1) + I * DifferentialForm::dx(n, 2);
    DifferentialForm dz = DifferentialForm::dy(n, 1) - I * DifferentialForm::dy(n, 2);
    DifferentialForm c = wedge(dw, dz);
    DifferentialForm expected_im = wedge(DifferentialForm::dy(n, 2), DifferentialForm::dx(n, 1)) +
                                   wedge(DifferentialForm::dx(n, 2), DifferentialForm::dy(n, 1));
    DifferentialForm relabeled = pullback(standard_omega(n), {y(1), -y(2), x(2), x(1)});
    Report r;
    r.verdict("im_dw_dz", c.im() == expected_im, c.im().str());
    r.verdict("re_dw_dz", c.re() == standard_omega(n), c.re().str());
    r.verdict("relabeled_standard_form", relabeled == expected_im, relabeled.str());
    return r;
}

K3MirrorInput k3_toy_input() {
    K3MirrorInput in;
    in.lattice = hyperbolic_lattice(3);
    auto u = [](int i) { return unit_vector(6, i); };
    in.E = {1, 0, 0, 0, 0, 0};
    in.sigma0 = {-1, 1, 0, 0, 0, 0};
    in.omega = u(2) + u(3);
    in.re_omega = u(0) + u(1);
    in.im_omega = u(4) + u(5);
    in.B = QVector(6);
    return in;
}

}  // namespace syzlab
