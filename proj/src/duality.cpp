#include "syzlab/duality.hpp"

#include "syzlab/error.hpp"

#include <cmath>
#include <numeric>

namespace syzlab {

namespace {

using std::size_t;
size_t sz(int i) { return static_cast<size_t>(i); }

int pairing_sign(int n, int i, PairingOrder order) {
    int e = order == PairingOrder::Forward ? i - 1 : n - i;
    return (e & 1) ? -1 : 1;
}

// Index i such that basis element m of the degree n-1 cycles is e_{[n]\i}.
int omitted_index(int n, int m) { return n == 2 ? 3 - m : m; }

unsigned full_dx(int n) { return x_mask(n); }

Point fibre_point(const Chart& c, const BasePoint& y) {
    Point p{};
    for (int i = 0; i < c.n; ++i) p[sz(yvar(i))] = y[sz(i)];
    return p;
}

DifferentialForm omega_form(const BetaStructure& s) { return to_form(build_omega(s)); }

double fibre_volume(const BetaStructure& s, const BasePoint& y, int res) {
    return integrate_fibre(s.V, s.chart, y, res);
}

std::vector<BasePoint> base_samples(const Chart& c, const SampleGrid& g) {
    std::vector<BasePoint> out;
    for (const auto& p : sample_points(c, g, false)) {
        BasePoint y{{0, 0, 0}};
        for (int i = 0; i < c.n; ++i) y[sz(i)] = p[sz(yvar(i))];
        out.push_back(y);
    }
    return out;
}

void require_fibre_form(const DifferentialForm& a, int degree) {
    for (const auto& [mask, c] : a.terms()) {
        if (mask & 0x7u) throw Error(Errc::DegreeMismatch, "expected a fibre form without dy factors");
        if (std::popcount(mask) != degree) throw Error(Errc::DegreeMismatch, "fibre form has the wrong degree");
    }
}

}  // namespace

std::vector<double> cycle_to_tangent(int n, const CycleSpec& gamma, PairingOrder order) {
    if (gamma.degree != n - 1 && !(n == 2 && gamma.degree == 1))
        throw Error(Errc::DegreeMismatch, "expected a cycle of degree n-1");
    if (static_cast<int>(gamma.coeffs.size()) != n) throw Error(Errc::Schema, "cycle needs one coefficient per basis cycle");
    std::vector<double> t(sz(n), 0.0);
    for (int m = 1; m <= n; ++m) {
        int i = omitted_index(n, m);
        t[sz(i - 1)] += static_cast<double>(gamma.coeffs[sz(m - 1)]) * pairing_sign(n, i, order);
    }
    return t;
}

CycleSpec dual_basis_cycle(int n, int i, PairingOrder order) {
    CycleSpec c;
    c.degree = n - 1;
    c.coeffs.assign(sz(n), 0);
    for (int m = 1; m <= n; ++m)
        if (omitted_index(n, m) == i) c.coeffs[sz(m - 1)] = pairing_sign(n, i, order);
    return c;
}

double integrate_over_cycle(const DifferentialForm& f, const Chart& c, const BasePoint& y, const CycleSpec& gamma,
                            int resolution) {
    int n = c.n;
    if (static_cast<int>(gamma.coeffs.size()) != n) throw Error(Errc::Schema, "cycle needs one coefficient per basis cycle");
    if (std::all_of(gamma.coeffs.begin(), gamma.coeffs.end(), [](long v) { return v == 0; }))
        throw Error(Errc::Schema, "cycle coefficient vector is zero");
    DifferentialForm fib = restrict_to_fibre(f);
    double total = 0.0;
    for (int m = 1; m <= n; ++m) {
        long cm = gamma.coeffs[sz(m - 1)];
        if (cm == 0) continue;
        double v = 0.0;
        if (gamma.degree == 0) {
            if (n != 1) throw Error(Errc::DegreeMismatch, "points are fibre cycles only for n = 1");
            Point p = fibre_point(c, y);
            v = fib.coef(0).re.eval(p.data());
        } else if (gamma.degree == 1) {
            std::array<int, 3> dir{{0, 0, 0}};
            dir[sz(m - 1)] = 1;
            v = integrate_loop(fib.coef(1u << dx_slot(m)).re, c, y, dir, {{0, 0, 0}}, resolution);
        } else if (gamma.degree == 2 && n == 3) {
            unsigned mask = full_dx(n) & ~(1u << dx_slot(m));
            v = integrate_subtorus(fib.coef(mask).re, c, y, m - 1, 0.0, resolution);
        } else {
            throw Error(Errc::DegreeMismatch, "unsupported cycle degree");
        }
        total += static_cast<double>(cm) * v;
    }
    return total;
}

McLeanData mclean_metrics(const BetaStructure& s, const BasePoint& y, int resolution) {
    require_compatible(s);
    int n = s.n();
    DifferentialForm om = omega_form(s);
    DifferentialForm im = om.im();
    DifferentialForm w = standard_omega(n);
    McLeanData d;
    d.h_quadrature.resize(n, n);
    d.h_closed.resize(n, n);
    unsigned top = full_dx(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            DifferentialForm integrand = -wedge(contract(dy_slot(i + 1), w), contract(dy_slot(j + 1), im));
            d.h_quadrature(i, j) = integrate_fibre(restrict_to_fibre(integrand).coef(top).re, s.chart, y, resolution);
            d.h_closed(i, j) = integrate_fibre(s.V * s.g_inv[sz(i)][sz(j)], s.chart, y, resolution);
        }
    DifferentialForm th = DifferentialForm::term(n, {}, ComplexExpr(1));
    for (int i = 0; i < n; ++i) th = wedge(th, -contract(dy_slot(i + 1), w));
    d.theta = integrate_fibre(th.coef(top).re, s.chart, y, resolution);
    d.vol = integrate_fibre(restrict_to_fibre(om).coef(top).re, s.chart, y, resolution);
    d.h_n = d.h_quadrature / d.vol;
    return d;
}

std::optional<Matrix<ScalarExpr>> mclean_closed_form(const BetaStructure& s) {
    if (s.V.var_mask() & kXMask) return std::nullopt;
    for (const auto& row : s.g_inv)
        for (const auto& e : row)
            if (e.var_mask() & kXMask) return std::nullopt;
    return s.g_inv;
}

Report mclean_report(const BetaStructure& s, const SemiflatOptions& o, int resolution) {
    double agree = 0.0, sym = 0.0, mineig = INFINITY, theta = 0.0;
    for (const auto& y : base_samples(s.chart, o.grid)) {
        McLeanData d = mclean_metrics(s, y, resolution);
        agree = std::max(agree, (d.h_quadrature - d.h_closed).cwiseAbs().maxCoeff());
        sym = std::max(sym, (d.h_n - d.h_n.transpose()).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (d.h_n + d.h_n.transpose()));
        mineig = std::min(mineig, es.eigenvalues().minCoeff());
        theta = std::max(theta, std::fabs(d.theta - 1.0));
    }
    Report r;
    r.residual("h_agreement", agree, o.tol);
    r.residual("h_n_symmetry", sym, o.tol);
    r.lower_bound("h_n_min_eigenvalue", mineig, 0.0);
    r.residual("theta_unit", theta, o.tol);
    return r;
}

std::vector<double> period_covector(const BetaStructure& s, const CycleSpec& gamma, const BasePoint& y, int resolution) {
    int n = s.n();
    if (gamma.degree != n - 1) throw Error(Errc::DegreeMismatch, "periods are taken over cycles of degree n-1");
    DifferentialForm im = omega_form(s).im();
    double vol = fibre_volume(s, y, resolution);
    std::vector<double> psi(sz(n));
    for (int j = 0; j < n; ++j)
        psi[sz(j)] = -integrate_over_cycle(contract(dy_slot(j + 1), im), s.chart, y, gamma, resolution) / vol;
    return psi;
}

PeriodField period_one_form(const BetaStructure& s, const CycleSpec& gamma, const SampleGrid& g, int resolution,
                            double step) {
    int n = s.n();
    PeriodField f;
    f.points = base_samples(s.chart, g);
    for (const auto& y : f.points) f.values.push_back(period_covector(s, gamma, y, resolution));
    // d psi_{jk} = d psi_k / dy_j - d psi_j / dy_k
    auto deriv = [&](const BasePoint& y, int axis) {
        static const double w[4] = {1.0, -8.0, 8.0, -1.0};
        static const double off[4] = {-2.0, -1.0, 1.0, 2.0};
        std::vector<double> acc(sz(n), 0.0);
        for (int k = 0; k < 4; ++k) {
            BasePoint q = y;
            q[sz(axis)] += off[k] * step;
            auto v = period_covector(s, gamma, q, resolution);
            for (int j = 0; j < n; ++j) acc[sz(j)] += w[k] * v[sz(j)];
        }
        for (double& a : acc) a /= 12.0 * step;
        return acc;
    };
    for (const auto& y : f.points) {
        std::vector<std::vector<double>> D;
        for (int a = 0; a < n; ++a) D.push_back(deriv(y, a));
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) f.d_residual = std::max(f.d_residual, std::fabs(D[sz(j)][sz(k)] - D[sz(k)][sz(j)]));
    }
    return f;
}

Report duality_identities(const BetaStructure& s, const CycleSpec& gamma, const DifferentialForm& alpha,
                          const DualityOptions& o) {
    int n = s.n();
    require_fibre_form(alpha, n - 1);
    const BasePoint& y = gamma.at;
    int res = o.resolution;
    std::vector<double> t = cycle_to_tangent(n, gamma, o.order);
    // the reversed identification differs from the geometric one by (-1)^{n-1}
    double eps = o.order == PairingOrder::Forward || n % 2 ? 1.0 : -1.0;

    // int_gamma alpha = -int_X iota(gamma) omega ^ alpha
    double lhs = integrate_over_cycle(alpha, s.chart, y, gamma, res);
    DifferentialForm w = standard_omega(n);
    DifferentialForm iw(n);
    for (int i = 0; i < n; ++i) iw += ComplexExpr(ScalarExpr::from_double(t[sz(i)])) * contract(dy_slot(i + 1), w);
    DifferentialForm rhs_form = -wedge(iw, alpha);
    double rhs = integrate_fibre(restrict_to_fibre(rhs_form).coef(full_dx(n)).re, s.chart, y, res);

    McLeanData m = mclean_metrics(s, y, res);
    std::vector<double> psi = period_covector(s, gamma, y, res);
    double emb = 0.0;
    for (int j = 0; j < n; ++j) {
        double hv = 0.0;
        for (int i = 0; i < n; ++i) hv += t[sz(i)] * m.h_n(i, j);
        emb = std::max(emb, std::fabs(psi[sz(j)] + eps * hv));
    }

    // Periods of Im Omega_n over the cycles of e_i^* against h_n(e_i^*, d/dy_j).
    DifferentialForm im = omega_form(s).im();
    double vol = m.vol;
    double cls = 0.0, dual = 0.0;
    for (int i = 1; i <= n; ++i) {
        CycleSpec ci = dual_basis_cycle(n, i, o.order);
        std::vector<double> psi_i = period_covector(s, ci, y, res);
        for (int j = 1; j <= n; ++j) {
            double p = integrate_over_cycle(contract(dy_slot(j), im), s.chart, y, ci, res) / vol;
            cls = std::max(cls, std::fabs(p - eps * m.h_n(i - 1, j - 1)));
            // dual fibre: xi = sum_k xc_k psi(gamma_k); omega-check = sum_j dxi_j ^ dy_j.
            // iota(d/dy_j) omega-check restricted to the loop of gamma_i is -psi_ij dt.
            DifferentialForm loop(n);
            loop.add(1u << dx_slot(1), ComplexExpr(ScalarExpr::from_double(-psi_i[sz(j - 1)])));
            double q = integrate_loop(loop.coef(1u << dx_slot(1)).re, s.chart, y, {{1, 0, 0}}, {{0, 0, 0}}, res);
            dual = std::max(dual, std::fabs(q - p));
        }
    }
    Report r;
    r.residual("cycle_pairing", std::fabs(lhs - eps * rhs), o.tol);
    r.info("pairing_sign", eps);
    r.info("cycle_pairing_lhs", lhs);
    r.residual("embedding_sign", emb, o.tol);
    r.residual("im_omega_class", cls, o.tol);
    r.residual("dual_omega_class", dual, o.tol);
    return r;
}

SymmetricTest symmetric_class_test(const SymTensorField& alpha) {
    size_t n = alpha.a.size();
    SymmetricTest t;
    t.defect.assign(n, std::vector<ScalarExpr>(n));
    t.wedge_minus_omega = DifferentialForm(static_cast<int>(n));
    t.symmetric = true;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (alpha.a[i][j].var_mask() & ~kYMask) throw Error(Errc::DependsOnFibre, "tensor entries must depend on y only");
            t.defect[i][j] = alpha.a[j][i] - alpha.a[i][j];
            if (!t.defect[i][j].is_zero()) t.symmetric = false;
            if (i < j)
                t.wedge_minus_omega += DifferentialForm::term(static_cast<int>(n), {dy_slot(static_cast<int>(i) + 1), dy_slot(static_cast<int>(j) + 1)},
                                                              ComplexExpr(alpha.a[i][j] - alpha.a[j][i]));
        }
    return t;
}

namespace {

// Antiderivative in y_k vanishing at y_k = 0.
ScalarExpr based_antiderivative(const ScalarExpr& f, int k) {
    ScalarExpr F = antiderivative(f, yvar(k));
    return F - F.substitute(yvar(k), ScalarExpr());
}

}  // namespace

Symmetrized symmetrize_class(const SymTensorField& alpha) {
    int n = static_cast<int>(alpha.a.size());
    SymmetricTest t = symmetric_class_test(alpha);
    // rho_ij = alpha_ji - alpha_ij (i < j) must be d beta.
    auto rho = [&](int i, int j) { return t.defect[sz(i)][sz(j)]; };
    std::vector<ScalarExpr> beta(sz(n));
    if (n >= 2) beta[1] = based_antiderivative(rho(0, 1), 0);
    if (n == 3) {
        DifferentialForm r(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) r += DifferentialForm::term(n, {dy_slot(i + 1), dy_slot(j + 1)}, ComplexExpr(rho(i, j)));
        std::vector<ScalarExpr> none;
        if (!exterior_derivative(r).is_zero()) {
            // closedness may hold without structural cancellation
            auto dr = exterior_derivative(r);
            std::vector<ComplexExpr> cs;
            for (const auto& [k, v] : dr.terms()) cs.push_back(v);
            if (sup_norm(cs, Chart::unit(n)).value > 1e-12)
                throw Error(Errc::NotClosed, "antisymmetric part is not closed; no symmetric representative");
        }
        ScalarExpr rest = rho(1, 2).substitute(yvar(0), ScalarExpr());
        beta[2] = based_antiderivative(rho(0, 2), 0) + based_antiderivative(rest, 1);
    }
    Symmetrized out;
    out.potential = beta;
    out.result.a = alpha.a;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.result.a[sz(i)][sz(j)] += beta[sz(j)].diff(yvar(i));
    return out;
}

DifferentialForm class_representative(const SymTensorField& alpha) {
    int n = static_cast<int>(alpha.a.size());
    DifferentialForm f(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            std::vector<int> slots{dy_slot(i)};
            for (int k = 1; k <= n; ++k)
                if (k != j) slots.push_back(dx_slot(k));
            ScalarExpr c = alpha.a[sz(i - 1)][sz(j - 1)];
            f += DifferentialForm::term(n, slots, ComplexExpr((j - 1) % 2 ? -c : c));
        }
    return f;
}

Matrix<ScalarExpr> HitchinPotential::hessian() const {
    int n = chart.n;
    if (phi.var_mask() & ~y_mask(n)) throw Error(Errc::DependsOnFibre, "potential must depend on the base coordinates only");
    Matrix<ScalarExpr> h(sz(n), std::vector<ScalarExpr>(sz(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h[sz(i)][sz(j)] = phi.diff(yvar(i)).diff(yvar(j));
    return h;
}

BetaStructure hitchin(const HitchinPotential& p, const std::optional<SymTensorField>& b, const SampleGrid& g) {
    int n = p.chart.n;
    Matrix<ScalarExpr> h = p.hessian();
    MinEigen me = min_eigenvalue(h, p.chart, g);
    if (!(me.value > 1e-9)) throw Error(Errc::Positivity, "Hessian is not positive definite (min eigenvalue " + std::to_string(me.value) + ")");
    Matrix<ComplexExpr> beta(sz(n), std::vector<ComplexExpr>(sz(n)));
    if (b) {
        if (static_cast<int>(b->a.size()) != n) throw Error(Errc::ChartMismatch, "B-field tensor has the wrong size");
        SymmetricTest t = symmetric_class_test(*b);
        if (!t.symmetric) throw Error(Errc::Incompatible, "B-field representative must be symmetric");
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) beta[sz(i)][sz(j)] = ComplexExpr(b ? b->a[sz(i)][sz(j)] : ScalarExpr(), h[sz(i)][sz(j)]);
    return BetaStructure::make(p.chart, beta);
}

Report hitchin_report(const HitchinPotential& p, const std::optional<SymTensorField>& b, const SemiflatOptions& o) {
    BetaStructure s = hitchin(p, b, o.grid);
    ScalarExpr det = determinant(p.hessian());
    auto c = p.chart.center();
    Point pc{};
    for (int i = 0; i < p.chart.n; ++i) pc[sz(yvar(i))] = c[sz(i)];
    double d0 = det.eval(pc.data());
    double var = sup_norm(std::vector<ScalarExpr>{det - ScalarExpr::from_double(d0)}, p.chart, o.grid).value;
    Report closed = closedness_residuals(s, o);
    Report r;
    r.residual("det_hessian_variation", var, o.tol);
    r.residual("d_omega", closed.at("d_omega").value, o.tol);
    r.residual("integrability", closed.at("integrability").value, o.tol);
    r.verdict("criterion_agreement", (var < o.tol) == (closed.at("d_omega").value < o.tol));
    return r;
}

double dual_fibre_volume(const BetaStructure& s, const BasePoint& y, int resolution) {
    McLeanData m = mclean_metrics(s, y, resolution);
    int n = s.n();
    // Dual fibre T*_b / lattice spanned by the rows of h_n, metric g-check = h_n^{-1}:
    // volume = det(h_n) * int_{unit cell} sqrt(det h_n^{-1}).
    Matrix<ComplexExpr> bc(sz(n), std::vector<ComplexExpr>(sz(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) bc[sz(i)][sz(j)] = ComplexExpr(ScalarExpr(), ScalarExpr::from_double(m.h_n(i, j)));
    BetaStructure dual = BetaStructure::make(s.chart, bc);
    return m.h_n.determinant() * integrate_fibre(dual.V, s.chart, y, resolution);
}

Report dual_structure_check(const BetaStructure& s, const SemiflatOptions& o, int resolution) {
    for (const auto& row : s.g_inv)
        for (const auto& e : row)
            if (e.var_mask() & kXMask) throw Error(Errc::DependsOnFibre, "dualization needs a fibre-constant metric");
    int n = s.n();
    double hdiff = 0.0, recip = 0.0;
    for (const auto& y : base_samples(s.chart, o.grid)) {
        McLeanData m = mclean_metrics(s, y, resolution);
        Matrix<ComplexExpr> bc(sz(n), std::vector<ComplexExpr>(sz(n)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) bc[sz(i)][sz(j)] = ComplexExpr(ScalarExpr(), ScalarExpr::from_double(m.h_n(i, j)));
        BetaStructure dual = BetaStructure::make(s.chart, bc);
        McLeanData md = mclean_metrics(dual, y, resolution);
        hdiff = std::max(hdiff, (md.h_n - m.h_n).cwiseAbs().maxCoeff());
        double vcheck = m.h_n.determinant() * md.vol;
        recip = std::max(recip, std::fabs(m.vol * vcheck - 1.0));
    }
    Report r;
    r.residual("dual_h_n", hdiff, o.tol);
    r.residual("volume_reciprocity", recip, o.tol);
    return r;
}

namespace {

std::vector<std::vector<int>> permutations(int n) {
    std::vector<int> p(sz(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

int orientation_sign(int n) { return ((n * (n - 1) / 2) & 1) ? -1 : 1; }

}  // namespace

YukawaResult yukawa(const YukawaFamily& f, const std::vector<std::vector<double>>& directions, const Quadrature& q) {
    int n = f.chart.n;
    if (static_cast<int>(f.beta.size()) != n) throw Error(Errc::ChartMismatch, "family must be n x n");
    std::vector<std::vector<double>> dirs = directions;
    if (dirs.empty())
        for (int m = 0; m < n; ++m) {
            std::vector<double> d(sz(n), 0.0);
            d[sz(m)] = 1.0;
            dirs.push_back(d);
        }
    if (static_cast<int>(dirs.size()) != n) throw Error(Errc::Schema, "need n direction vectors");
    // d beta / d b_k, constant in b
    std::vector<Matrix<ScalarExpr>> db(sz(n), Matrix<ScalarExpr>(sz(n), std::vector<ScalarExpr>(sz(n))));
    Matrix<ComplexExpr> at0 = f.beta;
    std::array<ScalarExpr, kNumVars> zero;
    std::array<const ScalarExpr*, kNumVars> sub{};
    for (int k = 0; k < 3; ++k) sub[sz(bvar(k))] = &zero[sz(bvar(k))];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const ComplexExpr& e = f.beta[sz(i)][sz(j)];
            if (e.im.var_mask() & kBMask) throw Error(Errc::NonAffineFamily, "imaginary part must not depend on the B-field parameters");
            if (e.re.var_mask() & kBMask & ~(((1u << n) - 1u) << 6))
                throw Error(Errc::NonAffineFamily, "family uses more parameters than n");
            for (int k = 0; k < n; ++k) {
                ScalarExpr d = e.re.diff(bvar(k));
                if (d.var_mask() & kBMask) throw Error(Errc::NonAffineFamily, "family is not affine in the B-field parameters");
                db[sz(k)][sz(i)][sz(j)] = d;
            }
            at0[sz(i)][sz(j)] = e.substitute(sub);
        }
    BetaStructure s0 = BetaStructure::make(f.chart, at0);
    require_compatible(s0);
    // directional derivatives s^m = sum_k D_mk d beta / d b_k
    std::vector<Matrix<ScalarExpr>> sm(sz(n), Matrix<ScalarExpr>(sz(n), std::vector<ScalarExpr>(sz(n))));
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    sm[sz(m)][sz(i)][sz(j)] += ScalarExpr::from_double(dirs[sz(m)][sz(k)]) * db[sz(k)][sz(i)][sz(j)];
    ScalarExpr dets;
    for (const auto& sigma : permutations(n)) {
        Matrix<ScalarExpr> M(sz(n), std::vector<ScalarExpr>(sz(n)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M[sz(i)][sz(j)] = sm[sz(sigma[sz(i)])][sz(i)][sz(j)];
        dets += determinant(M);
    }
    // sum over base Gauss nodes of int_fibre V^2 dets / Vol(y)^2
    auto [gx, gw] = gauss_legendre(q.gauss_order);
    std::size_t order = gx.size(), total = 1;
    for (int a = 0; a < n; ++a) total *= order;
    ScalarExpr integrand = s0.V * s0.V * dets;
    double acc = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t r = k;
        BasePoint y{{0, 0, 0}};
        double w = 1.0;
        for (int a = 0; a < n; ++a) {
            std::size_t j = r % order;
            r /= order;
            double half = 0.5 * (f.chart.hi[sz(a)] - f.chart.lo[sz(a)]);
            double mid = 0.5 * (f.chart.hi[sz(a)] + f.chart.lo[sz(a)]);
            y[sz(a)] = mid + half * gx[j];
            w *= half * gw[j];
        }
        double vol = integrate_fibre(s0.V, f.chart, y, q.resolution);
        acc += w * integrate_fibre(integrand, f.chart, y, q.resolution) / (vol * vol);
    }
    YukawaResult out;
    out.quadrature = orientation_sign(n) * acc;
    bool constant = dets.is_constant();
    for (const auto& row : s0.g_inv)
        for (const auto& e : row) constant = constant && e.is_constant();
    if (constant) {
        std::vector<Matrix<double>> sd(sz(n), Matrix<double>(sz(n), std::vector<double>(sz(n))));
        for (int m = 0; m < n; ++m)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    auto v = sm[sz(m)][sz(i)][sz(j)].as_rational();
                    constant = constant && v.has_value();
                    if (v) sd[sz(m)][sz(i)][sz(j)] = v->get_d();
                }
        if (constant) out.closed_form = yukawa_topological(n, sd, f.chart.base_measure());
    }
    return out;
}

double yukawa_topological(int n, const std::vector<Matrix<double>>& s, double base_measure) {
    DifferentialForm acc = DifferentialForm::term(n, {}, ComplexExpr(1));
    for (int i = 0; i < n; ++i) {
        DifferentialForm f(n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                f += DifferentialForm::term(n, {dx_slot(j + 1), dy_slot(k + 1)},
                                            ComplexExpr(ScalarExpr::from_double(s[sz(i)][sz(j)][sz(k)])));
        acc = wedge(acc, f);
    }
    // coefficient in the dx_1..dx_n dy_1..dy_n ordering (masks store dy slots first)
    unsigned top = y_mask(n) | x_mask(n);
    double c = acc.coef(top).re.eval(Point{}.data());
    if (n % 2) c = -c;
    return orientation_sign(n) * orientation_sign(n) * c * base_measure;
}

}  // namespace syzlab
