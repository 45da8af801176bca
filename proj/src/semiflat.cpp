#include "syzlab/semiflat.hpp"

#include "syzlab/error.hpp"

#include <cmath>
#include <sstream>

namespace syzlab {

namespace {

using std::size_t;

size_t sz(int i) { return static_cast<size_t>(i); }

std::string point_str(const Point& p, int n) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < n; ++i) os << (i ? ", " : "") << "y" << i + 1 << "=" << p[sz(yvar(i))];
    for (int i = 0; i < n; ++i) os << ", x" << i + 1 << "=" << p[sz(xvar(i))];
    os << ")";
    return os.str();
}

double symmetry_defect(const BetaStructure& s, const SampleGrid& g) {
    std::vector<ComplexExpr> d;
    for (int i = 0; i < s.n(); ++i)
        for (int j = i + 1; j < s.n(); ++j) d.push_back(s.beta[sz(i)][sz(j)] - s.beta[sz(j)][sz(i)]);
    return sup_norm(d, s.chart, g).value;
}

ScalarExpr dot_fibre_divergence(const std::vector<ScalarExpr>& comps) {
    ScalarExpr r;
    for (size_t i = 0; i < comps.size(); ++i) r += comps[i].diff(xvar(static_cast<int>(i)));
    return r;
}

}  // namespace

Matrix<ScalarExpr> transpose(const Matrix<ScalarExpr>& m) {
    Matrix<ScalarExpr> t(m.size(), std::vector<ScalarExpr>(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m.size(); ++j) t[j][i] = m[i][j];
    return t;
}

ScalarExpr determinant(const Matrix<ScalarExpr>& m) {
    switch (m.size()) {
        case 1: return m[0][0];
        case 2: return m[0][0] * m[1][1] - m[0][1] * m[1][0];
        case 3:
            return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        default: throw Error(Errc::Schema, "matrix size must be 1, 2 or 3");
    }
}

Matrix<ScalarExpr> inverse(const Matrix<ScalarExpr>& m) {
    ScalarExpr det = determinant(m);
    if (det.is_zero()) throw Error(Errc::Positivity, "matrix is singular");
    ScalarExpr inv = det.inverse();
    size_t n = m.size();
    Matrix<ScalarExpr> out(n, std::vector<ScalarExpr>(n));
    if (n == 1) {
        out[0][0] = inv;
        return out;
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            // cofactor C_ji
            Matrix<ScalarExpr> minor;
            for (size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                std::vector<ScalarExpr> row;
                for (size_t c = 0; c < n; ++c)
                    if (c != i) row.push_back(m[r][c]);
                minor.push_back(std::move(row));
            }
            ScalarExpr cof = determinant(minor);
            out[i][j] = ((i + j) % 2 ? -cof : cof) * inv;
        }
    return out;
}

Matrix<ScalarExpr> real_part(const Matrix<ComplexExpr>& m) {
    Matrix<ScalarExpr> o(m.size(), std::vector<ScalarExpr>(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m.size(); ++j) o[i][j] = m[i][j].re;
    return o;
}

Matrix<ScalarExpr> imag_part(const Matrix<ComplexExpr>& m) {
    Matrix<ScalarExpr> o(m.size(), std::vector<ScalarExpr>(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m.size(); ++j) o[i][j] = m[i][j].im;
    return o;
}

BigradedElement vector_valued_one_form(const Matrix<ScalarExpr>& m) {
    Matrix<ComplexExpr> c(m.size(), std::vector<ComplexExpr>(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m.size(); ++j) c[i][j] = ComplexExpr(m[i][j]);
    return beta_element(c);
}

BetaStructure BetaStructure::make(const Chart& chart, const Matrix<ComplexExpr>& beta, bool compatible) {
    chart.validate();
    int n = chart.n;
    if (static_cast<int>(beta.size()) != n) throw Error(Errc::ChartMismatch, "beta must be n x n for the chart dimension");
    unsigned allowed = y_mask(n) | x_mask(n);
    for (const auto& row : beta) {
        if (static_cast<int>(row.size()) != n) throw Error(Errc::ChartMismatch, "beta must be n x n for the chart dimension");
        for (const auto& e : row) {
            if (e.var_mask() & ~allowed) throw Error(Errc::ChartMismatch, "beta entry uses a variable outside the chart");
            if (!is_fibre_periodic(e.re) || !is_fibre_periodic(e.im))
                throw Error(Errc::NonPeriodic, "beta entry is not fibre-periodic: " + e.str());
        }
    }
    BetaStructure s;
    s.chart = chart;
    s.beta = beta;
    s.compatible = compatible;
    s.b = real_part(beta);
    s.g_inv = imag_part(beta);
    s.det_g_inv = determinant(s.g_inv);
    if (!s.det_g_inv.is_zero()) {
        s.g = inverse(s.g_inv);
        auto c = s.det_g_inv.as_rational();
        if (!c || *c > 0) s.V = sqrt(s.det_g_inv).inverse();
    }
    return s;
}

double residual_norm(const BigradedElement& e, const Chart& c, const SampleGrid& g) {
    std::vector<ComplexExpr> v;
    for (const auto& [k, x] : e.terms()) v.push_back(x);
    return sup_norm(v, c, g).value;
}

double residual_norm(const DifferentialForm& f, const Chart& c, const SampleGrid& g) {
    std::vector<ComplexExpr> v;
    for (const auto& [k, x] : f.terms()) v.push_back(x);
    return sup_norm(v, c, g).value;
}

void require_compatible(const BetaStructure& s, const SemiflatOptions& o) {
    if (!s.compatible) throw Error(Errc::Incompatible, "structure is declared incompatible");
    double sym = symmetry_defect(s, o.grid);
    if (sym > 1e-12) throw Error(Errc::Incompatible, "beta is not symmetric (defect " + std::to_string(sym) + ")");
    MinEigen me = min_eigenvalue(s.g_inv, s.chart, o.grid);
    if (!(me.value > o.positivity) || s.g.empty()) {
        std::ostringstream os;
        os << "Im beta is not positive definite: min eigenvalue " << me.value << " at " << point_str(me.where, s.n());
        throw Error(Errc::Positivity, os.str());
    }
}

BigradedElement build_omega(const BetaStructure& s, const SemiflatOptions& o) {
    require_compatible(s, o);
    return ComplexExpr(s.V) * exp_beta(s.element());
}

Report pointwise_checks(const BetaStructure& s, const SemiflatOptions& o, const std::optional<ScalarExpr>& V_override) {
    Report r;
    r.residual("symmetry", symmetry_defect(s, o.grid), o.tol);
    MinEigen me = min_eigenvalue(s.g_inv, s.chart, o.grid);
    r.lower_bound("min_eigenvalue", me.value, o.positivity, "worst at " + point_str(me.where, s.n()));
    ScalarExpr V = V_override ? *V_override : s.V;
    if (!V_override && s.g.empty()) {
        r.residual("volume_normalization", INFINITY, o.tol, "Im beta is singular");
    } else {
        r.residual("volume_normalization", sup_norm(std::vector<ScalarExpr>{V * V * s.det_g_inv - ScalarExpr(1)}, s.chart, o.grid).value,
                   o.tol);
    }
    return r;
}

BigradedElement integrability_residual(const BetaStructure& s) {
    BigradedElement b = s.element();
    return d_y(b) - ComplexExpr(ScalarExpr(Q(1, 2))) * bracket(b, b);
}

BigradedElement integrability_indexed(const BetaStructure& s) {
    int n = s.n();
    const auto& B = s.beta;
    BigradedElement out(n);
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                ComplexExpr r = B[sz(l)][sz(k)].diff(yvar(j)) - B[sz(l)][sz(j)].diff(yvar(k));
                for (int i = 0; i < n; ++i) {
                    r -= B[sz(i)][sz(j)] * B[sz(l)][sz(k)].diff(xvar(i));
                    r += B[sz(i)][sz(k)] * B[sz(l)][sz(j)].diff(xvar(i));
                }
                out.add_ordered({j + 1, k + 1}, {l + 1}, r);
            }
    return out;
}

BigradedElement f2_residual(const BetaStructure& s) {
    int n = s.n();
    BigradedElement V = BigradedElement::scalar(n, ComplexExpr(s.V));
    return d_y(V) - d_xprime(product(V, s.element()));
}

DifferentialForm d_omega(const BetaStructure& s) {
    BigradedElement omega = ComplexExpr(s.V) * exp_beta(s.element());
    return exterior_derivative(to_form(omega));
}

Report closedness_residuals(const BetaStructure& s, const SemiflatOptions& o) {
    require_compatible(s, o);
    Report r;
    double a = residual_norm(d_omega(s), s.chart, o.grid);
    double b = residual_norm(f2_residual(s), s.chart, o.grid);
    double c = residual_norm(integrability_residual(s), s.chart, o.grid);
    r.residual("d_omega", a, o.tol);
    r.residual("f2_condition", b, o.tol);
    r.residual("integrability", c, o.tol);
    bool closed = a < o.tol, split = b < o.tol && c < o.tol;
    r.verdict("closedness_equivalence", closed == split,
              closed == split ? "" : "closed and (integrable and F2) verdicts disagree");
    return r;
}

StructureTerms structure_terms(const BetaStructure& s) {
    int n = s.n();
    if (s.g.empty()) throw Error(Errc::Positivity, "Im beta is singular");
    StructureTerms t;
    BigradedElement b = vector_valued_one_form(s.b);
    BigradedElement gi = vector_valued_one_form(s.g_inv);
    ComplexExpr half(ScalarExpr(Q(1, 2)));
    BigradedElement Fb = d_y(b) - half * bracket(b, b);
    t.curvature = Fb + half * bracket(gi, gi);
    t.metric_parallel = d_y(gi) - bracket(b, gi);
    for (int j = 0; j < n; ++j) {
        std::vector<ScalarExpr> star, drift;
        for (int k = 0; k < n; ++k) {
            star.push_back(s.V * s.g_inv[sz(j)][sz(k)]);
            drift.push_back(s.b[sz(k)][sz(j)] * s.V);
        }
        t.fibre_harmonic.push_back(dot_fibre_divergence(star));
        t.volume_parallel.push_back(s.V.diff(yvar(j)) - dot_fibre_divergence(drift));
    }
    return t;
}

Report structure_equations(const BetaStructure& s, const SemiflatOptions& o) {
    require_compatible(s, o);
    StructureTerms t = structure_terms(s);
    Report r;
    r.residual("curvature", residual_norm(t.curvature, s.chart, o.grid), o.tol);
    r.residual("metric_parallel", residual_norm(t.metric_parallel, s.chart, o.grid), o.tol);
    r.residual("fibre_harmonic", sup_norm(t.fibre_harmonic, s.chart, o.grid).value, o.tol);
    r.residual("volume_parallel", sup_norm(t.volume_parallel, s.chart, o.grid).value, o.tol);
    bool all = true;
    for (const auto& c : r.checks()) all = all && c.pass;
    bool closed = residual_norm(d_omega(s), s.chart, o.grid) < o.tol;
    r.verdict("matches_closedness", all == closed);
    return r;
}

double horizontal_frame_defect(const BetaStructure& s, const SampleGrid& g) {
    // Re theta_i (d/dy_j - sum_k b_kj d/dx_k) = Re beta_ij - b_ij
    std::vector<ScalarExpr> d;
    int n = s.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            DifferentialForm theta = DifferentialForm::dx(n, i + 1);
            for (int l = 0; l < n; ++l) theta += DifferentialForm::term(n, {dy_slot(l + 1)}, ComplexExpr(s.beta[sz(i)][sz(l)].re));
            DifferentialForm paired = contract(dy_slot(j + 1), theta);
            for (int k = 0; k < n; ++k)
                paired -= ComplexExpr(s.b[sz(k)][sz(j)]) * contract(dx_slot(k + 1), theta);
            d.push_back(paired.coef(0).re);
        }
    return sup_norm(d, s.chart, g).value;
}

namespace {

void require_base_only(const std::vector<ScalarExpr>& sigma, int n) {
    if (static_cast<int>(sigma.size()) != n) throw Error(Errc::ChartMismatch, "section needs one coefficient per base axis");
    for (const auto& e : sigma)
        if (e.var_mask() & ~y_mask(n)) throw Error(Errc::DependsOnFibre, "section coefficient depends on more than y: " + e.str());
}

}  // namespace

BetaStructure translate_by_section(const BetaStructure& s, const std::vector<ScalarExpr>& sigma) {
    int n = s.n();
    require_base_only(sigma, n);
    std::vector<ScalarExpr> shifted;
    for (int i = 0; i < n; ++i) shifted.push_back(ScalarExpr::var(xvar(i)) + sigma[sz(i)]);
    std::array<const ScalarExpr*, kNumVars> r{};
    for (int i = 0; i < n; ++i) r[sz(xvar(i))] = &shifted[sz(i)];
    Matrix<ComplexExpr> out(sz(n), std::vector<ComplexExpr>(sz(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out[sz(i)][sz(j)] = s.beta[sz(i)][sz(j)].substitute(r) + ComplexExpr(sigma[sz(i)].diff(yvar(j)));
    return BetaStructure::make(s.chart, out, s.compatible);
}

DifferentialForm omega_pullback_defect(int n, const std::vector<ScalarExpr>& sigma) {
    require_base_only(sigma, n);
    std::vector<ScalarExpr> phi;
    for (int i = 0; i < n; ++i) phi.push_back(ScalarExpr::var(yvar(i)));
    for (int i = 0; i < n; ++i) phi.push_back(ScalarExpr::var(xvar(i)) + sigma[sz(i)]);
    DifferentialForm w = standard_omega(n);
    return pullback(w, phi) - w;
}

DifferentialForm base_exterior_derivative(int n, const std::vector<ScalarExpr>& sigma) {
    DifferentialForm f(n);
    for (int i = 0; i < n; ++i) f += DifferentialForm::term(n, {dy_slot(i + 1)}, ComplexExpr(sigma[sz(i)]));
    return exterior_derivative(f);
}

ActionCoordinates action_coordinates(const Matrix<ScalarExpr>& periods, const Chart& c, const SampleGrid& g) {
    int n = c.n;
    if (static_cast<int>(periods.size()) != n) throw Error(Errc::ChartMismatch, "need n period one-forms");
    for (const auto& row : periods) {
        if (static_cast<int>(row.size()) != n) throw Error(Errc::ChartMismatch, "period form needs n coefficients");
        require_base_only(row, n);
    }
    for (int i = 0; i < n; ++i) {
        double d = residual_norm(base_exterior_derivative(n, periods[sz(i)]), c, g);
        if (d > 1e-12) throw Error(Errc::NotClosed, "period form " + std::to_string(i + 1) + " is not closed");
    }
    ActionCoordinates out;
    auto center = c.center();
    std::array<ScalarExpr, kNumVars> cvals;
    std::array<const ScalarExpr*, kNumVars> at_center{};
    for (int k = 0; k < n; ++k) {
        cvals[sz(yvar(k))] = ScalarExpr::from_double(center[sz(k)]);
        at_center[sz(yvar(k))] = &cvals[sz(yvar(k))];
    }
    for (int i = 0; i < n; ++i) {
        // Integrate axis by axis; the remainder of a closed form loses the
        // earlier variables, which are then frozen at 0.
        ScalarExpr F;
        for (int k = 0; k < n; ++k) {
            ScalarExpr rest = periods[sz(i)][sz(k)] - F.diff(yvar(k));
            for (int m = 0; m < k; ++m) rest = rest.substitute(yvar(m), ScalarExpr());
            F += antiderivative(rest, yvar(k));
        }
        out.u.push_back(F - F.substitute(at_center));
    }
    // Jacobian d u / d y = periods
    auto pts = sample_points(c, g, false);
    CompiledExprs det({determinant(periods)});
    double m = INFINITY;
    for (const auto& p : pts) m = std::min(m, std::fabs(det.eval(p.data())[0]));
    out.min_abs_jacobian = m;
    if (!(m > 1e-9)) throw Error(Errc::DegenerateJacobian, "period forms are not independent on the box");
    return out;
}

ReglueResult reglue_check(const std::vector<ScalarExpr>& sigma, const Chart& overlap, double tol, const SampleGrid& g) {
    int n = overlap.n;
    require_base_only(sigma, n);
    ReglueResult r;
    r.closedness_defect = residual_norm(base_exterior_derivative(n, sigma), overlap, g);
    r.valid = r.closedness_defect < tol;
    for (int i = 0; i < n; ++i) r.transition.push_back(ScalarExpr::var(xvar(i)) + sigma[sz(i)]);
    return r;
}

Report flatness_probe(const BetaStructure& s, const SemiflatOptions& o) {
    int n = s.n();
    if (s.g.empty()) throw Error(Errc::Positivity, "Im beta is singular");
    BigradedElement b = vector_valued_one_form(s.b);
    BigradedElement Fb = d_y(b) - ComplexExpr(ScalarExpr(Q(1, 2))) * bracket(b, b);
    double curv = residual_norm(Fb, s.chart, o.grid);
    double dom = residual_norm(d_omega(s), s.chart, o.grid);
    std::vector<ScalarExpr> gg, vg;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) gg.push_back(s.g[sz(j)][sz(k)].diff(xvar(i)));
        vg.push_back(s.V.diff(xvar(i)));
    }
    double gx = sup_norm(gg, s.chart, o.grid).value;
    double vx = sup_norm(vg, s.chart, o.grid).value;
    Report r;
    r.info("connection_curvature", curv);
    r.info("d_omega", dom);
    r.info("g_fibre_gradient", gx);
    r.info("V_fibre_gradient", vx);
    bool hyp = curv < o.tol && dom < o.tol;
    r.info("hypothesis", hyp ? 1.0 : 0.0,
           hyp ? "closed with flat connection" : "hypothesis fails; no conclusion claimed");
    bool concl = !hyp || (gx < o.tol && vx < o.tol);
    r.verdict("conclusion", concl, "fibrewise constancy of g and V on this chart; global constancy of V is not tested");
    return r;
}

}  // namespace syzlab
