#pragma once

#include "syzlab/bigraded.hpp"
#include "syzlab/chart.hpp"
#include "syzlab/forms.hpp"
#include "syzlab/report.hpp"

#include <optional>
#include <vector>

namespace syzlab {

// beta_ij = b_ij + i g^ij on a chart, with the derived connection, fibre metric
// and volume factor.
struct BetaStructure {
    Chart chart;
    Matrix<ComplexExpr> beta;
    bool compatible = true;  // declared symmetric with positive definite Im beta

    Matrix<ScalarExpr> b;      // Re beta
    Matrix<ScalarExpr> g_inv;  // Im beta
    Matrix<ScalarExpr> g;      // pointwise inverse of Im beta (empty if singular)
    ScalarExpr det_g_inv;
    ScalarExpr V;              // sqrt(det g); zero when det Im beta is a non-positive constant

    static BetaStructure make(const Chart& chart, const Matrix<ComplexExpr>& beta, bool compatible = true);
    int n() const { return chart.n; }
    BigradedElement element() const { return beta_element(beta); }
};

struct SemiflatOptions {
    SampleGrid grid{};
    double tol = 1e-8;
    double positivity = 1e-9;
};

Matrix<ScalarExpr> transpose(const Matrix<ScalarExpr>& m);
ScalarExpr determinant(const Matrix<ScalarExpr>& m);
// Adjugate over determinant; throws Errc::Positivity when det is identically 0.
Matrix<ScalarExpr> inverse(const Matrix<ScalarExpr>& m);
Matrix<ScalarExpr> real_part(const Matrix<ComplexExpr>& m);
Matrix<ScalarExpr> imag_part(const Matrix<ComplexExpr>& m);
BigradedElement vector_valued_one_form(const Matrix<ScalarExpr>& m);

double residual_norm(const BigradedElement& e, const Chart& c, const SampleGrid& g = {});
double residual_norm(const DifferentialForm& f, const Chart& c, const SampleGrid& g = {});

// Throws Errc::Incompatible (asymmetric or declared incompatible) or
// Errc::Positivity (Im beta not positive definite at some sample).
void require_compatible(const BetaStructure& s, const SemiflatOptions& o = {});

// V exp(beta).
BigradedElement build_omega(const BetaStructure& s, const SemiflatOptions& o = {});

// Symmetry, positivity and V^2 det(Im beta) = 1. A supplied V replaces the
// derived one (negative tests only).
Report pointwise_checks(const BetaStructure& s, const SemiflatOptions& o = {},
                        const std::optional<ScalarExpr>& V_override = std::nullopt);

// d_y beta - 1/2 [beta, beta].
BigradedElement integrability_residual(const BetaStructure& s);
// Componentwise integrability: R_ljk = dbeta_lk/dy_j - dbeta_lj/dy_k
//   - sum_i (beta_ij dbeta_lk/dx_i - beta_ik dbeta_lj/dx_i), stored at dy_j ^ dy_k (x) d/dx_l.
BigradedElement integrability_indexed(const BetaStructure& s);
// d_y V - d_x'(V beta).
BigradedElement f2_residual(const BetaStructure& s);
// Exterior derivative of the n-form V exp(beta).
DifferentialForm d_omega(const BetaStructure& s);

// Checks: d_omega, f2_condition, integrability, closedness_equivalence.
Report closedness_residuals(const BetaStructure& s, const SemiflatOptions& o = {});

struct StructureTerms {
    BigradedElement curvature;        // F_b + 1/2 [g^-1, g^-1]
    BigradedElement metric_parallel;  // d_y g^-1 - [b, g^-1]
    std::vector<ScalarExpr> fibre_harmonic;  // j -> sum_k d/dx_k (V g^jk), the fibre d of *dx_j
    std::vector<ScalarExpr> volume_parallel;  // j -> dV/dy_j - sum_i d/dx_i (b_ij V)
};
StructureTerms structure_terms(const BetaStructure& s);
// Checks: curvature, metric_parallel, fibre_harmonic, volume_parallel, matches_closedness.
Report structure_equations(const BetaStructure& s, const SemiflatOptions& o = {});

// Horizontal frame d/dy_j - sum_i b_ij d/dx_i paired with Re theta_i.
double horizontal_frame_defect(const BetaStructure& s, const SampleGrid& g = {});

// beta'_ij(y, x) = beta_ij(y, x + sigma(y)) + d sigma_i / d y_j.
BetaStructure translate_by_section(const BetaStructure& s, const std::vector<ScalarExpr>& sigma);
// T_sigma^* omega - omega for the standard omega.
DifferentialForm omega_pullback_defect(int n, const std::vector<ScalarExpr>& sigma);
// d sigma for sigma = sum sigma_i dy_i.
DifferentialForm base_exterior_derivative(int n, const std::vector<ScalarExpr>& sigma);

struct ActionCoordinates {
    std::vector<ScalarExpr> u;
    double min_abs_jacobian = 0.0;
};
// periods[i][j] is the dy_j coefficient of lambda_i.
ActionCoordinates action_coordinates(const Matrix<ScalarExpr>& periods, const Chart& c, const SampleGrid& g = {});

struct ReglueResult {
    bool valid = false;
    double closedness_defect = 0.0;
    std::vector<ScalarExpr> transition;  // x_i -> x_i + sigma_i(y)
};
ReglueResult reglue_check(const std::vector<ScalarExpr>& sigma, const Chart& overlap, double tol = 1e-8,
                          const SampleGrid& g = {});

// Checks: connection_curvature, d_omega, g_fibre_gradient, V_fibre_gradient,
// hypothesis (info), conclusion.
Report flatness_probe(const BetaStructure& s, const SemiflatOptions& o = {});

}  // namespace syzlab
