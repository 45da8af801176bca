#pragma once

#include "syzlab/semiflat.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

namespace syzlab {

using BasePoint = std::array<double, 3>;

// Fibre cycle as an integer combination of basis cycles. Degree 1: e_i is the
// x_i-loop. Degree n-1 >= 2: basis element k is the coordinate subtorus
// {x_k = 0} oriented by the remaining x's in increasing order. Degree 0 (n = 1):
// the point x = 0.
struct CycleSpec {
    int degree = 1;
    std::vector<long> coeffs;
    BasePoint at{{0, 0, 0}};
};

// Order used to identify Lambda^dual with wedge^{n-1} Lambda:
// Forward: e_i^* <-> (-1)^{i-1} e_{[n]\i}; Reversed: e_i^* <-> (-1)^{n-i} e_{[n]\i}.
enum class PairingOrder { Forward, Reversed };

// Coefficients t with gamma = sum_i t_i e_i^* (degree n-1 cycles only).
std::vector<double> cycle_to_tangent(int n, const CycleSpec& gamma, PairingOrder order = PairingOrder::Forward);
// The degree n-1 cycle corresponding to e_i^* (1-based i).
CycleSpec dual_basis_cycle(int n, int i, PairingOrder order = PairingOrder::Forward);

// Integral of a form's fibre part over a fibre cycle at base point y.
double integrate_over_cycle(const DifferentialForm& f, const Chart& c, const BasePoint& y, const CycleSpec& gamma,
                            int resolution);

struct McLeanData {
    Eigen::MatrixXd h_quadrature;  // -int (iota(d/dy_i) omega) ^ (iota(d/dy_j) Im Omega)
    Eigen::MatrixXd h_closed;      // int V g^ij dx
    Eigen::MatrixXd h_n;           // h / Vol
    double theta = 0.0;
    double vol = 0.0;
};
McLeanData mclean_metrics(const BetaStructure& s, const BasePoint& y, int resolution = 16);
// Symbolic h_n when V g^ij is x-independent: h_n = g^ij = Im beta.
std::optional<Matrix<ScalarExpr>> mclean_closed_form(const BetaStructure& s);
// Checks over base samples: h_agreement, h_n_symmetry, h_n_min_eigenvalue.
Report mclean_report(const BetaStructure& s, const SemiflatOptions& o = {}, int resolution = 16);

// psi(gamma)(v) = -int_gamma iota(v) Im Omega_n at y.
std::vector<double> period_covector(const BetaStructure& s, const CycleSpec& gamma, const BasePoint& y,
                                    int resolution = 16);
struct PeriodField {
    std::vector<BasePoint> points;
    std::vector<std::vector<double>> values;
    double d_residual = 0.0;  // max |d psi| by fourth-order differences
};
PeriodField period_one_form(const BetaStructure& s, const CycleSpec& gamma, const SampleGrid& g = {},
                            int resolution = 16, double step = 1e-2);

struct DualityOptions {
    int resolution = 16;
    double tol = 1e-8;
    PairingOrder order = PairingOrder::Forward;
};
// Checks: cycle_pairing (both sides of the fibre integration identity), embedding_sign (psi + h_n(gamma, .)),
// im_omega_class (periods of Im Omega_n vs h_n), dual_omega_class (periods of the
// re-embedded dual symplectic form vs Im Omega_n).
Report duality_identities(const BetaStructure& s, const CycleSpec& gamma, const DifferentialForm& alpha,
                          const DualityOptions& o = {});

// Sum alpha_ij dy_i (x) dy_j with y-only entries.
struct SymTensorField {
    Matrix<ScalarExpr> a;
};
struct SymmetricTest {
    Matrix<ScalarExpr> defect;  // alpha_ji - alpha_ij
    DifferentialForm wedge_minus_omega;  // sum_{i<j} (alpha_ij - alpha_ji) dy_i ^ dy_j
    bool symmetric = false;
};
SymmetricTest symmetric_class_test(const SymTensorField& alpha);
struct Symmetrized {
    SymTensorField result;           // alpha + nabla beta'
    std::vector<ScalarExpr> potential;  // beta_1..beta_n
};
// Solves d beta_j/dy_i - d beta_i/dy_j = alpha_ji - alpha_ij with antiderivatives.
Symmetrized symmetrize_class(const SymTensorField& alpha);
// The n-form sum (-1)^{j-1} alpha_ij dy_i ^ dx_{[n]\j} representing the class.
DifferentialForm class_representative(const SymTensorField& alpha);

struct HitchinPotential {
    Chart chart;
    ScalarExpr phi;
    Matrix<ScalarExpr> hessian() const;
};
// b + i Hess phi; throws Errc::Positivity for a non positive definite Hessian.
BetaStructure hitchin(const HitchinPotential& p, const std::optional<SymTensorField>& b = std::nullopt,
                      const SampleGrid& g = {});
// Checks: det_hessian_variation, d_omega, integrability, criterion_agreement.
Report hitchin_report(const HitchinPotential& p, const std::optional<SymTensorField>& b = std::nullopt,
                      const SemiflatOptions& o = {});

// Requires x-constant g. Checks: dual_h_n (max |hcheck_n - h_n|), volume_reciprocity
// (|Vol Volcheck - 1|), both over base samples.
Report dual_structure_check(const BetaStructure& s, const SemiflatOptions& o = {}, int resolution = 16);
// Dual volume with lattice generated by the rows of h_n.
double dual_fibre_volume(const BetaStructure& s, const BasePoint& y, int resolution = 16);

struct YukawaFamily {
    Chart chart;
    Matrix<ComplexExpr> beta;  // entries affine in b1..bn
};
struct YukawaResult {
    double quadrature = 0.0;
    std::optional<double> closed_form;  // when the integrand is constant
};
// Directions default to the unit vectors of b1..bn.
YukawaResult yukawa(const YukawaFamily& f, const std::vector<std::vector<double>>& directions = {},
                    const Quadrature& q = {});
// Constant-integrand value of sum_sigma det(d beta_ij / d b_sigma(i)) through the
// wedge of sum_jk s^i_jk dx_j ^ dy_k, times the base measure and orientation sign.
double yukawa_topological(int n, const std::vector<Matrix<double>>& s, double base_measure);

}  // namespace syzlab
