#pragma once

#include "syzlab/expr.hpp"

#include <array>
#include <utility>
#include <vector>

namespace syzlab {

// Base box in action coordinates y; fibres are R^n / Z^n in x.
struct Chart {
    int n = 2;
    std::array<double, 3> lo{{0, 0, 0}};
    std::array<double, 3> hi{{1, 1, 1}};

    static Chart make(int n, const std::vector<std::pair<double, double>>& box);
    static Chart unit(int n) { return make(n, std::vector<std::pair<double, double>>(static_cast<std::size_t>(n), {-1.0, 1.0})); }
    std::array<double, 3> center() const;
    double base_measure() const;
    void validate() const;
    friend bool operator==(const Chart& a, const Chart& b);
};

unsigned y_mask(int n);
unsigned x_mask(int n);

struct SampleGrid {
    int base_per_axis = 5;
    int fibre_per_axis = 8;
};

using Point = std::array<double, kNumVars>;

// Base points include the box corners; fibre points are k/fibre_per_axis.
// Axes in `mask` outside the chart's dimension are held at zero.
std::vector<Point> sample_points(const Chart& c, const SampleGrid& g, bool include_fibre);

struct SupNorm {
    double value = 0.0;
    Point where{};
};

// max_k max_p |e_k(p)| over the sample grid (fibre samples only when some
// expression depends on x).
SupNorm sup_norm(const std::vector<ScalarExpr>& exprs, const Chart& c, const SampleGrid& g = {});
SupNorm sup_norm(const std::vector<ComplexExpr>& exprs, const Chart& c, const SampleGrid& g = {});
// min over samples of the smallest eigenvalue of a symmetric matrix field.
struct MinEigen {
    double value = 0.0;
    Point where{};
};
MinEigen min_eigenvalue(const Matrix<ScalarExpr>& m, const Chart& c, const SampleGrid& g = {});

// Worker count used for batch evaluation (SYZLAB_THREADS caps it).
unsigned worker_count();

// ---- quadrature

struct Quadrature {
    int resolution = 16;  // fibre points per axis
    int gauss_order = 12;  // Gauss-Legendre nodes per base axis
};

// Periodic rectangle rule on the fibre over y.
double integrate_fibre(const ScalarExpr& f, const Chart& c, const std::array<double, 3>& y, int resolution);
// Gauss-Legendre over the base box; f must not depend on x.
double integrate_base(const ScalarExpr& f, const Chart& c, int order);
// Base (Gauss-Legendre) times fibre (rectangle rule).
double integrate_total(const ScalarExpr& f, const Chart& c, const Quadrature& q);
// Line integral over the closed fibre loop t -> x0 + t*dir, t in [0,1].
double integrate_loop(const ScalarExpr& f, const Chart& c, const std::array<double, 3>& y, const std::array<int, 3>& dir,
                      const std::array<double, 3>& x0, int resolution);
// Integral over the coordinate subtorus with x_skip held at x0[skip].
double integrate_subtorus(const ScalarExpr& f, const Chart& c, const std::array<double, 3>& y, int skip, double x_skip,
                          int resolution);

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order);

}  // namespace syzlab
