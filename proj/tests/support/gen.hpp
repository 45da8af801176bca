#pragma once
// Hand-rolled random generators shared by unit, property and acceptance tests.

#include "syzlab/bigraded.hpp"
#include "syzlab/chart.hpp"
#include "syzlab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace syzlab::testgen {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

    Q rational(int num_range = 5, int den_max = 4) {
        int num = 0;
        while (num == 0) num = uniform_int(-num_range, num_range);
        Q q(num, uniform_int(1, den_max));
        q.canonicalize();
        return q;
    }

    // Polynomial in y_1..y_n of small degree with rational coefficients.
    ScalarExpr poly_y(int n, int max_terms = 3, int max_deg = 2) {
        ScalarExpr e;
        int terms = uniform_int(1, max_terms);
        for (int t = 0; t < terms; ++t) {
            ScalarExpr m(rational());
            for (int i = 0; i < n; ++i) m *= ScalarExpr::var(yvar(i)).pow(uniform_int(0, max_deg));
            e += m;
        }
        return e;
    }

    // Periodic fibre factor: 1, sin or cos of 2*pi*k*x_i (+ a second mode).
    ScalarExpr periodic_x(int n) {
        int kind = uniform_int(0, 2);
        if (kind == 0) return ScalarExpr(1);
        int i = uniform_int(0, n - 1);
        int k = uniform_int(1, 2);
        ScalarExpr arg = ScalarExpr(2 * k) * ScalarExpr::pi() * ScalarExpr::var(xvar(i));
        if (n > 1 && coin(0.3)) {
            int j = (i + 1) % n;
            arg += ScalarExpr(2) * ScalarExpr::pi() * ScalarExpr::var(xvar(j));
        }
        return kind == 1 ? sin(arg) : cos(arg);
    }

    // Fibre-periodic scalar field.
    ScalarExpr field(int n, int max_terms = 2) {
        ScalarExpr e;
        int terms = uniform_int(1, max_terms);
        for (int t = 0; t < terms; ++t) e += poly_y(n, 2, 2) * periodic_x(n);
        return e;
    }

    ComplexExpr complex_field(int n) {
        if (coin(0.5)) return ComplexExpr(field(n));
        return ComplexExpr(field(n), field(n, 1));
    }

    ComplexExpr rational_complex() {
        return coin(0.5) ? ComplexExpr(ScalarExpr(rational())) : ComplexExpr(ScalarExpr(rational()), ScalarExpr(rational()));
    }

    // Homogeneous element of a random bidegree with up to max_terms entries.
    BigradedElement homogeneous(int n, int max_terms = 2) {
        int nj = uniform_int(0, n), ni = uniform_int(0, n);
        return homogeneous_of(n, ni, nj, max_terms);
    }

    BigradedElement homogeneous_of(int n, int ni, int nj, int max_terms = 2) {
        BigradedElement e(n);
        int terms = uniform_int(1, max_terms);
        for (int t = 0; t < terms; ++t) e.add(random_subset(n, nj), random_subset(n, ni), complex_field(n));
        return e;
    }

    // Possibly inhomogeneous element: sum of up to two homogeneous parts.
    BigradedElement element(int n) {
        BigradedElement e = homogeneous(n);
        if (coin(0.3)) e += homogeneous(n, 1);
        return e;
    }

    BigradedElement beta_like(int n) { return homogeneous_of(n, 1, 1, n * n); }

    Matrix<ComplexExpr> rational_poly_matrix(int n, bool complex_entries) {
        Matrix<ComplexExpr> m(static_cast<std::size_t>(n), std::vector<ComplexExpr>(static_cast<std::size_t>(n)));
        for (auto& row : m)
            for (auto& e : row) {
                ScalarExpr re = coin(0.8) ? poly_y(n, 2, 1) : ScalarExpr();
                ScalarExpr im = complex_entries && coin(0.6) ? poly_y(n, 2, 1) : ScalarExpr();
                e = ComplexExpr(re, im);
            }
        return m;
    }

    IndexSet random_subset(int n, int size) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i) idx.push_back(i);
        std::shuffle(idx.begin(), idx.end(), rng_);
        IndexSet s = 0;
        for (int k = 0; k < size; ++k) s |= 1u << idx[static_cast<std::size_t>(k)];
        return s;
    }

    Point point(const Chart& c) {
        Point p{};
        for (int i = 0; i < c.n; ++i) {
            p[static_cast<std::size_t>(yvar(i))] = uniform(c.lo[static_cast<std::size_t>(i)], c.hi[static_cast<std::size_t>(i)]);
            p[static_cast<std::size_t>(xvar(i))] = uniform(0.0, 1.0);
        }
        return p;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline double eval_abs(const ComplexExpr& c, const Point& p) { return std::hypot(c.re.eval(p.data()), c.im.eval(p.data())); }

// max over points and coefficients of |a - b|.
inline double max_deviation(const BigradedElement& a, const BigradedElement& b, const std::vector<Point>& pts) {
    BigradedElement d = a - b;
    double m = 0.0;
    for (const auto& [k, c] : d.terms())
        for (const auto& p : pts) m = std::max(m, eval_abs(c, p));
    return m;
}

inline double max_deviation(const DifferentialForm& a, const DifferentialForm& b, const std::vector<Point>& pts) {
    DifferentialForm d = a - b;
    double m = 0.0;
    for (const auto& [k, c] : d.terms())
        for (const auto& p : pts) m = std::max(m, eval_abs(c, p));
    return m;
}

inline std::vector<Point> random_points(Gen& g, const Chart& c, int count) {
    std::vector<Point> pts;
    for (int i = 0; i < count; ++i) pts.push_back(g.point(c));
    return pts;
}

// Direct wedge expansion of prod_i (dx_i + sum_j beta_ij dy_j): every factor
// picks dx_i or one dy_j; the slot sequence is sorted by counting inversions.
inline DifferentialForm wedge_expansion(const Matrix<ComplexExpr>& beta) {
    int n = static_cast<int>(beta.size());
    DifferentialForm out(n);
    int choices = 1;
    for (int i = 0; i < n; ++i) choices *= n + 1;
    for (int code = 0; code < choices; ++code) {
        std::vector<int> slots;
        ComplexExpr c(1);
        int r = code;
        for (int i = 0; i < n; ++i) {
            int pick = r % (n + 1);
            r /= n + 1;
            if (pick == n) {
                slots.push_back(dx_slot(i + 1));
            } else {
                slots.push_back(dy_slot(pick + 1));
                c = c * beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(pick)];
            }
        }
        unsigned mask = 0;
        bool repeated = false;
        int inversions = 0;
        for (std::size_t a = 0; a < slots.size(); ++a) {
            if (mask & (1u << slots[a])) repeated = true;
            mask |= 1u << slots[a];
            for (std::size_t b = a + 1; b < slots.size(); ++b)
                if (slots[a] > slots[b]) ++inversions;
        }
        if (repeated) continue;
        out.add(mask, (inversions & 1) ? -c : c);
    }
    return out;
}

}  // namespace syzlab::testgen
