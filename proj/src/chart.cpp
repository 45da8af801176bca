#include "syzlab/chart.hpp"

#include "syzlab/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace syzlab {

Chart Chart::make(int n, const std::vector<std::pair<double, double>>& box) {
    if (n < 1 || n > 3) throw Error(Errc::Schema, "chart dimension must be 1, 2 or 3");
    if (static_cast<int>(box.size()) != n) throw Error(Errc::Schema, "box must list one interval per base axis");
    Chart c;
    c.n = n;
    for (int i = 0; i < n; ++i) {
        c.lo[static_cast<std::size_t>(i)] = box[static_cast<std::size_t>(i)].first;
        c.hi[static_cast<std::size_t>(i)] = box[static_cast<std::size_t>(i)].second;
    }
    c.validate();
    return c;
}

void Chart::validate() const {
    if (n < 1 || n > 3) throw Error(Errc::Schema, "chart dimension must be 1, 2 or 3");
    for (int i = 0; i < n; ++i)
        if (!(lo[static_cast<std::size_t>(i)] < hi[static_cast<std::size_t>(i)]))
            throw Error(Errc::Schema, "empty base interval on axis y" + std::to_string(i + 1));
}

std::array<double, 3> Chart::center() const {
    std::array<double, 3> c{{0, 0, 0}};
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
}

double Chart::base_measure() const {
    double m = 1.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) m *= hi[i] - lo[i];
    return m;
}

bool operator==(const Chart& a, const Chart& b) {
    if (a.n != b.n) return false;
    for (std::size_t i = 0; i < static_cast<std::size_t>(a.n); ++i)
        if (a.lo[i] != b.lo[i] || a.hi[i] != b.hi[i]) return false;
    return true;
}

unsigned y_mask(int n) { return (1u << n) - 1u; }
unsigned x_mask(int n) { return ((1u << n) - 1u) << 3; }

unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SYZLAB_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) hw = std::min(hw, static_cast<unsigned>(cap));
    }
    return hw;
}

namespace {

// Calls body(begin, end, worker) over [0, count) split into contiguous chunks.
template <class F>
void parallel_chunks(std::size_t count, F&& body) {
    unsigned w = worker_count();
    if (w <= 1 || count < 4096) {
        body(std::size_t{0}, count, 0u);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t step = (count + w - 1) / w;
    for (unsigned t = 0; t < w; ++t) {
        std::size_t b = t * step, e = std::min(count, b + step);
        if (b >= e) break;
        pool.emplace_back([&, b, e, t] { body(b, e, t); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<Point> sample_points(const Chart& c, const SampleGrid& g, bool include_fibre) {
    c.validate();
    int nb = std::max(1, g.base_per_axis);
    int nf = include_fibre ? std::max(1, g.fibre_per_axis) : 1;
    std::vector<std::vector<double>> axes;
    for (int i = 0; i < c.n; ++i) {
        std::vector<double> a;
        for (int k = 0; k < nb; ++k) {
            double t = nb == 1 ? 0.5 : static_cast<double>(k) / (nb - 1);
            a.push_back(c.lo[static_cast<std::size_t>(i)] + t * (c.hi[static_cast<std::size_t>(i)] - c.lo[static_cast<std::size_t>(i)]));
        }
        axes.push_back(std::move(a));
    }
    for (int i = 0; i < c.n; ++i) {
        std::vector<double> a;
        for (int k = 0; k < nf; ++k) a.push_back(static_cast<double>(k) / nf);
        axes.push_back(std::move(a));
    }
    std::vector<Point> out;
    std::vector<std::size_t> idx(axes.size(), 0);
    for (;;) {
        Point p{};
        for (int i = 0; i < c.n; ++i) {
            p[static_cast<std::size_t>(yvar(i))] = axes[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
            p[static_cast<std::size_t>(xvar(i))] = axes[static_cast<std::size_t>(c.n + i)][idx[static_cast<std::size_t>(c.n + i)]];
        }
        out.push_back(p);
        std::size_t k = 0;
        while (k < idx.size()) {
            if (++idx[k] < axes[k].size()) break;
            idx[k] = 0;
            ++k;
        }
        if (k == idx.size()) break;
    }
    return out;
}

SupNorm sup_norm(const std::vector<ScalarExpr>& exprs, const Chart& c, const SampleGrid& g) {
    SupNorm best;
    if (exprs.empty()) return best;
    unsigned mask = 0;
    for (const auto& e : exprs) mask |= e.var_mask();
    auto pts = sample_points(c, g, (mask & kXMask) != 0);
    CompiledExprs comp(exprs);
    unsigned w = worker_count();
    std::vector<SupNorm> partial(w);
    parallel_chunks(pts.size(), [&](std::size_t b, std::size_t e, unsigned t) {
        std::vector<double> out(comp.size()), scratch;
        SupNorm local;
        for (std::size_t i = b; i < e; ++i) {
            comp.eval(pts[i].data(), out.data(), scratch);
            for (double v : out) {
                double a = std::isfinite(v) ? std::fabs(v) : INFINITY;
                if (a > local.value) {
                    local.value = a;
                    local.where = pts[i];
                }
            }
        }
        partial[t] = local;
    });
    for (const auto& p : partial)
        if (p.value > best.value) best = p;
    return best;
}

SupNorm sup_norm(const std::vector<ComplexExpr>& exprs, const Chart& c, const SampleGrid& g) {
    std::vector<ScalarExpr> flat;
    for (const auto& e : exprs) {
        flat.push_back(e.re);
        flat.push_back(e.im);
    }
    return sup_norm(flat, c, g);
}

MinEigen min_eigenvalue(const Matrix<ScalarExpr>& m, const Chart& c, const SampleGrid& g) {
    std::size_t n = m.size();
    std::vector<ScalarExpr> flat;
    unsigned mask = 0;
    for (const auto& row : m)
        for (const auto& e : row) {
            flat.push_back(e);
            mask |= e.var_mask();
        }
    auto pts = sample_points(c, g, (mask & kXMask) != 0);
    CompiledExprs comp(flat);
    MinEigen best;
    best.value = INFINITY;
    std::vector<double> out(flat.size()), scratch;
    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& p : pts) {
        comp.eval(p.data(), out.data(), scratch);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.5 * (out[i * n + j] + out[j * n + i]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        double v = es.eigenvalues().minCoeff();
        if (!std::isfinite(v)) v = -INFINITY;
        if (v < best.value) {
            best.value = v;
            best.where = p;
        }
    }
    return best;
}

// ---- quadrature

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order) {
    if (order < 1) throw Error(Errc::Schema, "Gauss-Legendre order must be positive");
    std::vector<double> x(static_cast<std::size_t>(order)), w(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (order == 1) {
                p1 = z;
                p0 = 1.0;
            }
            dp = order * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        x[static_cast<std::size_t>(i)] = z;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

namespace {

void require_periodic(const ScalarExpr& f) {
    if (!is_fibre_periodic(f)) throw Error(Errc::NonPeriodic, "field is not fibre-periodic: " + f.str());
}

void require_resolution(int r) {
    if (r < 1) throw Error(Errc::Schema, "quadrature resolution must be positive");
}

// Sum over a uniform periodic grid in the listed x axes (others fixed in base).
double periodic_sum(const CompiledExprs& comp, Point base, const std::vector<int>& axes, int res) {
    std::vector<double> out(1), scratch;
    std::size_t total = 1;
    for (std::size_t i = 0; i < axes.size(); ++i) total *= static_cast<std::size_t>(res);
    double s = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t r = k;
        Point p = base;
        for (int a : axes) {
            p[static_cast<std::size_t>(xvar(a))] += static_cast<double>(r % static_cast<std::size_t>(res)) / res;
            r /= static_cast<std::size_t>(res);
        }
        comp.eval(p.data(), out.data(), scratch);
        s += out[0];
    }
    return s / static_cast<double>(total);
}

}  // namespace

double integrate_fibre(const ScalarExpr& f, const Chart& c, const std::array<double, 3>& y, int resolution) {
    require_periodic(f);
    require_resolution(resolution);
    CompiledExprs comp({f});
    Point base{};
    for (int i = 0; i < c.n; ++i) base[static_cast<std::size_t>(yvar(i))] = y[static_cast<std::size_t>(i)];
    std::vector<int> axes;
    for (int i = 0; i < c.n; ++i)
        if (f.depends_on(xvar(i))) axes.push_back(i);
    return periodic_sum(comp, base, axes, resolution);
}

double integrate_base(const ScalarExpr& f, const Chart& c, int order) {
    if (f.var_mask() & kXMask) throw Error(Errc::DependsOnFibre, "base integrand depends on fibre coordinates");
    Quadrature q;
    q.gauss_order = order;
    q.resolution = 1;
    return integrate_total(f, c, q);
}

double integrate_total(const ScalarExpr& f, const Chart& c, const Quadrature& q) {
    require_periodic(f);
    require_resolution(q.resolution);
    auto [gx, gw] = gauss_legendre(q.gauss_order);
    CompiledExprs comp({f});
    std::vector<int> xaxes;
    for (int i = 0; i < c.n; ++i)
        if (f.depends_on(xvar(i))) xaxes.push_back(i);
    std::vector<int> yaxes;
    for (int i = 0; i < c.n; ++i)
        if (f.depends_on(yvar(i))) yaxes.push_back(i);
    double measure = 1.0;
    for (int i = 0; i < c.n; ++i)
        if (!f.depends_on(yvar(i))) measure *= c.hi[static_cast<std::size_t>(i)] - c.lo[static_cast<std::size_t>(i)];
    std::size_t order = gx.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < yaxes.size(); ++i) total *= order;
    double s = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t r = k;
        Point p{};
        double w = 1.0;
        for (int a : yaxes) {
            std::size_t j = r % order;
            r /= order;
            double half = 0.5 * (c.hi[static_cast<std::size_t>(a)] - c.lo[static_cast<std::size_t>(a)]);
            double mid = 0.5 * (c.hi[static_cast<std::size_t>(a)] + c.lo[static_cast<std::size_t>(a)]);
            p[static_cast<std::size_t>(yvar(a))] = mid + half * gx[j];
            w *= half * gw[j];
        }
        s += w * periodic_sum(comp, p, xaxes, q.resolution);
    }
    return s * measure;
}

double integrate_loop(const ScalarExpr& f, const Chart& c, const std::array<double, 3>& y, const std::array<int, 3>& dir,
                      const std::array<double, 3>& x0, int resolution) {
    require_periodic(f);
    require_resolution(resolution);
    CompiledExprs comp({f});
    std::vector<double> out(1), scratch;
    double s = 0.0;
    for (int k = 0; k < resolution; ++k) {
        double t = static_cast<double>(k) / resolution;
        Point p{};
        for (int i = 0; i < c.n; ++i) {
            p[static_cast<std::size_t>(yvar(i))] = y[static_cast<std::size_t>(i)];
            p[static_cast<std::size_t>(xvar(i))] = x0[static_cast<std::size_t>(i)] + t * dir[static_cast<std::size_t>(i)];
        }
        comp.eval(p.data(), out.data(), scratch);
        s += out[0];
    }
    return s / resolution;
}

double integrate_subtorus(const ScalarExpr& f, const Chart& c, const std::array<double, 3>& y, int skip, double x_skip,
                          int resolution) {
    require_periodic(f);
    require_resolution(resolution);
    CompiledExprs comp({f});
    Point base{};
    for (int i = 0; i < c.n; ++i) base[static_cast<std::size_t>(yvar(i))] = y[static_cast<std::size_t>(i)];
    base[static_cast<std::size_t>(xvar(skip))] = x_skip;
    std::vector<int> axes;
    for (int i = 0; i < c.n; ++i)
        if (i != skip) axes.push_back(i);
    return periodic_sum(comp, base, axes, resolution);
}

}  // namespace syzlab
