#include "doctest.h"
#include "support/gen.hpp"
#include "support/structures.hpp"

#include "syzlab/duality.hpp"
#include "syzlab/error.hpp"

#include <cmath>
#include <functional>

using namespace syzlab;
using testgen::beta_of;
using testgen::ex;

namespace {

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Internal;
}

CycleSpec loop(int n, int i) {
    CycleSpec c;
    c.degree = 1;
    c.coeffs.assign(static_cast<std::size_t>(n), 0);
    c.coeffs[static_cast<std::size_t>(i - 1)] = 1;
    return c;
}

SymTensorField tensor(const std::vector<std::vector<std::string>>& rows) {
    SymTensorField t;
    for (const auto& r : rows) {
        std::vector<ScalarExpr> row;
        for (const auto& e : r) row.push_back(ex(e));
        t.a.push_back(row);
    }
    return t;
}

// Wedge of the class representative with the standard omega, read off as a base 2-form.
DifferentialForm wedge_oracle(const SymTensorField& a) {
    int n = static_cast<int>(a.a.size());
    DifferentialForm w = wedge(class_representative(a), -standard_omega(n));
    DifferentialForm out(n);
    for (const auto& [mask, c] : w.terms()) out.add(mask & 0x7u, c);
    return out;
}

}  // namespace

TEST_SUITE("duality") {

TEST_CASE("flat periods") {
    auto s = BetaStructure::make(Chart::unit(2), beta_of({{"0|1", "0"}, {"0", "0|1"}}));
    BasePoint y{{0.3, -0.2, 0}};
    auto p1 = period_covector(s, loop(2, 1), y);
    auto p2 = period_covector(s, loop(2, 2), y);
    CHECK(p1[0] == doctest::Approx(0.0));
    CHECK(p1[1] == doctest::Approx(1.0));
    CHECK(p2[0] == doctest::Approx(-1.0));
    CHECK(p2[1] == doctest::Approx(0.0));
    auto field = period_one_form(s, loop(2, 1));
    CHECK(field.d_residual < 1e-10);
    auto t = cycle_to_tangent(2, loop(2, 1));
    CHECK(t[0] == 0.0);
    CHECK(t[1] == -1.0);
    CHECK(code_of([&] {
              CycleSpec c = loop(2, 1);
              c.degree = 0;
              period_covector(s, c, y);
          }) == Errc::DegreeMismatch);
}

TEST_CASE("period additivity and closedness") {
    testgen::Gen g(11);
    auto s = testgen::hessian_structure(Chart::make(2, {{-1.0, 1.0}, {1.0, 2.0}}), "y1^2/(2*y2) + y2^3/6");
    for (int k = 0; k < 4; ++k) {
        CycleSpec a = loop(2, 1), b = loop(2, 2), ab = loop(2, 1);
        long u = g.uniform_int(-3, 3), v = g.uniform_int(-3, 3);
        if (u == 0 && v == 0) u = 1;
        ab.coeffs = {u, v};
        BasePoint y{{g.uniform(-1, 1), g.uniform(1, 2), 0}};
        auto pa = period_covector(s, a, y), pb = period_covector(s, b, y), pab = period_covector(s, ab, y);
        for (int j = 0; j < 2; ++j) CHECK(pab[j] == doctest::Approx(u * pa[j] + v * pb[j]).epsilon(1e-12));
    }
    SampleGrid grid{3, 8};
    CHECK(period_one_form(s, loop(2, 1), grid).d_residual < 1e-6);
    CHECK(period_one_form(s, loop(2, 2), grid).d_residual < 1e-6);
}

TEST_CASE("mclean metrics") {
    double c1 = 2.0, c2 = 5.0;
    auto s = BetaStructure::make(Chart::unit(2), beta_of({{"0|2", "0"}, {"0", "0|5"}}));
    McLeanData m = mclean_metrics(s, {{0, 0, 0}});
    double r = 1.0 / std::sqrt(c1 * c2);
    CHECK(m.vol == doctest::Approx(r));
    CHECK(m.h_quadrature(0, 0) == doctest::Approx(c1 * r));
    CHECK(m.h_quadrature(1, 1) == doctest::Approx(c2 * r));
    CHECK(std::fabs(m.h_quadrature(0, 1)) < 1e-14);
    CHECK(m.h_n(0, 0) == doctest::Approx(c1));
    CHECK(m.h_n(1, 1) == doctest::Approx(c2));
    CHECK(m.theta == doctest::Approx(1.0));

    auto flat = BetaStructure::make(Chart::unit(3), beta_of({{"0|1", "0", "0"}, {"0", "0|1", "0"}, {"0", "0", "0|1"}}));
    McLeanData f = mclean_metrics(flat, {{0, 0, 0}});
    CHECK((f.h_n - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(f.theta == doctest::Approx(1.0));

    auto closed = mclean_closed_form(s);
    REQUIRE(closed);
    CHECK((*closed)[1][1] == ScalarExpr(5));
}

TEST_CASE("mclean quadrature agrees with closed form") {
    for (const auto& ns : testgen::regression_structures()) {
        CAPTURE(ns.name);
        Report r = mclean_report(ns.s, {SampleGrid{2, 8}});
        CHECK(r.at("h_agreement").pass);
        CHECK(r.at("h_n_symmetry").pass);
        CHECK(r.at("h_n_min_eigenvalue").pass);
        CHECK(r.at("theta_unit").pass);
    }
    auto fibre = BetaStructure::make(Chart::unit(2), beta_of({{"0|1 + sin(2*pi*x1)/3", "0"}, {"0", "0|1"}}));
    CHECK_FALSE(mclean_closed_form(fibre));
    CHECK(code_of([] {
              auto bad = BetaStructure::make(Chart::unit(1), beta_of({{"0|-1"}}));
              mclean_metrics(bad, {{0, 0, 0}});
          }) == Errc::Positivity);
}

TEST_CASE("cycle pairing example") {
    auto s = BetaStructure::make(Chart::unit(2), beta_of({{"0|1", "0"}, {"0", "0|1"}}));
    CycleSpec g = dual_basis_cycle(2, 1);
    Report r = duality_identities(s, g, DifferentialForm::dx(2, 2));
    CHECK(r.at("cycle_pairing_lhs").value == doctest::Approx(1.0));
    CHECK(r.at("cycle_pairing").pass);
    CHECK(r.passed());
}

TEST_CASE("duality identities on closed structures") {
    testgen::Gen g(5);
    for (const auto& ns : testgen::regression_structures()) {
        if (!ns.closed) continue;
        CAPTURE(ns.name);
        int n = ns.s.n();
        auto center = ns.s.chart.center();
        for (int k = 0; k < 2; ++k) {
            CycleSpec c;
            c.degree = n - 1;
            c.coeffs.assign(static_cast<std::size_t>(n), 0);
            while (std::all_of(c.coeffs.begin(), c.coeffs.end(), [](long v) { return v == 0; }))
                for (auto& v : c.coeffs) v = g.uniform_int(-2, 2);
            c.at = center;
            // constant fibre (n-1)-form
            DifferentialForm alpha(n);
            for (int m = 1; m <= n; ++m) {
                unsigned mask = x_mask(n) & ~(1u << dx_slot(m));
                alpha.add(mask, ComplexExpr(ScalarExpr(g.rational())));
            }
            for (auto order : {PairingOrder::Forward, PairingOrder::Reversed}) {
                DualityOptions o;
                o.order = order;
                Report r = duality_identities(ns.s, c, alpha, o);
                for (const auto& ck : r.checks()) { CAPTURE(ck.name); CAPTURE(ck.value); CAPTURE(static_cast<int>(order)); CHECK(ck.pass); }
            }
        }
    }
}

TEST_CASE("pairing order only flips signs") {
    for (int n = 1; n <= 3; ++n)
        for (int i = 1; i <= n; ++i) {
            auto a = cycle_to_tangent(n, dual_basis_cycle(n, i, PairingOrder::Forward), PairingOrder::Forward);
            auto b = cycle_to_tangent(n, dual_basis_cycle(n, i, PairingOrder::Forward), PairingOrder::Reversed);
            for (int j = 0; j < n; ++j) {
                CHECK(a[j] == (j == i - 1 ? 1.0 : 0.0));
                CHECK(b[j] == (n % 2 ? a[j] : -a[j]));
            }
        }
}

TEST_CASE("symmetric class examples") {
    auto sym = tensor({{"y1", "y2"}, {"y2", "3"}});
    auto t = symmetric_class_test(sym);
    CHECK(t.symmetric);
    CHECK(t.wedge_minus_omega.is_zero());
    auto fixed = symmetrize_class(sym);
    CHECK(fixed.result.a == sym.a);

    auto c = tensor({{"0", "1"}, {"0", "0"}});
    auto out = symmetrize_class(c);
    CHECK(out.potential[1] == ex("-y1"));
    for (const auto& row : out.result.a)
        for (const auto& e : row) CHECK(e.is_zero());

    auto a = tensor({{"0", "y1"}, {"0", "0"}});
    auto ta = symmetric_class_test(a);
    CHECK_FALSE(ta.symmetric);
    CHECK(ta.defect[0][1] == ex("-y1"));
    CHECK(ta.defect[1][0] == ex("y1"));
    CHECK(ta.wedge_minus_omega == DifferentialForm::term(2, {dy_slot(1), dy_slot(2)}, ComplexExpr(ex("y1"))));
    CHECK(wedge_oracle(a) == ta.wedge_minus_omega);
    CHECK(code_of([] { symmetric_class_test(tensor({{"x1", "0"}, {"0", "0"}})); }) == Errc::DependsOnFibre);
}

TEST_CASE("symmetrize random tensors") {
    testgen::Gen g(23);
    for (int trial = 0; trial < 30; ++trial) {
        int n = g.uniform_int(2, 3);
        // symmetric part plus the derivative of a potential keeps the defect closed for n = 3
        SymTensorField a;
        a.a = testgen::zeros(n);
        std::vector<ScalarExpr> beta;
        for (int i = 0; i < n; ++i) beta.push_back(g.poly_y(n));
        for (std::size_t i = 0; i < a.a.size(); ++i)
            for (std::size_t j = i; j < a.a.size(); ++j) a.a[i][j] = a.a[j][i] = g.coin() ? g.poly_y(n) : ScalarExpr();
        if (g.coin(0.8))
            for (std::size_t i = 0; i < a.a.size(); ++i)
                for (std::size_t j = 0; j < a.a.size(); ++j) a.a[i][j] += beta[j].diff(yvar(static_cast<int>(i)));
        CAPTURE(trial);
        auto wo = wedge_oracle(a);
        CHECK(wo == symmetric_class_test(a).wedge_minus_omega);
        auto out = symmetrize_class(a);
        auto t = symmetric_class_test(out.result);
        CHECK(t.symmetric);
        // the result differs from alpha by a derivative, so its class is unchanged
        CHECK(symmetrize_class(out.result).result.a == out.result.a);
        CHECK(symmetric_class_test(a).symmetric == (out.result.a == a.a));
    }
    auto bad = tensor({{"0", "y3", "0"}, {"0", "0", "0"}, {"0", "0", "0"}});
    CHECK(code_of([&] { symmetrize_class(bad); }) == Errc::NotClosed);
}

TEST_CASE("hitchin examples") {
    Chart u2 = Chart::unit(2);
    auto flat = hitchin({u2, ex("(y1^2 + y2^2)/2")});
    CHECK(flat.beta == beta_of({{"0|1", "0"}, {"0", "0|1"}}));
    auto r = hitchin_report({u2, ex("(y1^2 + y2^2)/2 + y1*y2/3")});
    CHECK(r.passed());
    CHECK(r.at("det_hessian_variation").value < 1e-12);

    auto cubic = hitchin_report({u2, ex("(y1^2 + y2^2)/2 + y1^3/10")});
    CHECK(cubic.at("d_omega").value > 1e-3);
    CHECK_FALSE(cubic.at("d_omega").pass);
    CHECK(cubic.at("integrability").value < 1e-12);
    CHECK(cubic.at("criterion_agreement").pass);

    CHECK(code_of([&] { hitchin({u2, ex("(y1^2 - y2^2)/2")}); }) == Errc::Positivity);
    CHECK(code_of([&] { hitchin({u2, ex("y1^2 + x1")}); }) == Errc::DependsOnFibre);
}

TEST_CASE("criterion agreement over random potentials") {
    testgen::Gen g(31);
    Chart u2 = Chart::unit(2);
    for (int trial = 0; trial < 10; ++trial) {
        double t = g.uniform(-0.8, 0.8);
        ScalarExpr phi = ex("(y1^2 + y2^2)/2") + ScalarExpr::from_double(t) * ex("y1*y2");
        if (g.coin()) phi += ScalarExpr::from_double(g.uniform(0.01, 0.03)) * ex("y1^3");
        Report r = hitchin_report({u2, phi}, std::nullopt, {SampleGrid{4, 4}});
        CHECK(r.at("criterion_agreement").pass);
    }
}

TEST_CASE("twisted hitchin equals translation") {
    Chart u2 = Chart::unit(2);
    HitchinPotential p{u2, ex("(y1^2 + y2^2)/2 + y1*y2/4")};
    ScalarExpr F = ex("y1^2*y2/3 + y2^3/7 - y1");
    auto twist = tensor({{"0", "0"}, {"0", "0"}});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) twist.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = F.diff(yvar(i)).diff(yvar(j));
    BetaStructure twisted = hitchin(p, twist);
    BetaStructure moved = translate_by_section(hitchin(p), {F.diff(yvar(0)), F.diff(yvar(1))});
    std::vector<ComplexExpr> diff;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) diff.push_back(twisted.beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                                   moved.beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    CHECK(sup_norm(diff, u2).value < 1e-10);
    CHECK(closedness_residuals(twisted).at("d_omega").pass);
    CHECK(code_of([&] { hitchin(p, tensor({{"0", "y1"}, {"0", "0"}})); }) == Errc::Incompatible);
}

TEST_CASE("dual structure") {
    auto s = BetaStructure::make(Chart::unit(2), beta_of({{"0|2", "0"}, {"0", "0|5"}}));
    BasePoint y{{0, 0, 0}};
    CHECK(dual_fibre_volume(s, y) == doctest::Approx(std::sqrt(10.0)));
    Report r = dual_structure_check(s);
    CHECK(r.passed());
    CHECK(r.at("volume_reciprocity").value < 1e-10);

    auto flat = BetaStructure::make(Chart::unit(2), beta_of({{"0|1", "0"}, {"0", "0|1"}}));
    CHECK(dual_structure_check(flat).at("dual_h_n").value < 1e-14);

    for (const auto& ns : testgen::regression_structures()) {
        if (!ns.closed || mclean_closed_form(ns.s) == std::nullopt) continue;
        CAPTURE(ns.name);
        Report d = dual_structure_check(ns.s, {SampleGrid{3, 8}});
        CHECK(d.at("dual_h_n").value < 1e-8);
        CHECK(d.at("volume_reciprocity").value < 1e-10);
    }
    auto fibre = BetaStructure::make(Chart::unit(2), beta_of({{"0|1 + sin(2*pi*x1)/3", "0"}, {"0", "0|1"}}));
    CHECK(code_of([&] { dual_structure_check(fibre); }) == Errc::DependsOnFibre);
}

TEST_CASE("yukawa examples") {
    Chart box = Chart::make(2, {{0.0, 2.0}, {-1.0, 0.5}});
    double area = 3.0;
    YukawaFamily f{box, beta_of({{"b1|1", "0"}, {"0", "b2|1"}})};
    auto y = yukawa(f);
    CHECK(std::fabs(y.quadrature) == doctest::Approx(area));
    REQUIRE(y.closed_form);
    CHECK(*y.closed_form == doctest::Approx(y.quadrature));

    YukawaFamily zero{box, beta_of({{"0|1", "0"}, {"0", "0|1"}})};
    CHECK(yukawa(zero).quadrature == 0.0);

    YukawaFamily bad{box, beta_of({{"b1^2|1", "0"}, {"0", "b2|1"}})};
    CHECK(code_of([&] { yukawa(bad); }) == Errc::NonAffineFamily);
    YukawaFamily bad_im{box, beta_of({{"b1|1 + b2", "0"}, {"0", "b2|1"}})};
    CHECK(code_of([&] { yukawa(bad_im); }) == Errc::NonAffineFamily);
}

TEST_CASE("yukawa n3 closed form and multilinearity") {
    testgen::Gen g(41);
    Chart u3 = Chart::unit(3);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<std::vector<std::string>> rows(3, std::vector<std::string>(3));
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                std::string e;
                for (int k = 1; k <= 3; ++k) e += "+ (" + g.rational(3, 3).get_str() + ")*b" + std::to_string(k);
                std::string im = i == j ? "2" : "1/3";
                rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = "0" + e + "|" + im;
                rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = "0" + e + "|" + im;
            }
        YukawaFamily f{u3, beta_of(rows)};
        auto base = yukawa(f, {}, Quadrature{4, 2});
        REQUIRE(base.closed_form);
        CHECK(std::fabs(base.quadrature - *base.closed_form) <= 1e-8 * std::max(1.0, std::fabs(*base.closed_form)));
        double lambda = g.uniform(0.5, 2.0);
        std::vector<std::vector<double>> dirs = {{lambda, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        auto scaled = yukawa(f, dirs, Quadrature{4, 2});
        CHECK(scaled.quadrature == doctest::Approx(lambda * base.quadrature).epsilon(1e-10));
        std::vector<std::vector<double>> mix = {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}};
        std::vector<std::vector<double>> d2 = {{0, 1, 0}, {0, 1, 0}, {0, 0, 1}};
        double sum = yukawa(f, {}, Quadrature{4, 2}).quadrature + yukawa(f, d2, Quadrature{4, 2}).quadrature;
        CHECK(yukawa(f, mix, Quadrature{4, 2}).quadrature == doctest::Approx(sum).epsilon(1e-10));
    }
}

}  // TEST_SUITE
