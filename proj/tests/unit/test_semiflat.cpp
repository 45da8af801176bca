#include "doctest.h"
#include "support/gen.hpp"
#include "support/structures.hpp"

#include "syzlab/error.hpp"
#include "syzlab/semiflat.hpp"

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

double sup(const std::vector<ScalarExpr>& v, const Chart& c) { return sup_norm(v, c).value; }

}  // namespace

TEST_SUITE("semiflat") {

TEST_CASE("derived quantities") {
    auto s = BetaStructure::make(Chart::unit(2), beta_of({{"0|2", "0"}, {"0", "0|2"}}));
    CHECK(s.V == ScalarExpr(Q(1, 2)));
    CHECK(s.V * s.V * s.det_g_inv == ScalarExpr(1));
    CHECK(s.g[0][0] == ScalarExpr(Q(1, 2)));
    CHECK(s.g[0][1].is_zero());

    auto t = BetaStructure::make(Chart::unit(2), beta_of({{"0|2", "0|1"}, {"0|1", "0|3"}}));
    // g g^-1 = I at sample points
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            ScalarExpr e = t.g[i][0] * t.g_inv[0][j] + t.g[i][1] * t.g_inv[1][j];
            CHECK(e == ScalarExpr(i == j ? 1 : 0));
        }
    CHECK(code_of([] { BetaStructure::make(Chart::unit(1), beta_of({{"x1|1"}})); }) == Errc::NonPeriodic);
    CHECK(code_of([] { BetaStructure::make(Chart::unit(2), beta_of({{"0|1"}})); }) == Errc::ChartMismatch);
}

TEST_CASE("build_omega examples") {
    int n = 2;
    auto flat = BetaStructure::make(Chart::unit(2), beta_of({{"0|1", "0"}, {"0", "0|1"}}));
    BigradedElement om = build_omega(flat);
    CHECK(om.coef(0, 0) == ComplexExpr(1));
    DifferentialForm expect = wedge(DifferentialForm::dx(n, 1) + ComplexExpr::i() * DifferentialForm::dy(n, 1),
                                    DifferentialForm::dx(n, 2) + ComplexExpr::i() * DifferentialForm::dy(n, 2));
    CHECK(to_form(om) == expect);

    auto two = BetaStructure::make(Chart::unit(2), beta_of({{"0|2", "0"}, {"0", "0|2"}}));
    CHECK(build_omega(two).coef(0, 0) == ComplexExpr(ScalarExpr(Q(1, 2))));
    CHECK(pointwise_checks(two).at("volume_normalization").value == doctest::Approx(0.0));

    auto asym = BetaStructure::make(Chart::unit(2), beta_of({{"0|1", "1"}, {"0", "0|1"}}));
    CHECK(code_of([&] { build_omega(asym); }) == Errc::Incompatible);

    auto neg = BetaStructure::make(Chart::unit(1), beta_of({{"0|y1"}}));
    CHECK(code_of([&] { build_omega(neg); }) == Errc::Positivity);
    try {
        build_omega(neg);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("y1=") != std::string::npos);
    }

    // V exp(beta) equals V times the wedge expansion
    testgen::Gen g(11);
    for (int trial = 0; trial < 3; ++trial) {
        auto s = testgen::regression_structures()[static_cast<std::size_t>(4 + trial)].s;
        DifferentialForm w = ComplexExpr(s.V) * testgen::wedge_expansion(s.beta);
        CHECK(testgen::max_deviation(to_form(build_omega(s)), w, testgen::random_points(g, s.chart, 20)) < 1e-12);
    }
}

TEST_CASE("pointwise_checks examples") {
    auto flat = BetaStructure::make(Chart::unit(2), beta_of({{"0|1", "0"}, {"0", "0|1"}}));
    Report r = pointwise_checks(flat);
    CHECK(r.passed());
    CHECK(r.at("symmetry").value == 0.0);
    CHECK(r.at("min_eigenvalue").value == doctest::Approx(1.0));

    auto asym = BetaStructure::make(Chart::unit(2), beta_of({{"0|1", "y1"}, {"0", "0|1"}}));
    Report a = pointwise_checks(asym);
    CHECK(a.at("symmetry").value == doctest::Approx(1.0));
    CHECK_FALSE(a.at("symmetry").pass);

    auto var = BetaStructure::make(Chart::unit(2), beta_of({{"0|1 + y1^2", "0"}, {"0", "0|1"}}));
    Report v = pointwise_checks(var, {}, ScalarExpr(1));
    CHECK(v.at("volume_normalization").value == doctest::Approx(1.0));
    CHECK_FALSE(v.passed());
    CHECK(pointwise_checks(var).at("volume_normalization").value < 1e-14);
}

TEST_CASE("integrability residual examples") {
    auto constant = BetaStructure::make(Chart::unit(2), beta_of({{"1|2", "1/2|1"}, {"1/2|1", "0|2"}}));
    CHECK(integrability_residual(constant).is_zero());

    auto s = BetaStructure::make(Chart::unit(2), beta_of({{"0|1 + y2^2", "0"}, {"0", "0|1"}}));
    BigradedElement r = integrability_residual(s);
    // -2i y2 dy_1 ^ dy_2 (x) d/dx_1, which is +2i y2 dy_2 ^ dy_1 (x) d/dx_1
    CHECK(r.coef(index_set({1, 2}), index_set({1})) == ComplexExpr(ScalarExpr(), -ex("2*y2")));
    CHECK(BigradedElement::term(2, {2, 1}, {1}, ComplexExpr(ScalarExpr(), ex("2*y2"))) == r);
    CHECK(residual_norm(r, s.chart) == doctest::Approx(2.0));

    auto hess = testgen::hessian_structure(Chart::unit(2), "(y1^2 + y2^2)/2 + y1^3/10 + y1*y2^2/7");
    CHECK(residual_norm(integrability_residual(hess), hess.chart) < 1e-14);
}

TEST_CASE("integrability agrees with the componentwise formula") {
    testgen::Gen g(5);
    for (int n = 1; n <= 3; ++n)
        for (int trial = 0; trial < 6; ++trial) {
            Matrix<ComplexExpr> m(static_cast<std::size_t>(n), std::vector<ComplexExpr>(static_cast<std::size_t>(n)));
            for (auto& row : m)
                for (auto& e : row) e = g.complex_field(n);
            auto s = BetaStructure::make(Chart::unit(n), m, false);
            auto pts = testgen::random_points(g, s.chart, 30);
            CHECK(testgen::max_deviation(integrability_residual(s), integrability_indexed(s), pts) < 1e-10);
        }
}

TEST_CASE("closedness examples") {
    auto c1 = BetaStructure::make(Chart::unit(1), beta_of({{"sin(y1) + y1^3|3/2"}}));
    CHECK(closedness_residuals(c1).at("d_omega").value < 1e-14);
    auto c2 = BetaStructure::make(Chart::unit(1), beta_of({{"y1|1 + y1^2"}}));
    Report r2 = closedness_residuals(c2);
    CHECK(r2.at("d_omega").value > 0.1);
    CHECK(r2.at("closedness_equivalence").pass);
    auto flat = BetaStructure::make(Chart::unit(2), beta_of({{"0|1", "0"}, {"0", "0|1"}}));
    CHECK(closedness_residuals(flat).passed());
}

TEST_CASE("closedness equivalence on the regression suite") {
    auto suite = testgen::regression_structures();
    CHECK(suite.size() >= 12);
    for (const auto& [name, s, closed] : suite) {
        CAPTURE(name);
        Report r = closedness_residuals(s);
        CHECK(r.at("closedness_equivalence").pass);
        CHECK((r.at("d_omega").value < 1e-8) == closed);
        Report st = structure_equations(s);
        CHECK(st.at("matches_closedness").pass);
    }
}

TEST_CASE("real and imaginary parts reproduce the structure equations") {
    testgen::Gen g(3);
    for (const auto& [name, s, closed] : testgen::regression_structures()) {
        CAPTURE(name);
        StructureTerms t = structure_terms(s);
        BigradedElement integ = integrability_residual(s);
        BigradedElement f2 = f2_residual(s);
        auto pts = testgen::random_points(g, s.chart, 40);
        CHECK(testgen::max_deviation(integ.re(), t.curvature, pts) < 1e-10);
        CHECK(testgen::max_deviation(integ.im(), t.metric_parallel, pts) < 1e-10);
        BigradedElement vp(s.n()), fh(s.n());
        for (int j = 0; j < s.n(); ++j) {
            vp.add(1u << j, 0, ComplexExpr(t.volume_parallel[static_cast<std::size_t>(j)]));
            fh.add(1u << j, 0, ComplexExpr(-t.fibre_harmonic[static_cast<std::size_t>(j)]));
        }
        CHECK(testgen::max_deviation(f2.re(), vp, pts) < 1e-10);
        CHECK(testgen::max_deviation(f2.im(), fh, pts) < 1e-10);
    }
}

TEST_CASE("structure equation examples") {
    auto flat = BetaStructure::make(Chart::unit(2), beta_of({{"0|1", "0"}, {"0", "0|1"}}));
    CHECK(structure_equations(flat).passed());

    auto curved = BetaStructure::make(Chart::unit(2), beta_of({{"y2|1", "0"}, {"0", "0|1"}}));
    Report r = structure_equations(curved);
    CHECK(r.at("curvature").value == doctest::Approx(1.0));
    CHECK(r.at("metric_parallel").value == 0.0);
    CHECK(r.at("fibre_harmonic").value == 0.0);
    CHECK(r.at("volume_parallel").value == 0.0);
    CHECK(r.at("matches_closedness").pass);

    double prev = 0.0;
    for (const char* eps : {"0", "1/100", "1/20"}) {
        auto s = testgen::hessian_structure(Chart::unit(2), std::string("(y1^2 + y2^2)/2 + ") + eps + "*y1^3");
        double v = structure_equations(s).at("volume_parallel").value;
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(prev > 0.1);
}

TEST_CASE("horizontal frame annihilates the real parts of theta") {
    for (const auto& [name, s, closed] : testgen::regression_structures()) {
        CAPTURE(name);
        CHECK(horizontal_frame_defect(s) < 1e-12);
    }
}

TEST_CASE("translation by sections") {
    auto base = BetaStructure::make(Chart::unit(2), beta_of({{"0|2", "0|1"}, {"0|1", "0|3"}}));
    auto same = translate_by_section(base, {ScalarExpr(), ScalarExpr()});
    CHECK(same.beta == base.beta);

    // d sigma_i / d y_j = b_ij with b = [[1, 1/2], [1/2, -1]]
    auto moved = translate_by_section(base, {ex("y1 + y2/2"), ex("y1/2 - y2")});
    CHECK(moved.beta == beta_of({{"1|2", "1/2|1"}, {"1/2|1", "-1|3"}}));

    DifferentialForm defect = omega_pullback_defect(2, {ex("y2"), ScalarExpr()});
    CHECK(defect == base_exterior_derivative(2, {ex("y2"), ScalarExpr()}));
    CHECK(defect == DifferentialForm::term(2, {dy_slot(1), dy_slot(2)}, ComplexExpr(-1)));

    // closed sigma = dF preserves omega and closedness
    ScalarExpr F = ex("y1^2*y2/2 + sin(y2)");
    std::vector<ScalarExpr> dF{F.diff(yvar(0)), F.diff(yvar(1))};
    CHECK(omega_pullback_defect(2, dF).is_zero());
    auto hitchin = testgen::hessian_structure(Chart::make(2, {{-1.0, 1.0}, {1.0, 2.0}}), "y1^2/(2*y2) + y2^3/6");
    CHECK(closedness_residuals(translate_by_section(hitchin, dF)).at("d_omega").value < 1e-9);

    // x-dependent entries are shifted inside the periodic argument
    auto wavy = BetaStructure::make(Chart::unit(1), beta_of({{"sin(2*pi*x1)|1"}}));
    auto sh = translate_by_section(wavy, {ex("y1")});
    CHECK(sh.beta[0][0].re == ex("sin(2*pi*x1 + 2*pi*y1) + 1"));

    CHECK(code_of([&] { translate_by_section(base, {ex("x1"), ScalarExpr()}); }) == Errc::DependsOnFibre);
}

TEST_CASE("omega pullback under random closed sections") {
    testgen::Gen g(17);
    for (int n = 1; n <= 3; ++n)
        for (int trial = 0; trial < 5; ++trial) {
            ScalarExpr F = g.poly_y(n, 3, 3);
            std::vector<ScalarExpr> dF;
            for (int i = 0; i < n; ++i) dF.push_back(F.diff(yvar(i)));
            CHECK(residual_norm(omega_pullback_defect(n, dF), Chart::unit(n)) < 1e-12);
        }
}

TEST_CASE("action coordinates") {
    Chart c = Chart::make(2, {{0.0, 2.0}, {1.0, 2.0}});
    auto id = action_coordinates({{ScalarExpr(1), ScalarExpr()}, {ScalarExpr(), ScalarExpr(1)}}, c);
    CHECK(id.u[0] == ex("y1 - 1"));
    CHECK(id.u[1] == ex("y2 - 3/2"));

    auto prod = action_coordinates({{ex("y2"), ex("y1")}, {ScalarExpr(), ScalarExpr(1)}}, c);
    CHECK(prod.u[0] == ex("y1*y2 - 3/2"));
    // oracle: du_1 = lambda_1
    CHECK(prod.u[0].diff(yvar(0)) == ex("y2"));
    CHECK(prod.u[0].diff(yvar(1)) == ex("y1"));
    CHECK(prod.min_abs_jacobian == doctest::Approx(1.0));

    CHECK(code_of([&] { action_coordinates({{ex("y2"), ScalarExpr()}, {ScalarExpr(), ScalarExpr(1)}}, c); }) ==
          Errc::NotClosed);
    CHECK(code_of([&] { action_coordinates({{ScalarExpr(1), ScalarExpr()}, {ScalarExpr(1), ScalarExpr()}}, c); }) ==
          Errc::DegenerateJacobian);

    // random exact forms recover their potential up to a constant
    testgen::Gen g(23);
    for (int trial = 0; trial < 5; ++trial) {
        Chart c3 = Chart::unit(3);
        Matrix<ScalarExpr> lam;
        std::vector<ScalarExpr> pots;
        for (int i = 0; i < 3; ++i) {
            ScalarExpr F = ex("y" + std::to_string(i + 1)) + g.poly_y(3, 2, 2) / ScalarExpr(10);
            pots.push_back(F);
            std::vector<ScalarExpr> row;
            for (int k = 0; k < 3; ++k) row.push_back(F.diff(yvar(k)));
            lam.push_back(row);
        }
        try {
            auto ac = action_coordinates(lam, c3);
            for (int i = 0; i < 3; ++i) {
                ScalarExpr d = ac.u[static_cast<std::size_t>(i)] - pots[static_cast<std::size_t>(i)];
                for (int k = 0; k < 3; ++k) CHECK(d.diff(yvar(k)).is_zero());
            }
        } catch (const Error& e) {
            CHECK(e.code() == Errc::DegenerateJacobian);
        }
    }
}

TEST_CASE("reglue_check") {
    Chart c = Chart::unit(2);
    ScalarExpr F = ex("y1*y2^2 + cos(y1)");
    auto ok = reglue_check({F.diff(yvar(0)), F.diff(yvar(1))}, c);
    CHECK(ok.valid);
    CHECK(ok.transition[0] == ex("x1") + F.diff(yvar(0)));
    CHECK_FALSE(reglue_check({ex("y2"), ScalarExpr()}, c).valid);
    CHECK(reglue_check({ex("y2"), ScalarExpr()}, c).closedness_defect == doctest::Approx(1.0));
    CHECK(reglue_check({ScalarExpr(Q(1, 3)), ScalarExpr(2)}, c).valid);
}

TEST_CASE("flatness probe") {
    auto constant = BetaStructure::make(Chart::unit(2), beta_of({{"1|2", "1/2|1"}, {"1/2|1", "0|2"}}));
    Report a = flatness_probe(constant);
    CHECK(a.passed());
    CHECK(a.at("hypothesis").value == 1.0);

    auto wavy = BetaStructure::make(Chart::unit(2), beta_of({{"0|1 + cos(2*pi*x1)/3", "0"}, {"0", "0|1"}}));
    Report b = flatness_probe(wavy);
    CHECK(b.at("hypothesis").value == 0.0);
    CHECK(b.at("d_omega").value > 1e-3);
    CHECK(b.at("g_fibre_gradient").value > 1e-3);
    CHECK(b.at("conclusion").pass);

    auto hitchin = testgen::hessian_structure(Chart::make(2, {{-1.0, 1.0}, {1.0, 2.0}}), "y1^2/(2*y2) + y2^3/6");
    Report c = flatness_probe(hitchin);
    CHECK(c.at("hypothesis").value == 1.0);
    CHECK(c.passed());
}

}  // TEST_SUITE
