#include "doctest.h"
#include "support/k3gen.hpp"

#include "syzlab/error.hpp"
#include "syzlab/k3.hpp"

#include <cmath>
#include <functional>

using namespace syzlab;

namespace {

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Internal;
}

QVector u6(int i) { return unit_vector(6, i); }
// U^3 basis indices
constexpr int e1 = 0, f1 = 1, e2 = 2, f2 = 3, e3 = 4, f3 = 5;

bool even(const GramLattice& L) {
    for (int i = 0; i < L.rank(); ++i)
        if (L.gram(i, i) % 2 != 0) return false;
    return true;
}

void require_all(const Report& r) {
    for (const auto& c : r.checks()) {
        CAPTURE(c.name);
        CAPTURE(c.note);
        CHECK(c.pass);
    }
}

}  // namespace

TEST_SUITE("k3_mirror") {
    TEST_CASE("lattices") {
        GramLattice k3 = k3_lattice();
        CHECK(k3.rank() == 22);
        CHECK(determinant(k3.gram) == -1);
        CHECK(even(k3));
        CHECK_NOTHROW(k3.validate());
        CHECK(determinant(e8_negative().gram) == 1);
        CHECK(lattice_preset("U3").rank() == 6);
        CHECK(code_of([] { lattice_preset("U0"); }) == Errc::Schema);
        GramLattice bad = hyperbolic_lattice(1);
        bad.gram(0, 1) = 2;
        CHECK(code_of([&] { bad.validate(); }) == Errc::Schema);
    }

    TEST_CASE("orthogonal complement of the fibre class") {
        ZVector E(22);
        E[0] = 1;
        QuotientLattice q = sublattice_quotient(k3_lattice(), E);
        CHECK(q.lattice.rank() == 20);
        CHECK(abs(determinant(q.lattice.gram)) == 1);
        CHECK(even(q.lattice));

        QuotientLattice u = sublattice_quotient(hyperbolic_lattice(2), {1, 0, 0, 0});
        REQUIRE(u.lattice.rank() == 2);
        // even unimodular of rank 2 and determinant -1: the hyperbolic plane
        CHECK(determinant(u.lattice.gram) == -1);
        CHECK(even(u.lattice));
        IntMatrix e = IntMatrix::from_rows({{1, 0, 0, 0}});
        CHECK((e * hyperbolic_lattice(2).gram * u.basis).is_zero());

        CHECK(code_of([] { sublattice_quotient(hyperbolic_lattice(2), {2, 0, 0, 0}); }) == Errc::NotPrimitive);
        CHECK(code_of([] { sublattice_quotient(hyperbolic_lattice(2), {1, 1, 0, 0}); }) == Errc::NotIsotropic);
    }

    TEST_CASE("quotient of random isotropic classes") {
        testgen::Gen g(71);
        GramLattice L = hyperbolic_lattice(3);
        for (int trial = 0; trial < 15; ++trial) {
            QVector E = u6(e1);
            for (int s = 0; s < 2; ++s) {
                QVector u = u6(g.uniform_int(0, 1) ? e2 : f3);
                QVector v = testgen::orthogonal_to(g, L, u, true);
                E = testgen::eichler(L, u, v, E);
            }
            ZVector Ez;
            for (const auto& x : E) Ez.push_back(x.get_num());
            CAPTURE(trial);
            if (L.dot(E, E) != 0) continue;
            QuotientLattice q = sublattice_quotient(L, Ez);
            CHECK(q.lattice.rank() == 4);
            CHECK(determinant(q.lattice.gram) == 1);
            CHECK(even(q.lattice));
        }
    }

    TEST_CASE("phase alignment") {
        K3MirrorInput toy = k3_toy_input();
        AlignedInput same = validate_and_align(toy);
        CHECK(same.input.re_omega == toy.re_omega);
        CHECK(same.input.im_omega == toy.im_omega);
        CHECK(same.volume == 1);

        // Re(Omega).E = 0, Im(Omega).E = 1
        K3MirrorInput in = toy;
        in.re_omega = toy.im_omega;
        in.im_omega = toy.re_omega;
        AlignedInput a = validate_and_align(in);
        CHECK(a.theta == doctest::Approx(-M_PI / 2));
        CHECK(a.input.re_omega == in.im_omega);
        CHECK(a.volume == 1);

        K3MirrorInput bad = toy;
        bad.sigma0 = {0, 1, 0, 0, 0, 0};
        try {
            validate_and_align(bad);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::InvariantViolation);
            CHECK(std::string(e.what()).find("section self-intersection") != std::string::npos);
        }

        K3MirrorInput null = toy;
        null.re_omega = null.im_omega;
        CHECK(code_of([&] { validate_and_align(null); }) == Errc::NullFibreClass);

        // E = e1 + e2 meets Re and Im with (1, 1): rotation angle pi/4
        K3MirrorInput irr = toy;
        irr.E = {1, 0, 1, 0, 0, 0};
        irr.omega = u6(e3) + u6(f3);
        irr.im_omega = u6(e2) + u6(f2);
        CHECK(code_of([&] { validate_and_align(irr); }) == Errc::IrrationalPhase);

        K3MirrorInput np = toy;
        np.E = {2, 0, 0, 0, 0, 0};
        CHECK(code_of([&] { validate_and_align(np); }) == Errc::NotPrimitive);
        K3MirrorInput ni = toy;
        ni.omega = u6(e2) + 2 * u6(f2);
        CHECK(code_of([&] { validate_and_align(ni); }) == Errc::InvariantViolation);
        K3MirrorInput shape = toy;
        shape.B.pop_back();
        CHECK(code_of([&] { validate_and_align(shape); }) == Errc::Schema);
    }

    TEST_CASE("B-field lift reduction") {
        K3MirrorInput in = k3_toy_input();
        in.B = u6(e1) + u6(e2) - u6(f2);  // B.sigma0 = 1
        AlignedInput a = validate_and_align(in);
        CHECK(in.lattice.dot(a.input.B, to_qvector(in.sigma0)) == 0);
        CHECK(a.input.B == u6(e2) - u6(f2));
        CHECK(code_of([&] { mirror_classes(in); }) == Errc::InvariantViolation);
    }

    TEST_CASE("hyperkahler rotation") {
        HyperkahlerRotation h = hyperkahler_rotate(k3_toy_input());
        require_all(h.checks);
        CHECK(k3_toy_input().lattice.dot(h.kahler_k, u6(e1)) == 1);

        K3MirrorInput un = k3_toy_input();
        std::swap(un.re_omega, un.im_omega);
        CHECK(code_of([&] { hyperkahler_rotate(un); }) == Errc::NotAligned);
        CHECK(code_of([&] { mirror_classes(un); }) == Errc::NotAligned);

        testgen::Gen g(5);
        for (int i = 0; i < 30; ++i) {
            K3MirrorInput x = validate_and_align(testgen::random_u3_input(g)).input;
            HyperkahlerRotation r = hyperkahler_rotate(x);
            require_all(r.checks);
            CHECK(dot(x.lattice, r.omega_k, r.omega_k) == ComplexNumber{});
        }
    }

    TEST_CASE("mirror classes of the toy") {
        K3MirrorInput toy = k3_toy_input();
        MirrorClasses m = mirror_classes(toy);
        require_all(m.checks);
        CHECK(m.omega_n_check.re == u6(e1) + u6(f1));
        CHECK(m.omega_n_check.im == -(u6(e2) + u6(f2)));
        const GramLattice& L = toy.lattice;
        CHECK(L.dot(m.omega_n_check.re, m.omega_n_check.re) == 2);
        CHECK(L.dot(m.omega_n_check.im, m.omega_n_check.im) == 2);
        CHECK(m.volume == 1);
        CHECK(m.dual_volume == 1);
        CHECK(m.omega_check == u6(e3) + u6(f3));
    }

    TEST_CASE("class identities on random inputs") {
        testgen::Gen g(2024);
        int accepted = 0, rejected = 0;
        while (accepted < 100) {
            K3MirrorInput raw = testgen::random_u3_input(g);
            AlignedInput a;
            try {
                a = validate_and_align(raw);
            } catch (const Error&) {
                ++rejected;
                continue;
            }
            ++accepted;
            MirrorClasses m = mirror_classes(a.input);
            CAPTURE(accepted);
            require_all(m.checks);
            CHECK(m.volume * m.dual_volume == 1);
            CHECK(dot(a.input.lattice, m.omega_n_check, to_qvector(a.input.E)) == ComplexNumber{1, 0});
        }
        CHECK(rejected < 20);
    }

    TEST_CASE("scaling the Kahler class") {
        K3MirrorInput base = k3_toy_input();
        const GramLattice& L = base.lattice;
        Q w2 = L.dot(base.omega, base.omega);
        for (Q t : {Q(1, 3), Q(2), Q(7, 2)}) {
            K3MirrorInput s = base;
            s.omega = t * base.omega;
            s.re_omega = t * base.re_omega;
            s.im_omega = t * base.im_omega;
            MirrorClasses m = mirror_classes(s);
            CHECK(m.volume == t);
            CHECK(L.dot(m.re_omega_check, u6(e1)) == 1 / m.volume);
            CHECK(L.dot(m.omega_check, m.omega_check) == t * t * w2 / (m.volume * m.volume));
        }
    }

    TEST_CASE("double mirror") {
        K3MirrorInput toy = k3_toy_input();
        require_all(double_mirror_check(toy));
        K3MirrorInput b = toy;
        b.B = u6(e2) - u6(f2);
        CHECK(b.lattice.dot(b.B, b.B) == -2);
        require_all(double_mirror_check(b));

        testgen::Gen g(99);
        for (int i = 0; i < 100; ++i) {
            CAPTURE(i);
            require_all(double_mirror_check(testgen::random_u3_input(g)));
        }

        QVector x = u6(e1) + 3 * u6(f1) - u6(e2) + Q(1, 2) * u6(f3);
        QVector nx = fibrewise_negation(toy.lattice, toy.E, toy.sigma0, x);
        CHECK(fibrewise_negation(toy.lattice, toy.E, toy.sigma0, nx) == x);
        CHECK(nx == u6(e1) + 3 * u6(f1) + u6(e2) - Q(1, 2) * u6(f3));
    }

    TEST_CASE("declared -2 classes") {
        K3MirrorInput toy = k3_toy_input();
        MirrorClasses m = mirror_classes(toy);
        std::vector<ZVector> declared = {{0, 0, 1, -1, 0, 0}, {0, 0, 1, -1, 1, 0}, {1, 0, 0, 0, 0, 0}};
        CHECK(minus_two_obstructions(toy, m, declared) == std::vector<int>{0});
    }

    TEST_CASE("local forms near a fibre") { require_all(k3_chart_form_check()); }
}
