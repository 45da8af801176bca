#include "doctest.h"
#include "support/gen.hpp"

#include "syzlab/error.hpp"
#include "syzlab/sheaf.hpp"

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

IntMatrix elementary(int m, int i, int j, long v) {
    IntMatrix e = IntMatrix::identity(m);
    e(i, j) = v;
    return e;
}

// Random element of GL(m, Z) as a word in elementary matrices and sign flips.
IntMatrix random_unimodular(testgen::Gen& g, int m, int length = 4) {
    IntMatrix a = IntMatrix::identity(m);
    for (int s = 0; s < length; ++s) {
        int i = g.uniform_int(0, m - 1), j = g.uniform_int(0, m - 1);
        if (i == j) {
            if (g.coin(0.2)) a = elementary(m, i, i, -1) * a;
            continue;
        }
        a = elementary(m, i, j, g.uniform_int(-2, 2)) * a;
    }
    return a;
}

// Random tuple with forced relation: a few conjugates of a unipotent or finite-order
// matrix, closed off by the inverse of their product.
LocalSystem random_system(testgen::Gen& g) {
    LocalSystem L;
    L.m = g.uniform_int(1, 3);
    int k = g.uniform_int(2, 5);
    IntMatrix prod = IntMatrix::identity(L.m);
    for (int i = 0; i + 1 < k; ++i) {
        IntMatrix base = IntMatrix::identity(L.m);
        int kind = g.uniform_int(0, 2);
        if (kind == 1 && L.m >= 2) base = elementary(L.m, 0, 1, g.uniform_int(1, 2));
        if (kind == 2) base = elementary(L.m, 0, 0, -1);
        IntMatrix c = random_unimodular(g, L.m);
        IntMatrix t = c * base * unimodular_inverse(c);
        L.T.push_back(t);
        prod = t * prod;
    }
    L.T.push_back(unimodular_inverse(prod));
    return L;
}

// Independent invariant lattice: kernel of all T_i - I stacked.
int invariant_rank(const LocalSystem& L) {
    IntMatrix stacked(L.m * L.k(), L.m);
    for (int i = 0; i < L.k(); ++i) stacked.set_block(i * L.m, 0, L.T[static_cast<std::size_t>(i)] - IntMatrix::identity(L.m));
    return integer_kernel(stacked).cols();
}

int alternating(const SphereCohomology& h) { return h.h[0].rank - h.h[1].rank + h.h[2].rank; }

}  // namespace

TEST_SUITE("sheaf_leray") {

TEST_CASE("trivial systems") {
    auto h = pushforward_cohomology(trivial_system(1, 3));
    CHECK(h.h[0] == make_group(1, {}));
    CHECK(h.h[1] == make_group(0, {}));
    CHECK(h.h[2] == make_group(1, {}));
    CHECK(euler_characteristic(trivial_system(1, 3)) == 2);
    auto h2 = pushforward_cohomology(trivial_system(2, 1));
    CHECK(h2.h[0].rank == 2);
    CHECK(h2.h[2].rank == 2);
}

TEST_CASE("k3 system") {
    LocalSystem L = k3_local_system();
    CHECK(L.k() == 24);
    L.validate();
    CHECK(euler_characteristic(L) == -20);
    auto h = pushforward_cohomology(L);
    CHECK(h.h[0] == AbelianGroup{});
    CHECK(h.h[1].rank == 20);
    CHECK(h.h[2] == AbelianGroup{});
    E2Table t = e2_k3(L);
    CHECK(t.at(1, 1).rank == 20);
    CHECK(t.at(0, 0) == make_group(1, {}));
    CHECK(t.at(2, 2) == make_group(1, {}));
    CHECK(t.at(1, 0) == AbelianGroup{});
    CHECK(code_of([] { e2_k3(trivial_system(2, 3)); }) == Errc::PatternViolation);
}

TEST_CASE("unipotent pair") {
    LocalSystem L;
    L.m = 2;
    L.T = {unipotent(), unimodular_inverse(unipotent())};
    CHECK(euler_characteristic(L) == 2);
    auto h = pushforward_cohomology(L);
    CHECK(h.h[0].rank == 1);
    CHECK(alternating(h) == 2);
}

TEST_CASE("relation and invertibility") {
    LocalSystem L;
    L.m = 2;
    L.T = {unipotent(), unipotent()};
    CHECK(code_of([&] { L.validate(); }) == Errc::RelationViolated);
    L.T = {IntMatrix::from_rows({{2, 0}, {0, 1}}), IntMatrix::from_rows({{1, 0}, {0, 1}})};
    CHECK(code_of([&] { pushforward_cohomology(L); }) == Errc::NonInvertible);
    CHECK(code_of([] { unimodular_inverse(IntMatrix::from_rows({{2, 1}, {1, 1}, {0, 1}})); }) == Errc::NonInvertible);
}

TEST_CASE("fox restriction is a cochain map") {
    testgen::Gen g(2);
    for (int trial = 0; trial < 10; ++trial) {
        LocalSystem L = random_system(g);
        // restriction of a coboundary on the punctured sphere is the coboundary on the last annulus
        IntMatrix dP(L.m * (L.k() - 1), L.m);
        for (int i = 0; i + 1 < L.k(); ++i) dP.set_block(i * L.m, 0, L.T[static_cast<std::size_t>(i)] - IntMatrix::identity(L.m));
        CHECK(last_loop_restriction(L) * dP == L.T.back() - IntMatrix::identity(L.m));
        TotalComplex c = mayer_vietoris_complex(L);
        CHECK((c.d[1] * c.d[0]).is_zero());
    }
}

TEST_CASE("random systems") {
    testgen::Gen g(7);
    for (int trial = 0; trial < 25; ++trial) {
        LocalSystem L = random_system(g);
        CAPTURE(trial);
        auto h = pushforward_cohomology(L);
        CHECK(alternating(h) == euler_characteristic(L));
        CHECK(h.h[0].rank == invariant_rank(L));
        CHECK(h.h[0].torsion.empty());
        // conjugation invariance
        IntMatrix c = random_unimodular(g, L.m, 6);
        IntMatrix ci = unimodular_inverse(c);
        LocalSystem conj = L;
        for (auto& t : conj.T) t = c * t * ci;
        auto hc = pushforward_cohomology(conj);
        for (int k = 0; k < 3; ++k) CHECK(hc.h[static_cast<std::size_t>(k)] == h.h[static_cast<std::size_t>(k)]);
    }
}

TEST_CASE("n3 tables") {
    E2Table free = e2_n3(3, 3, {});
    CHECK(free.at(1, 1).rank == 3);
    CHECK(free.at(2, 1).rank == 3);
    CHECK(duality_checks(free, dual_table(free)).passed());
    CHECK(free.str().find("Z^3") != std::string::npos);

    std::map<std::string, std::vector<Z>> tors = {{"1,1", {2}}, {"3,2", {2}}, {"2,1", {3}}, {"2,2", {3}}};
    E2Table t = e2_n3(2, 5, tors);
    E2Table d = dual_table(t);
    CHECK(d.at(1, 1).rank == 5);
    CHECK(duality_checks(t, d).passed());

    tors["2,2"] = {9};
    E2Table bad = e2_n3(2, 5, tors);
    Report r = duality_checks(bad, dual_table(bad));
    CHECK_FALSE(r.at("T21_T22").pass);
    CHECK_FALSE(r.at("h3_h4_cardinality").pass);

    // a dual that does not follow the cross rule
    E2Table wrong = dual_table(t);
    wrong.at(2, 0) = make_group(0, {5});
    wrong.at(2, 3) = make_group(0, {5});
    CHECK_FALSE(duality_checks(t, wrong).at("cross_table").pass);

    E2Table broken = free;
    broken.at(0, 2) = make_group(1, {});
    CHECK(code_of([&] { validate_e2_n3(broken); }) == Errc::PatternViolation);
    broken = free;
    broken.at(2, 3) = make_group(1, {});
    CHECK(code_of([&] { validate_e2_n3(broken); }) == Errc::PatternViolation);
    CHECK(code_of([] { e2_n3(1, 1, {{"0,1", {2}}}); }) == Errc::PatternViolation);
}

TEST_CASE("checks pass on genuine pairs") {
    testgen::Gen g(13);
    for (int trial = 0; trial < 20; ++trial) {
        auto pick = [&] { return g.coin(0.5) ? std::vector<Z>{} : std::vector<Z>{Z(g.uniform_int(2, 6))}; };
        std::vector<Z> a = pick(), b = pick(), c = pick(), e = pick();
        E2Table t = e2_n3(g.uniform_int(0, 4), g.uniform_int(0, 4),
                          {{"1,1", a}, {"3,2", a}, {"1,2", b}, {"3,1", b}, {"2,1", c}, {"2,2", c}, {"2,0", e}, {"2,3", e}});
        CHECK(duality_checks(t, dual_table(t)).passed());
    }
}

}  // TEST_SUITE
