#include "syzlab/sheaf.hpp"

#include "syzlab/error.hpp"

#include <sstream>

namespace syzlab {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

IntMatrix minus_identity(const IntMatrix& t) { return t - IntMatrix::identity(t.rows()); }

}  // namespace

void LocalSystem::validate() const {
    if (m < 1) throw Error(Errc::Schema, "local system rank must be positive");
    if (T.empty()) throw Error(Errc::Schema, "at least one marked point is required");
    IntMatrix prod = IntMatrix::identity(m);
    for (const auto& t : T) {
        if (t.rows() != m || t.cols() != m) throw Error(Errc::Schema, "monodromy matrices must be m x m");
        Z det = determinant(t);
        if (det != 1 && det != -1) throw Error(Errc::NonInvertible, "monodromy " + t.str() + " is not invertible over Z");
        prod = t * prod;
    }
    if (!(prod == IntMatrix::identity(m)))
        throw Error(Errc::RelationViolated, "T_k ... T_1 = " + prod.str() + " is not the identity");
}

IntMatrix last_loop_restriction(const LocalSystem& L) {
    int m = L.m, k = L.k();
    IntMatrix out(m, m * (k - 1));
    // gamma_k = (gamma_{k-1} ... gamma_1)^{-1}; with c(gh) = c(g) + g c(h),
    // c(gamma_{k-1} ... gamma_1) = sum_j T_{k-1} ... T_{j+1} c_j and c(g^{-1}) = -g^{-1} c(g).
    IntMatrix tail = IntMatrix::identity(m);  // T_{k-1} ... T_{j+1}
    for (int j = k - 2; j >= 0; --j) {
        out.set_block(0, j * m, -(L.T[sz(k - 1)] * tail));
        tail = tail * L.T[sz(j)];
    }
    return out;
}

TotalComplex mayer_vietoris_complex(const LocalSystem& L) {
    L.validate();
    int m = L.m, k = L.k();
    std::vector<IntMatrix> K;
    int kdim = 0;
    for (const auto& t : L.T) {
        K.push_back(integer_kernel(minus_identity(t)));
        kdim += K.back().cols();
    }
    // Tot^0 = (+)_i ker(T_i - I) (+) M_P
    // Tot^1 = (+)_i M_{A_i} (+) M_P^{k-1}
    // Tot^2 = (+)_i M_{A_i}
    TotalComplex c;
    c.dims = {kdim + m, k * m + (k - 1) * m, k * m};
    IntMatrix d0(c.dims[1], c.dims[0]);
    int col = 0;
    for (int i = 0; i < k; ++i) {
        // restriction from the disc, with the Cech sign
        d0.set_block(i * m, col, -K[sz(i)]);
        col += K[sz(i)].cols();
    }
    for (int i = 0; i < k; ++i) d0.set_block(i * m, kdim, IntMatrix::identity(m));
    for (int i = 0; i + 1 < k; ++i) d0.set_block(k * m + i * m, kdim, minus_identity(L.T[sz(i)]));

    IntMatrix d1(c.dims[2], c.dims[1]);
    for (int i = 0; i < k; ++i) d1.set_block(i * m, i * m, -minus_identity(L.T[sz(i)]));
    for (int i = 0; i + 1 < k; ++i) d1.set_block(i * m, k * m + i * m, IntMatrix::identity(m));
    if (k > 1) d1.set_block((k - 1) * m, k * m, last_loop_restriction(L));
    c.d = {d0, d1};
    return c;
}

SphereCohomology pushforward_cohomology(const LocalSystem& L) {
    TotalComplex c = mayer_vietoris_complex(L);
    auto h = cochain_cohomology(c.dims, c.d);
    return {{h[0], h[1], h[2]}};
}

int euler_characteristic(const LocalSystem& L) {
    L.validate();
    int chi = 2 * L.m;
    for (const auto& t : L.T) chi -= L.m - (L.m - rational_rank(minus_identity(t)));
    return chi;
}

IntMatrix unipotent() { return IntMatrix::from_rows({{1, 1}, {0, 1}}); }

LocalSystem k3_local_system() {
    LocalSystem L;
    L.m = 2;
    IntMatrix A = unipotent(), B = IntMatrix::from_rows({{1, 0}, {-1, 1}});
    for (int i = 0; i < 12; ++i) {
        L.T.push_back(B);
        L.T.push_back(A);
    }
    return L;
}

LocalSystem trivial_system(int m, int k) {
    LocalSystem L;
    L.m = m;
    L.T.assign(sz(k), IntMatrix::identity(m));
    return L;
}

std::string E2Table::str() const {
    std::ostringstream os;
    for (int q = n; q >= 0; --q) {
        for (int p = 0; p <= n; ++p) os << (p ? " | " : "") << at(p, q).str();
        os << "\n";
    }
    return os.str();
}

E2Table e2_k3(const LocalSystem& L) {
    SphereCohomology h = pushforward_cohomology(L);
    if (h.h[0] != AbelianGroup{} || h.h[2] != AbelianGroup{})
        throw Error(Errc::PatternViolation, "R^1 has cohomology in degree 0 or 2: " + h.h[0].str() + ", " + h.h[2].str());
    E2Table t;
    t.n = 2;
    t.e.assign(3, std::vector<AbelianGroup>(3));
    AbelianGroup z = make_group(1, {});
    for (int q : {0, 2}) {
        t.at(0, q) = z;
        t.at(2, q) = z;
    }
    t.at(1, 1) = h.h[1];
    return t;
}

namespace {

const std::vector<std::pair<int, int>>& torsion_slots() {
    static const std::vector<std::pair<int, int>> slots = {{2, 0}, {1, 1}, {2, 1}, {3, 1}, {1, 2}, {2, 2}, {3, 2}, {2, 3}};
    return slots;
}

std::string key(int p, int q) { return std::to_string(p) + "," + std::to_string(q); }

}  // namespace

E2Table e2_n3(int h11, int h12, const std::map<std::string, std::vector<Z>>& torsion) {
    if (h11 < 0 || h12 < 0) throw Error(Errc::PatternViolation, "Hodge-type ranks must be non-negative");
    E2Table t;
    t.n = 3;
    t.e.assign(4, std::vector<AbelianGroup>(4));
    for (const auto& [k, v] : torsion) {
        bool ok = false;
        for (auto [p, q] : torsion_slots()) ok = ok || k == key(p, q);
        if (!ok) throw Error(Errc::PatternViolation, "no torsion slot T^{" + k + "} in the table");
    }
    auto tors = [&](int p, int q) {
        auto it = torsion.find(key(p, q));
        return it == torsion.end() ? std::vector<Z>{} : it->second;
    };
    AbelianGroup z = make_group(1, {});
    t.at(0, 0) = t.at(3, 0) = t.at(0, 3) = t.at(3, 3) = z;
    for (auto [p, q] : torsion_slots()) t.at(p, q) = make_group(0, tors(p, q));
    t.at(1, 1).rank = t.at(2, 2).rank = h11;
    t.at(1, 2).rank = t.at(2, 1).rank = h12;
    validate_e2_n3(t);
    return t;
}

void validate_e2_n3(const E2Table& t) {
    if (t.n != 3 || t.e.size() != 4) throw Error(Errc::PatternViolation, "expected a 4 x 4 table");
    for (const auto& col : t.e)
        if (col.size() != 4) throw Error(Errc::PatternViolation, "expected a 4 x 4 table");
    AbelianGroup z = make_group(1, {});
    for (auto [p, q] : std::vector<std::pair<int, int>>{{0, 0}, {3, 0}, {0, 3}, {3, 3}})
        if (t.at(p, q) != z) throw Error(Errc::PatternViolation, "corner E2^{" + key(p, q) + "} must be Z");
    for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {0, 2}, {1, 3}})
        if (t.at(p, q) != AbelianGroup{}) throw Error(Errc::PatternViolation, "E2^{" + key(p, q) + "} must vanish");
    for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 0}, {3, 1}, {3, 2}, {2, 3}})
        if (t.at(p, q).rank != 0) throw Error(Errc::PatternViolation, "E2^{" + key(p, q) + "} must be torsion");
    if (t.at(1, 1).rank != t.at(2, 2).rank) throw Error(Errc::PatternViolation, "E2^{1,1} and E2^{2,2} ranks differ");
    if (t.at(1, 2).rank != t.at(2, 1).rank) throw Error(Errc::PatternViolation, "E2^{1,2} and E2^{2,1} ranks differ");
}

E2Table dual_table(const E2Table& t) {
    E2Table d = t;
    for (int p = 0; p <= t.n; ++p)
        for (int q = 0; q <= t.n; ++q) d.at(p, q) = t.at(p, t.n - q);
    return d;
}

Report duality_checks(const E2Table& t, const E2Table& dual) {
    validate_e2_n3(t);
    validate_e2_n3(dual);
    auto rank_sym = [](const E2Table& x) {
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; j <= 3; ++j)
                if (x.at(i, j).rank != x.at(3 - i, 3 - j).rank) return false;
        return true;
    };
    auto iso = [&](const E2Table& x, int a, int b, int c, int d) { return x.torsion(a, b) == x.torsion(c, d); };
    Report r;
    r.verdict("rank_symmetry", rank_sym(t));
    r.verdict("T11_T32", iso(t, 1, 1, 3, 2));
    r.verdict("T12_T31", iso(t, 1, 2, 3, 1));
    r.verdict("T21_T22", iso(t, 2, 1, 2, 2));
    r.verdict("T23_T20", iso(t, 2, 3, 2, 0));
    r.verdict("rank_symmetry_dual", rank_sym(dual));
    bool cross = true;
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j) cross = cross && dual.torsion(i, j) == t.torsion(i, 3 - j);
    r.verdict("cross_table", cross);
    // #H^k(X)_tors from the torsion on the antidiagonal p + q = k of a degenerate page
    auto card = [](const E2Table& x, int parity) {
        Z c = 1;
        for (int p = 0; p <= 3; ++p)
            for (int q = 0; q <= 3; ++q)
                if ((p + q) % 2 == parity) c *= x.at(p, q).torsion_order();
        return c;
    };
    auto card_k = [](const E2Table& x, int k) {
        Z c = 1;
        for (int p = 0; p <= 3; ++p)
            if (k - p >= 0 && k - p <= 3) c *= x.at(p, k - p).torsion_order();
        return c;
    };
    r.verdict("even_odd_cardinality", card(t, 0) == card(dual, 1));
    r.verdict("odd_even_cardinality", card(t, 1) == card(dual, 0));
    r.verdict("h3_h4_cardinality", card_k(t, 3) == card_k(t, 4));
    return r;
}

}  // namespace syzlab
