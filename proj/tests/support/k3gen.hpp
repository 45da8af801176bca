#pragma once
// Random valid K3 mirror inputs over U^3 = <e1,f1,e2,f2,e3,f3>.

#include "support/gen.hpp"
#include "syzlab/k3.hpp"

namespace syzlab::testgen {

// x + (x.u) v - (x.v) u - (v.v)/2 (x.u) u, an isometry when u is isotropic and v is orthogonal to u.
inline QVector eichler(const GramLattice& L, const QVector& u, const QVector& v, const QVector& x) {
    Q xu = L.dot(x, u), xv = L.dot(x, v), vv = L.dot(v, v);
    return x + xu * v - xv * u - (vv / 2 * xu) * u;
}

// Random rational v with v.u = 0 and no f1 coordinate (so v.e1 = 0).
inline QVector orthogonal_to(Gen& g, const GramLattice& L, const QVector& u, bool integral) {
    for (;;) {
        QVector v(6);
        for (int i = 0; i < 6; ++i)
            if (i != 1 && g.coin(0.6)) v[static_cast<std::size_t>(i)] = integral ? Q(g.uniform_int(-2, 2)) : g.rational(3, 3);
        // project out the u-direction by adjusting the partner coordinate of u's support
        Q vu = L.dot(v, u);
        if (vu == 0 && (!integral || L.dot(v, v).get_num() % 2 == 0)) return v;
        if (integral) continue;
        // u has a nonzero entry at some index k; its partner k^1 pairs with it
        for (int k = 0; k < 6; ++k) {
            if (u[static_cast<std::size_t>(k)] != 0 && (k ^ 1) != 1) {
                v[static_cast<std::size_t>(k ^ 1)] -= vu / u[static_cast<std::size_t>(k)];
                break;
            }
        }
        if (L.dot(v, u) == 0) return v;
    }
}

inline K3MirrorInput random_u3_input(Gen& g, bool misalign = true) {
    K3MirrorInput in = k3_toy_input();
    const GramLattice& L = in.lattice;
    Q t(g.uniform_int(1, 9), g.uniform_int(1, 4));
    t.canonicalize();
    in.omega = t * in.omega;
    in.re_omega = t * in.re_omega;
    in.im_omega = t * in.im_omega;
    // isometries fixing E = e1, built from transvections along isotropic basis vectors
    const int isotropic[] = {0, 2, 3, 4, 5};
    int steps = g.uniform_int(1, 3);
    for (int s = 0; s < steps; ++s) {
        QVector u = unit_vector(6, isotropic[g.uniform_int(0, 4)]);
        QVector v = orthogonal_to(g, L, u, false);
        for (QVector* x : {&in.omega, &in.re_omega, &in.im_omega}) *x = eichler(L, u, v, *x);
    }
    // move the section by an integral transvection along E
    if (g.coin(0.5)) {
        QVector E = to_qvector(in.E);
        QVector v = orthogonal_to(g, L, E, true);
        QVector s = eichler(L, E, v, to_qvector(in.sigma0));
        for (int i = 0; i < 6; ++i) in.sigma0[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)].get_num();
    }
    // B in E^perp with an arbitrary lift
    for (int i = 0; i < 6; ++i)
        if (i != 1 && g.coin(0.5)) in.B[static_cast<std::size_t>(i)] = g.rational(4, 3);
    if (misalign && g.coin(0.7)) {
        int p = g.uniform_int(1, 4), q = g.uniform_int(-4, 4);
        Q den = p * p + q * q;
        Q c = Q(p * p - q * q) / den, sn = Q(2 * p * q) / den;
        QVector re = c * in.re_omega - sn * in.im_omega;
        in.im_omega = sn * in.re_omega + c * in.im_omega;
        in.re_omega = re;
    }
    return in;
}

}  // namespace syzlab::testgen
