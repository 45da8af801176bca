#pragma once

#include "syzlab/intlinalg.hpp"
#include "syzlab/report.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace syzlab {

// Local system of rank m on S^2 minus k points. T[i] is the monodromy of the
// counterclockwise loop gamma_{i+1}; the loops satisfy gamma_k ... gamma_1 = 1,
// so T[k-1] * ... * T[0] must be the identity.
struct LocalSystem {
    int m = 0;
    std::vector<IntMatrix> T;

    int k() const { return static_cast<int>(T.size()); }
    // Throws Errc::Schema, Errc::NonInvertible or Errc::RelationViolated.
    void validate() const;
};

// Cohomology of the pushforward j_* L on S^2 (stalk ker(T_i - I) at the i-th point).
struct SphereCohomology {
    std::array<AbelianGroup, 3> h;
};
SphereCohomology pushforward_cohomology(const LocalSystem& L);

// Mayer-Vietoris total complex over {discs, annuli, k-holed sphere}, exposed for tests.
struct TotalComplex {
    std::vector<int> dims;
    std::vector<IntMatrix> d;  // d[0] : Tot^0 -> Tot^1, d[1] : Tot^1 -> Tot^2
};
TotalComplex mayer_vietoris_complex(const LocalSystem& L);
// Value on gamma_k of the crossed homomorphism with values c_1..c_{k-1} on gamma_1..gamma_{k-1}:
// c(gamma_k) = -T_k sum_{j<k} T_{k-1} ... T_{j+1} c_j, as a map M^{k-1} -> M.
IntMatrix last_loop_restriction(const LocalSystem& L);

// 2m - sum_i (m - rank ker(T_i - I)).
int euler_characteristic(const LocalSystem& L);

// Standard fixtures.
IntMatrix unipotent();  // [[1,1],[0,1]]
LocalSystem k3_local_system();  // 24 I_1 fibres: B, A alternating with (AB)^12 = I
LocalSystem trivial_system(int m, int k);

// E2 page E2^{p,q}, p, q in 0..n, stored as e[p][q].
struct E2Table {
    int n = 3;
    std::vector<std::vector<AbelianGroup>> e;

    const AbelianGroup& at(int p, int q) const { return e[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]; }
    AbelianGroup& at(int p, int q) { return e[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]; }
    // Torsion part T^{p,q}.
    AbelianGroup torsion(int p, int q) const { return make_group(0, at(p, q).torsion); }
    std::string str() const;  // printed with q = n on top
};

// K3 case: rows R^0 = R^2 = Z and R^1 from the local system. Throws
// Errc::PatternViolation when H^0 or H^2 of R^1 is nonzero.
E2Table e2_k3(const LocalSystem& L);
// n = 3 table laid out as the Leray E2 page of an integral fibration with section.
// torsion keys are "p,q" for the T^{p,q} slots.
E2Table e2_n3(int h11, int h12, const std::map<std::string, std::vector<Z>>& torsion);
// Throws Errc::PatternViolation.
void validate_e2_n3(const E2Table& t);
// The table expected for the dual fibration: E2check^{p,q} = E2^{p,3-q}.
E2Table dual_table(const E2Table& t);

// Verdicts: rank_symmetry, T11_T32, T12_T31, T21_T22, T23_T20, rank_symmetry_dual,
// cross_table, even_odd_cardinality, odd_even_cardinality, h3_h4_cardinality.
Report duality_checks(const E2Table& t, const E2Table& dual);

}  // namespace syzlab
