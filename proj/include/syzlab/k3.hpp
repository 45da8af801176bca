#pragma once

#include "syzlab/intlinalg.hpp"
#include "syzlab/report.hpp"

#include <string>
#include <vector>

namespace syzlab {

using QVector = std::vector<Q>;
using ZVector = std::vector<Z>;

struct GramLattice {
    IntMatrix gram;
    bool unimodular = false;
    std::string preset;

    int rank() const { return gram.rows(); }
    Q dot(const QVector& a, const QVector& b) const;
    // Throws Errc::Schema on an asymmetric Gram matrix or, when flagged, |det| != 1.
    void validate() const;
};

// Basis e1, f1, e2, f2, ... with e_i.f_i = 1.
GramLattice hyperbolic_lattice(int copies);
GramLattice e8_negative();
GramLattice direct_sum(const GramLattice& a, const GramLattice& b);
// U^3 + E8(-1)^2, rank 22.
GramLattice k3_lattice();
// "K3" or "U<k>" (e.g. "U3").
GramLattice lattice_preset(const std::string& name);

QVector to_qvector(const ZVector& v);
QVector unit_vector(int rank, int i);
QVector operator+(const QVector& a, const QVector& b);
QVector operator-(const QVector& a, const QVector& b);
QVector operator-(const QVector& a);
QVector operator*(const Q& s, const QVector& a);

struct ComplexVector {
    QVector re, im;
};
struct ComplexNumber {
    Q re, im;
    friend bool operator==(const ComplexNumber&, const ComplexNumber&) = default;
};
ComplexNumber dot(const GramLattice& L, const ComplexVector& a, const ComplexVector& b);
ComplexNumber dot(const GramLattice& L, const ComplexVector& a, const QVector& b);

struct K3MirrorInput {
    GramLattice lattice;
    ZVector E, sigma0;
    QVector omega, B, re_omega, im_omega;
};

// Checks every invariant except Im(Omega).E = 0. Errors: Errc::Schema (shapes),
// Errc::NotIsotropic, Errc::NotPrimitive, Errc::InvariantViolation.
void validate_invariants(const K3MirrorInput& in);

struct AlignedInput {
    K3MirrorInput input;
    Q cos_theta, sin_theta;  // Omega -> e^{i theta} Omega
    double theta = 0.0;
    Q volume;  // Vol(S_b) = Re(Omega).E
};
// Rotates Omega so that Im(Omega).E = 0 and Re(Omega).E > 0, and reduces the
// B-field lift to B.sigma0 = 0. Throws Errc::NullFibreClass when Omega.E = 0 and
// Errc::IrrationalPhase when the rotation is not rational.
AlignedInput validate_and_align(const K3MirrorInput& in);
bool is_aligned(const K3MirrorInput& in);

struct HyperkahlerRotation {
    ComplexVector omega_k;  // Im(Omega) + i omega
    QVector kahler_k;       // Re(Omega)
    Report checks;
};
// Throws Errc::NotAligned.
HyperkahlerRotation hyperkahler_rotate(const K3MirrorInput& in);

struct QuotientLattice {
    GramLattice lattice;
    IntMatrix basis;  // columns: lifts to the ambient lattice of a basis of E^perp / E
};
// Throws Errc::NotPrimitive or Errc::NotIsotropic.
QuotientLattice sublattice_quotient(const GramLattice& L, const ZVector& E);

struct MirrorClasses {
    QVector omega_check;
    ComplexVector omega_n_check;
    QVector re_omega_check, im_omega_check;
    QVector b_check;  // B-field of the mirror, lifted with B.sigma0 = 0
    Q volume, dual_volume;
    Report checks;
};
// Throws Errc::NotAligned; invariant violations as in validate_invariants.
MirrorClasses mirror_classes(const K3MirrorInput& in);
// The mirror structure as a new input over the same lattice, E and sigma0.
K3MirrorInput mirror_input(const K3MirrorInput& in, const MirrorClasses& m);

// Fixes the span of E and sigma0 and negates its orthogonal complement.
QVector fibrewise_negation(const GramLattice& L, const ZVector& E, const ZVector& sigma0, const QVector& x);

// Verdicts omega, re_omega, im_omega, B (recovered after two mirrors and the
// negation) and negation_involution.
Report double_mirror_check(const K3MirrorInput& in);

// Declared integral classes delta with delta^2 = -2 lying in Pic of the mirror
// (orthogonal to Im(Omega check) and omega check); returns their indices.
std::vector<int> minus_two_obstructions(const K3MirrorInput& in, const MirrorClasses& m,
                                        const std::vector<ZVector>& declared);

// Local forms near a fibre: Im and Re of dw ^ dz with w = x1 + i x2, z = y1 - i y2
// against the standard chart forms and the relabeling (x1,x2,y1,y2) -> (x2,x1,y1,-y2).
Report k3_chart_form_check();

// Toy input over U^3: E = e1, sigma0 = f1 - e1, omega = e2 + f2, Re(Omega) = e1 + f1,
// Im(Omega) = e3 + f3, B = 0.
K3MirrorInput k3_toy_input();

}  // namespace syzlab
