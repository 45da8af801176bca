#pragma once

#include "syzlab/intlinalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace syzlab {

// Finite CW complex given by cell labels and integer cellular boundary matrices.
struct CellComplex {
    std::vector<std::vector<std::string>> cells;  // cells[k] = labels of k-cells
    std::vector<IntMatrix> boundary;              // boundary[k] : C_k -> C_{k-1}; boundary[0] is 0 x #cells[0]

    int dim() const { return static_cast<int>(cells.size()) - 1; }
    int count(int k) const { return k < 0 || k > dim() ? 0 : static_cast<int>(cells[static_cast<std::size_t>(k)].size()); }
    std::vector<int> counts() const;
    int euler_characteristic() const;
    // Throws Errc::BoundarySquare.
    void validate() const;
};

// Cubical structure on the d-torus with n subdivisions per axis. Cell labels are
// "p1,p2,..|axes", e.g. "0,1,0|13" is the face spanned by x1, x3 at grid point (0,1,0).
CellComplex cubical_torus(int d, int n = 1);
CellComplex product(const CellComplex& a, const CellComplex& b);

// Image of a cell under a cellular retraction: a cell of the same dimension with
// a sign, or degenerate (cell = -1).
struct CellImage {
    int cell = -1;
    int sign = 1;
};
// collapse[k][i] is empty for cells outside the collapsed subcomplex A.
using CellularCollapse = std::vector<std::vector<std::optional<CellImage>>>;

// Quotient X / (A -> B): cells outside A plus the image cells B, boundaries pushed
// through the retraction. Throws Errc::NonCellular when A is not a subcomplex,
// the image cells are not fixed, or the map does not commute with the boundary.
CellComplex quotient(const CellComplex& x, const CellularCollapse& r);

// Geometric collapse rules on cubical tori. A rule applies to cells lying in the
// union of the coordinate hyperplanes {x_k = 0}, k in `on`; the cell is sent to the
// base vertex (to_point) or has the coordinates in `project` forgotten. The first
// matching rule wins.
struct CollapseRule {
    std::vector<int> on;       // 1-based axes
    bool to_point = false;
    std::vector<int> project;  // 1-based axes
};
CellularCollapse collapse_from_rules(const CellComplex& torus, int d, int n, const std::vector<CollapseRule>& rules);

enum class FibreModel { T3, M22, M12, M21, M11a, M11b, M01, M10, M00 };
std::vector<FibreModel> all_fibre_models();  // the eight singular models
std::string model_name(FibreModel m);
FibreModel parse_model(const std::string& name);  // Errc::MissingModel
std::string model_description(FibreModel m);
// Expected (b1, b2) for the singular models.
std::pair<int, int> expected_type(FibreModel m);

// subdivisions = 1 is the minimal structure, 2 a subdivided one.
CellComplex build_model(FibreModel m, int subdivisions = 1);
// Collapse rules defining a model on the cubical 3-torus (also for the product models).
std::vector<CollapseRule> model_rules(FibreModel m);

struct CohomologyResult {
    std::vector<AbelianGroup> groups;  // H^k
    int betti(int k) const { return k < static_cast<int>(groups.size()) ? groups[static_cast<std::size_t>(k)].rank : 0; }
};
// Cohomology from the coboundary matrices.
CohomologyResult integral_cohomology(const CellComplex& c);
// Homology, and cohomology through universal coefficients.
std::vector<AbelianGroup> integral_homology(const CellComplex& c);
CohomologyResult cohomology_via_uct(const CellComplex& c);

struct FibreTypeRow {
    std::string model;
    int b1 = 0, b2 = 0;
    int expected_b1 = 0, expected_b2 = 0;
    bool matches = false;
};
struct FibreTypeTable {
    std::vector<FibreTypeRow> rows;
    std::vector<std::string> unpaired;  // "(m,n)" types whose dual (n,m) is absent
    bool all_match() const;
    bool pairing_ok() const { return unpaired.empty(); }
};
// Requires all eight singular models (Errc::MissingModel otherwise).
FibreTypeTable fibre_type_report(const std::map<FibreModel, CohomologyResult>& results);
// Types with no dual partner.
std::vector<std::string> duality_pairing_audit(const std::vector<std::pair<int, int>>& types);

}  // namespace syzlab
