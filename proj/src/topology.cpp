#include "syzlab/topology.hpp"

#include "syzlab/error.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace syzlab {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

struct CubeCell {
    std::vector<int> p;
    unsigned mask = 0;  // bit k-1 for axis k
};

std::string cube_label(const CubeCell& c) {
    std::string s;
    for (std::size_t i = 0; i < c.p.size(); ++i) s += (i ? "," : "") + std::to_string(c.p[i]);
    s += "|";
    for (std::size_t k = 0; k < c.p.size(); ++k)
        if (c.mask & (1u << k)) s += std::to_string(k + 1);
    return s;
}

// Cells of the cubical d-torus grouped by dimension, with a label index.
struct CubicalIndex {
    int d = 0, n = 1;
    std::vector<std::vector<CubeCell>> cells;
    std::map<std::string, int> index;

    CubicalIndex(int d_, int n_) : d(d_), n(n_), cells(sz(d_ + 1)) {
        int total = 1;
        for (int i = 0; i < d; ++i) total *= n;
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            for (int code = 0; code < total; ++code) {
                CubeCell c;
                c.mask = mask;
                int r = code;
                for (int i = 0; i < d; ++i) {
                    c.p.push_back(r % n);
                    r /= n;
                }
                cells[sz(std::popcount(mask))].push_back(c);
            }
        }
        for (auto& level : cells)
            for (std::size_t i = 0; i < level.size(); ++i) index[cube_label(level[i])] = static_cast<int>(i);
    }
    int find(const CubeCell& c) const { return index.at(cube_label(c)); }
};

bool in_hyperplane(const CubeCell& c, int axis) {
    return !(c.mask & (1u << (axis - 1))) && c.p[sz(axis - 1)] == 0;
}

}  // namespace

std::vector<int> CellComplex::counts() const {
    std::vector<int> v;
    for (int k = 0; k <= dim(); ++k) v.push_back(count(k));
    return v;
}

int CellComplex::euler_characteristic() const {
    int chi = 0;
    for (int k = 0; k <= dim(); ++k) chi += (k % 2 ? -1 : 1) * count(k);
    return chi;
}

void CellComplex::validate() const {
    if (boundary.size() != cells.size()) throw Error(Errc::Schema, "one boundary matrix per dimension is required");
    for (int k = 1; k <= dim(); ++k) {
        const IntMatrix& b = boundary[sz(k)];
        if (b.rows() != count(k - 1) || b.cols() != count(k)) throw Error(Errc::Schema, "boundary matrix has the wrong shape");
        if (k + 1 <= dim() && !(b * boundary[sz(k + 1)]).is_zero())
            throw Error(Errc::BoundarySquare, "boundary squared is nonzero in degree " + std::to_string(k + 1));
    }
}

CellComplex cubical_torus(int d, int n) {
    if (d < 1 || d > 3 || n < 1) throw Error(Errc::Schema, "cubical torus needs 1 <= d <= 3 and n >= 1");
    CubicalIndex idx(d, n);
    CellComplex c;
    c.cells.resize(sz(d + 1));
    c.boundary.resize(sz(d + 1));
    for (int k = 0; k <= d; ++k)
        for (const auto& cell : idx.cells[sz(k)]) c.cells[sz(k)].push_back(cube_label(cell));
    c.boundary[0] = IntMatrix(0, c.count(0));
    for (int k = 1; k <= d; ++k) {
        IntMatrix b(c.count(k - 1), c.count(k));
        for (std::size_t j = 0; j < idx.cells[sz(k)].size(); ++j) {
            const CubeCell& cell = idx.cells[sz(k)][j];
            int pos = 0;
            for (int axis = 0; axis < d; ++axis) {
                if (!(cell.mask & (1u << axis))) continue;
                int sign = pos % 2 ? -1 : 1;
                CubeCell back = cell;
                back.mask &= ~(1u << axis);
                CubeCell front = back;
                front.p[sz(axis)] = (front.p[sz(axis)] + 1) % n;
                b(idx.find(front), static_cast<int>(j)) += sign;
                b(idx.find(back), static_cast<int>(j)) -= sign;
                ++pos;
            }
        }
        c.boundary[sz(k)] = b;
    }
    return c;
}

CellComplex product(const CellComplex& a, const CellComplex& b) {
    int d = a.dim() + b.dim();
    CellComplex c;
    c.cells.resize(sz(d + 1));
    c.boundary.resize(sz(d + 1));
    // (i, j) -> index within its dimension
    std::vector<std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int>> index(sz(d + 1));
    for (int k = 0; k <= d; ++k)
        for (int p = 0; p <= std::min(k, a.dim()); ++p) {
            int q = k - p;
            if (q > b.dim()) continue;
            for (int i = 0; i < a.count(p); ++i)
                for (int j = 0; j < b.count(q); ++j) {
                    index[sz(k)][{{p, i}, {q, j}}] = c.count(k);
                    c.cells[sz(k)].push_back(a.cells[sz(p)][sz(i)] + " x " + b.cells[sz(q)][sz(j)]);
                }
        }
    c.boundary[0] = IntMatrix(0, c.count(0));
    for (int k = 1; k <= d; ++k) {
        IntMatrix m(c.count(k - 1), c.count(k));
        for (const auto& [key, col] : index[sz(k)]) {
            auto [pi, qj] = key;
            auto [p, i] = pi;
            auto [q, j] = qj;
            if (p > 0)
                for (int f = 0; f < a.count(p - 1); ++f) {
                    const Z& v = a.boundary[sz(p)](f, i);
                    if (v != 0) m(index[sz(k - 1)].at({{p - 1, f}, {q, j}}), col) += v;
                }
            if (q > 0)
                for (int f = 0; f < b.count(q - 1); ++f) {
                    const Z& v = b.boundary[sz(q)](f, j);
                    if (v != 0) m(index[sz(k - 1)].at({{p, i}, {q - 1, f}}), col) += (p % 2 ? -1 : 1) * v;
                }
        }
        c.boundary[sz(k)] = m;
    }
    return c;
}

CellComplex quotient(const CellComplex& x, const CellularCollapse& r) {
    x.validate();
    int d = x.dim();
    if (static_cast<int>(r.size()) != d + 1) throw Error(Errc::NonCellular, "collapse map needs one entry list per dimension");
    for (int k = 0; k <= d; ++k)
        if (static_cast<int>(r[sz(k)].size()) != x.count(k)) throw Error(Errc::NonCellular, "collapse map has the wrong length");
    auto in_a = [&](int k, int i) { return r[sz(k)][sz(i)].has_value(); };
    auto fixed = [&](int k, int i) {
        const auto& v = r[sz(k)][sz(i)];
        return v && v->cell == i && v->sign == 1;
    };
    // r applied to a k-chain
    auto push = [&](int k, const std::vector<Z>& chain) {
        std::vector<Z> out(sz(x.count(k)));
        for (int i = 0; i < x.count(k); ++i) {
            if (chain[sz(i)] == 0) continue;
            const auto& v = r[sz(k)][sz(i)];
            if (!v) out[sz(i)] += chain[sz(i)];
            else if (v->cell >= 0) out[sz(v->cell)] += v->sign * chain[sz(i)];
        }
        return out;
    };
    auto boundary_of = [&](int k, const std::vector<Z>& chain) {
        std::vector<Z> out(sz(x.count(k - 1)));
        for (int i = 0; i < x.count(k); ++i) {
            if (chain[sz(i)] == 0) continue;
            for (int f = 0; f < x.count(k - 1); ++f) out[sz(f)] += x.boundary[sz(k)](f, i) * chain[sz(i)];
        }
        return out;
    };
    for (int k = 0; k <= d; ++k)
        for (int i = 0; i < x.count(k); ++i) {
            if (!in_a(k, i)) continue;
            const CellImage& img = *r[sz(k)][sz(i)];
            if (img.cell >= x.count(k) || (img.cell >= 0 && !fixed(k, img.cell)))
                throw Error(Errc::NonCellular, "image of " + x.cells[sz(k)][sz(i)] + " is not a fixed cell of the collapsed subcomplex");
            if (img.cell >= 0 && img.sign != 1 && img.sign != -1) throw Error(Errc::NonCellular, "image signs must be +-1");
            if (k == 0 && img.cell < 0) throw Error(Errc::NonCellular, "vertices cannot be degenerate");
            if (k == 0) continue;
            std::vector<Z> e(sz(x.count(k)));
            e[sz(i)] = 1;
            std::vector<Z> bd = boundary_of(k, e);
            for (int f = 0; f < x.count(k - 1); ++f)
                if (bd[sz(f)] != 0 && !in_a(k - 1, f))
                    throw Error(Errc::NonCellular, "collapsed cells do not form a subcomplex at " + x.cells[sz(k)][sz(i)]);
            if (push(k - 1, bd) != boundary_of(k, push(k, e)))
                throw Error(Errc::NonCellular, "collapse does not commute with the boundary at " + x.cells[sz(k)][sz(i)]);
        }
    CellComplex q;
    q.cells.resize(sz(d + 1));
    q.boundary.resize(sz(d + 1));
    std::vector<std::vector<int>> newidx(sz(d + 1));
    for (int k = 0; k <= d; ++k) {
        newidx[sz(k)].assign(sz(x.count(k)), -1);
        for (int i = 0; i < x.count(k); ++i)
            if (!in_a(k, i) || fixed(k, i)) {
                newidx[sz(k)][sz(i)] = q.count(k);
                q.cells[sz(k)].push_back(x.cells[sz(k)][sz(i)]);
            }
    }
    q.boundary[0] = IntMatrix(0, q.count(0));
    for (int k = 1; k <= d; ++k) {
        IntMatrix m(q.count(k - 1), q.count(k));
        for (int i = 0; i < x.count(k); ++i) {
            int col = newidx[sz(k)][sz(i)];
            if (col < 0) continue;
            std::vector<Z> e(sz(x.count(k)));
            e[sz(i)] = 1;
            std::vector<Z> bd = push(k - 1, boundary_of(k, e));
            for (int f = 0; f < x.count(k - 1); ++f)
                if (bd[sz(f)] != 0) m(newidx[sz(k - 1)][sz(f)], col) = bd[sz(f)];
        }
        q.boundary[sz(k)] = m;
    }
    q.validate();
    return q;
}

CellularCollapse collapse_from_rules(const CellComplex& torus, int d, int n, const std::vector<CollapseRule>& rules) {
    CubicalIndex idx(d, n);
    CellularCollapse r(sz(d + 1));
    for (int k = 0; k <= d; ++k) {
        if (static_cast<int>(idx.cells[sz(k)].size()) != torus.count(k))
            throw Error(Errc::NonCellular, "rules need the cubical torus they were written for");
        r[sz(k)].resize(idx.cells[sz(k)].size());
        for (std::size_t i = 0; i < idx.cells[sz(k)].size(); ++i) {
            const CubeCell& c = idx.cells[sz(k)][i];
            for (const auto& rule : rules) {
                bool hit = false;
                for (int axis : rule.on) {
                    if (axis < 1 || axis > d) throw Error(Errc::NonCellular, "rule axis out of range");
                    hit = hit || in_hyperplane(c, axis);
                }
                if (!hit) continue;
                CellImage img;
                if (rule.to_point) {
                    img.cell = k == 0 ? 0 : -1;  // vertex 0 is the origin
                } else {
                    CubeCell t = c;
                    bool degenerate = false;
                    for (int axis : rule.project) {
                        if (axis < 1 || axis > d) throw Error(Errc::NonCellular, "rule axis out of range");
                        if (t.mask & (1u << (axis - 1))) degenerate = true;
                        t.p[sz(axis - 1)] = 0;
                    }
                    img.cell = degenerate ? -1 : idx.find(t);
                }
                r[sz(k)][i] = img;
                break;
            }
        }
    }
    return r;
}

std::vector<FibreModel> all_fibre_models() {
    return {FibreModel::M22, FibreModel::M12, FibreModel::M21, FibreModel::M11a,
            FibreModel::M11b, FibreModel::M01, FibreModel::M10, FibreModel::M00};
}

std::string model_name(FibreModel m) {
    switch (m) {
        case FibreModel::T3: return "T3";
        case FibreModel::M22: return "M22";
        case FibreModel::M12: return "M12";
        case FibreModel::M21: return "M21";
        case FibreModel::M11a: return "M11a";
        case FibreModel::M11b: return "M11b";
        case FibreModel::M01: return "M01";
        case FibreModel::M10: return "M10";
        case FibreModel::M00: return "M00";
    }
    return "?";
}

FibreModel parse_model(const std::string& name) {
    for (auto m : {FibreModel::T3, FibreModel::M22, FibreModel::M12, FibreModel::M21, FibreModel::M11a, FibreModel::M11b,
                   FibreModel::M01, FibreModel::M10, FibreModel::M00})
        if (model_name(m) == name) return m;
    throw Error(Errc::MissingModel, "unknown fibre model '" + name + "'");
}

std::string model_description(FibreModel m) {
    switch (m) {
        case FibreModel::T3: return "smooth 3-torus";
        case FibreModel::M22: return "I_1 x S^1";
        case FibreModel::M12: return "S^1 x T^2 with {pt} x T^2 collapsed";
        case FibreModel::M21: return "T^3 with each circle over the figure eight collapsed (singular along a figure eight)";
        case FibreModel::M11a: return "II x S^1";
        case FibreModel::M11b: return "figure-eight model with one loop contracted to a point";
        case FibreModel::M01: return "T^3 with (figure eight) x S^1 collapsed to a point";
        case FibreModel::M10: return "T^3 with (figure eight) x S^1 collapsed onto S^1 and T^2 x {0} to a point";
        case FibreModel::M00: return "cube with its boundary collapsed (3-sphere)";
    }
    return "";
}

std::pair<int, int> expected_type(FibreModel m) {
    switch (m) {
        case FibreModel::T3: return {3, 3};
        case FibreModel::M22: return {2, 2};
        case FibreModel::M12: return {1, 2};
        case FibreModel::M21: return {2, 1};
        case FibreModel::M11a: return {1, 1};
        case FibreModel::M11b: return {1, 1};
        case FibreModel::M01: return {0, 1};
        case FibreModel::M10: return {1, 0};
        case FibreModel::M00: return {0, 0};
    }
    return {0, 0};
}

std::vector<CollapseRule> model_rules(FibreModel m) {
    switch (m) {
        case FibreModel::T3: return {};
        // for each x3, the x1-circle at x2 = 0 is pinched
        case FibreModel::M22: return {{{2}, false, {1}}};
        case FibreModel::M12: return {{{1}, true, {}}};
        case FibreModel::M21: return {{{1, 2}, false, {3}}};
        case FibreModel::M11a: return {{{1, 2}, false, {1, 2}}};
        case FibreModel::M11b: return {{{2}, true, {}}, {{1}, false, {3}}};
        case FibreModel::M01: return {{{1, 2}, true, {}}};
        case FibreModel::M10: return {{{3}, true, {}}, {{1, 2}, false, {1, 2}}};
        case FibreModel::M00: return {{{1, 2, 3}, true, {}}};
    }
    return {};
}

CellComplex build_model(FibreModel m, int subdivisions) {
    int n = subdivisions;
    if (n < 1 || n > 3) throw Error(Errc::Schema, "subdivisions must be 1, 2 or 3");
    if (m == FibreModel::M22 || m == FibreModel::M11a) {
        // curve model times a circle
        CellComplex t2 = cubical_torus(2, n);
        std::vector<CollapseRule> curve = m == FibreModel::M22 ? std::vector<CollapseRule>{{{2}, true, {}}}
                                                               : std::vector<CollapseRule>{{{1, 2}, true, {}}};
        CellComplex c = quotient(t2, collapse_from_rules(t2, 2, n, curve));
        return product(c, cubical_torus(1, n));
    }
    CellComplex t3 = cubical_torus(3, n);
    if (m == FibreModel::T3) return t3;
    return quotient(t3, collapse_from_rules(t3, 3, n, model_rules(m)));
}

CohomologyResult integral_cohomology(const CellComplex& c) {
    c.validate();
    std::vector<IntMatrix> d;
    for (int k = 0; k < c.dim(); ++k) d.push_back(c.boundary[sz(k + 1)].transpose());
    return {cochain_cohomology(c.counts(), d)};
}

std::vector<AbelianGroup> integral_homology(const CellComplex& c) {
    c.validate();
    return chain_homology(c.counts(), c.boundary);
}

CohomologyResult cohomology_via_uct(const CellComplex& c) {
    auto h = integral_homology(c);
    CohomologyResult r;
    for (std::size_t k = 0; k < h.size(); ++k) {
        AbelianGroup g;
        g.rank = h[k].rank;
        if (k > 0) g.torsion = h[k - 1].torsion;
        r.groups.push_back(g);
    }
    return r;
}

bool FibreTypeTable::all_match() const {
    return std::all_of(rows.begin(), rows.end(), [](const FibreTypeRow& r) { return r.matches; });
}

std::vector<std::string> duality_pairing_audit(const std::vector<std::pair<int, int>>& types) {
    std::set<std::pair<int, int>> present(types.begin(), types.end());
    std::vector<std::string> out;
    for (const auto& [a, b] : present)
        if (!present.count({b, a})) out.push_back("(" + std::to_string(a) + "," + std::to_string(b) + ")");
    return out;
}

FibreTypeTable fibre_type_report(const std::map<FibreModel, CohomologyResult>& results) {
    FibreTypeTable t;
    std::vector<std::pair<int, int>> types;
    for (auto m : all_fibre_models()) {
        auto it = results.find(m);
        if (it == results.end()) throw Error(Errc::MissingModel, "no cohomology for model " + model_name(m));
        FibreTypeRow row;
        row.model = model_name(m);
        row.b1 = it->second.betti(1);
        row.b2 = it->second.betti(2);
        std::tie(row.expected_b1, row.expected_b2) = expected_type(m);
        row.matches = row.b1 == row.expected_b1 && row.b2 == row.expected_b2 && it->second.betti(0) == 1 &&
                      it->second.betti(3) == 1;
        types.emplace_back(row.b1, row.b2);
        t.rows.push_back(row);
    }
    t.unpaired = duality_pairing_audit(types);
    return t;
}

}  // namespace syzlab
