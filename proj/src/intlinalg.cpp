#include "syzlab/intlinalg.hpp"

#include "syzlab/error.hpp"

#include <algorithm>
#include <sstream>

namespace syzlab {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c) throw Error(Errc::Schema, "ragged matrix rows");
        for (int j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool IntMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Z& z) { return z == 0; });
}

void IntMatrix::set_block(int r, int c, const IntMatrix& b) {
    if (r + b.rows() > rows_ || c + b.cols() > cols_) throw Error(Errc::Internal, "block out of range");
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) (*this)(r + i, c + j) = b(i, j);
}

IntMatrix IntMatrix::column_block(int c0, int count) const {
    IntMatrix m(rows_, count);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < count; ++j) m(i, j) = (*this)(i, c0 + j);
    return m;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw Error(Errc::Internal, "matrix size mismatch in product");
    IntMatrix m(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (int j = 0; j < b.cols(); ++j) m(i, j) += a(i, k) * b(k, j);
        }
    return m;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(Errc::Internal, "matrix size mismatch in sum");
    IntMatrix m = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) += b(i, j);
    return m;
}

IntMatrix operator-(const IntMatrix& a) {
    IntMatrix m = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = -m(i, j);
    return m;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) { return a + (-b); }

bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string IntMatrix::str() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

namespace {

void swap_rows(IntMatrix& m, int a, int b) {
    for (int j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(IntMatrix& m, int a, int b) {
    for (int i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row_a += q * row_b
void add_row(IntMatrix& m, int a, int b, const Z& q) {
    for (int j = 0; j < m.cols(); ++j) m(a, j) += q * m(b, j);
}
void add_col(IntMatrix& m, int a, int b, const Z& q) {
    for (int i = 0; i < m.rows(); ++i) m(i, a) += q * m(i, b);
}
void negate_row(IntMatrix& m, int a) {
    for (int j = 0; j < m.cols(); ++j) m(a, j) = -m(a, j);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
    SmithForm s;
    s.D = a;
    s.U = IntMatrix::identity(a.rows());
    s.V = IntMatrix::identity(a.cols());
    IntMatrix& D = s.D;
    int r = a.rows(), c = a.cols();
    int t = 0;
    for (; t < std::min(r, c); ++t) {
        // pivot: smallest nonzero |entry| in the trailing block
        int pi = -1, pj = -1;
        for (int i = t; i < r; ++i)
            for (int j = t; j < c; ++j)
                if (D(i, j) != 0 && (pi < 0 || abs(D(i, j)) < abs(D(pi, pj)))) pi = i, pj = j;
        if (pi < 0) break;
        swap_rows(D, t, pi);
        swap_rows(s.U, t, pi);
        swap_cols(D, t, pj);
        swap_cols(s.V, t, pj);
        for (;;) {
            bool dirty = false;
            for (int i = t + 1; i < r; ++i) {
                if (D(i, t) == 0) continue;
                Z q;
                mpz_fdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
                add_row(D, i, t, -q);
                add_row(s.U, i, t, -q);
                if (D(i, t) != 0) {
                    swap_rows(D, t, i);
                    swap_rows(s.U, t, i);
                    dirty = true;
                }
            }
            for (int j = t + 1; j < c; ++j) {
                if (D(t, j) == 0) continue;
                Z q;
                mpz_fdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
                add_col(D, j, t, -q);
                add_col(s.V, j, t, -q);
                if (D(t, j) != 0) {
                    swap_cols(D, t, j);
                    swap_cols(s.V, t, j);
                    dirty = true;
                }
            }
            if (dirty) continue;
            // divisibility: fold in any entry of the trailing block not divisible by the pivot
            int bad = -1;
            for (int i = t + 1; i < r && bad < 0; ++i)
                for (int j = t + 1; j < c; ++j)
                    if (D(i, j) % D(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            add_row(D, t, bad, Z(1));
            add_row(s.U, t, bad, Z(1));
        }
        if (D(t, t) < 0) {
            negate_row(D, t);
            negate_row(s.U, t);
        }
        s.diagonal.push_back(D(t, t));
    }
    return s;
}

IntMatrix integer_kernel(const IntMatrix& a) {
    SmithForm s = smith_normal_form(a);
    return s.V.column_block(s.rank(), a.cols() - s.rank());
}

IntMatrix unimodular_inverse(const IntMatrix& a) {
    if (a.rows() != a.cols()) throw Error(Errc::NonInvertible, "matrix is not square");
    SmithForm s = smith_normal_form(a);
    if (s.rank() != a.rows() || std::any_of(s.diagonal.begin(), s.diagonal.end(), [](const Z& d) { return d != 1; }))
        throw Error(Errc::NonInvertible, "matrix is not invertible over the integers");
    return s.V * s.U;
}

int rational_rank(const IntMatrix& a) { return smith_normal_form(a).rank(); }

Z determinant(const IntMatrix& a) {
    if (a.rows() != a.cols()) throw Error(Errc::Internal, "determinant of a non-square matrix");
    // fraction-free Bareiss elimination
    IntMatrix m = a;
    int n = a.rows();
    Z sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (m(i, k) != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            swap_rows(m, k, p);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Z v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m(i, j) = v;
            }
        prev = m(k, k);
    }
    return n == 0 ? Z(1) : Z(sign * m(n - 1, n - 1));
}

std::string AbelianGroup::str() const {
    std::vector<std::string> parts;
    if (rank == 1) parts.push_back("Z");
    if (rank > 1) parts.push_back("Z^" + std::to_string(rank));
    for (const auto& d : torsion) parts.push_back("Z/" + d.get_str());
    if (parts.empty()) return "0";
    std::string s = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) s += " + " + parts[i];
    return s;
}

Z AbelianGroup::torsion_order() const {
    Z o = 1;
    for (const auto& d : torsion) o *= d;
    return o;
}

AbelianGroup make_group(int rank, std::vector<Z> divisors) {
    // normalize an arbitrary list of cyclic orders into invariant factors
    AbelianGroup g;
    g.rank = rank;
    IntMatrix m(static_cast<int>(divisors.size()), static_cast<int>(divisors.size()));
    for (std::size_t i = 0; i < divisors.size(); ++i) {
        if (divisors[i] <= 0) throw Error(Errc::Schema, "torsion orders must be positive");
        m(static_cast<int>(i), static_cast<int>(i)) = divisors[i];
    }
    for (const auto& d : smith_normal_form(m).diagonal)
        if (d > 1) g.torsion.push_back(d);
    return g;
}

std::vector<AbelianGroup> cochain_cohomology(const std::vector<int>& dims, const std::vector<IntMatrix>& d) {
    std::size_t n = dims.size();
    if (d.size() + 1 < n) throw Error(Errc::Internal, "missing differentials");
    std::vector<SmithForm> sf;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (d[k].cols() != dims[k] || d[k].rows() != dims[k + 1]) throw Error(Errc::Internal, "differential has the wrong shape");
        if (k + 2 < n && !(d[k + 1] * d[k]).is_zero()) throw Error(Errc::BoundarySquare, "d o d != 0 at degree " + std::to_string(k));
        sf.push_back(smith_normal_form(d[k]));
    }
    std::vector<AbelianGroup> h;
    for (std::size_t k = 0; k < n; ++k) {
        int rk_out = k + 1 < n ? sf[k].rank() : 0;
        int rk_in = k > 0 ? sf[k - 1].rank() : 0;
        AbelianGroup g;
        g.rank = dims[k] - rk_out - rk_in;
        if (k > 0)
            for (const auto& x : sf[k - 1].diagonal)
                if (x > 1) g.torsion.push_back(x);
        h.push_back(g);
    }
    return h;
}

std::vector<AbelianGroup> chain_homology(const std::vector<int>& dims, const std::vector<IntMatrix>& boundary) {
    std::size_t n = dims.size();
    std::vector<SmithForm> sf(n);
    for (std::size_t k = 1; k < n; ++k) {
        if (boundary[k].cols() != dims[k] || boundary[k].rows() != dims[k - 1])
            throw Error(Errc::Internal, "boundary has the wrong shape");
        if (k + 1 < n && !(boundary[k] * boundary[k + 1]).is_zero())
            throw Error(Errc::BoundarySquare, "boundary squared is nonzero at degree " + std::to_string(k + 1));
        sf[k] = smith_normal_form(boundary[k]);
    }
    std::vector<AbelianGroup> h;
    for (std::size_t k = 0; k < n; ++k) {
        int rk_out = k > 0 ? sf[k].rank() : 0;
        int rk_in = k + 1 < n ? sf[k + 1].rank() : 0;
        AbelianGroup g;
        g.rank = dims[k] - rk_out - rk_in;
        if (k + 1 < n)
            for (const auto& x : sf[k + 1].diagonal)
                if (x > 1) g.torsion.push_back(x);
        h.push_back(g);
    }
    return h;
}

}  // namespace syzlab
