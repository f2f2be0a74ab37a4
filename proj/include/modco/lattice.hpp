#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "modco/error.hpp"

namespace modco {

using Int = std::int64_t;
using IntVec = std::vector<Int>;

struct VecHash {
    std::size_t operator()(const IntVec& v) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (Int x : v) {
            h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

// ---- checked scalar arithmetic -------------------------------------------

inline Int add_checked(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "integer overflow in addition");
    return r;
}

inline Int sub_checked(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "integer overflow in subtraction");
    return r;
}

inline Int mul_checked(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "integer overflow in multiplication");
    return r;
}

inline Int narrow(__int128 x) {
    if (x > INT64_MAX || x < INT64_MIN) throw Error(ErrorKind::Overflow, "integer overflow");
    return static_cast<Int>(x);
}

inline Int floor_div(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int floor_mod(Int a, Int b) { return a - floor_div(a, b) * b; }

inline Int gcd(Int a, Int b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

struct ExtGcd {
    Int g, s, t;  // s*a + t*b = g > 0
};

inline ExtGcd ext_gcd(Int a, Int b) {
    Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        Int q = floor_div(old_r, r);
        Int tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s; old_s = s; s = tmp;
        tmp = old_t - q * t; old_t = t; t = tmp;
    }
    if (old_r < 0) return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

// ---- vectors ---------------------------------------------------------------

inline IntVec zero_vec(int d) { return IntVec(static_cast<std::size_t>(d), 0); }

inline bool is_zero(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

inline IntVec add(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = add_checked(a[i], b[i]);
    return r;
}

inline IntVec sub(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = sub_checked(a[i], b[i]);
    return r;
}

inline IntVec scale(Int c, const IntVec& a) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mul_checked(c, a[i]);
    return r;
}

// a - c*b
inline IntVec sub_multiple(const IntVec& a, Int c, const IntVec& b) {
    if (c == 0) return a;
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = sub_checked(a[i], mul_checked(c, b[i]));
    return r;
}

// 1D vectors print as plain integers, higher dimensions as tuples.
inline std::string format_vec(const IntVec& v) {
    if (v.size() == 1) return std::to_string(v[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + ")";
}

// ---- matrices --------------------------------------------------------------

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0) {}

    static IntMatrix identity(int d) { return scalar(d, 1); }

    static IntMatrix scalar(int d, Int c) {
        IntMatrix m(d, d);
        for (int i = 0; i < d; ++i) m(i, i) = c;
        return m;
    }

    static IntMatrix from_rows(const std::vector<IntVec>& rows) {
        if (rows.empty()) throw Error(ErrorKind::InvalidInput, "empty matrix");
        IntMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
        for (int i = 0; i < m.rows_; ++i) {
            if (static_cast<int>(rows[i].size()) != m.cols_)
                throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
            for (int j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static IntMatrix from_columns(const std::vector<IntVec>& cols, int d) {
        IntMatrix m(d, static_cast<int>(cols.size()));
        for (int j = 0; j < m.cols_; ++j) {
            if (static_cast<int>(cols[j].size()) != d)
                throw Error(ErrorKind::DimensionMismatch, "column of wrong dimension");
            for (int i = 0; i < d; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
    Int operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

    IntVec column(int j) const {
        IntVec v(static_cast<std::size_t>(rows_));
        for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    IntVec row(int i) const {
        return IntVec(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    }

    std::vector<IntVec> row_list() const {
        std::vector<IntVec> r;
        for (int i = 0; i < rows_; ++i) r.push_back(row(i));
        return r;
    }

    IntVec operator*(const IntVec& v) const {
        if (static_cast<int>(v.size()) != cols_) throw Error(ErrorKind::DimensionMismatch, "matrix-vector size mismatch");
        IntVec r(static_cast<std::size_t>(rows_), 0);
        for (int i = 0; i < rows_; ++i) {
            __int128 acc = 0;
            for (int j = 0; j < cols_; ++j) acc += static_cast<__int128>((*this)(i, j)) * v[j];
            r[i] = narrow(acc);
        }
        return r;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols_ != o.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product size mismatch");
        IntMatrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < o.cols_; ++j) {
                __int128 acc = 0;
                for (int k = 0; k < cols_; ++k) acc += static_cast<__int128>((*this)(i, k)) * o(k, j);
                r(i, j) = narrow(acc);
            }
        return r;
    }

    IntMatrix operator-(const IntMatrix& o) const {
        IntMatrix r(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = sub_checked(data_[k], o.data_[k]);
        return r;
    }

    bool operator==(const IntMatrix& o) const = default;

    std::string to_string() const {
        if (rows_ == 1 && cols_ == 1) return std::to_string(data_[0]);
        std::string s = "[";
        for (int i = 0; i < rows_; ++i) {
            if (i) s += ",";
            s += "[";
            for (int j = 0; j < cols_; ++j) {
                if (j) s += ",";
                s += std::to_string((*this)(i, j));
            }
            s += "]";
        }
        return s + "]";
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Int> data_;
};

// Fraction-free Gaussian elimination (Bareiss); every division is exact.
inline Int determinant(const IntMatrix& a) {
    const int n = a.rows();
    if (n != a.cols()) throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
    if (n == 0) return 1;
    std::vector<std::vector<__int128>> m(n, std::vector<__int128>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = a(i, j);
    int sign = 1;
    __int128 prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                __int128 v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = v / prev;
                narrow(m[i][j]);
            }
        prev = m[k][k];
    }
    return narrow(sign * m[n - 1][n - 1]);
}

inline IntMatrix adjugate(const IntMatrix& a) {
    const int n = a.rows();
    IntMatrix adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMatrix minor(n - 1, n - 1);
            for (int r = 0, mr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, mc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(mr, mc++) = a(r, c);
                }
                ++mr;
            }
            Int cof = determinant(minor);
            adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
        }
    return adj;
}

// Coefficients c_0..c_n of det(xI - A), via Faddeev-LeVerrier (exact).
inline std::vector<Int> characteristic_polynomial(const IntMatrix& a) {
    const int n = a.rows();
    std::vector<Int> c(static_cast<std::size_t>(n + 1), 0);
    c[n] = 1;
    IntMatrix m(n, n);
    for (int k = 1; k <= n; ++k) {
        IntMatrix am = a * m;
        for (int i = 0; i < n; ++i) am(i, i) = add_checked(am(i, i), c[n - k + 1]);
        m = am;
        IntMatrix t = a * m;
        Int tr = 0;
        for (int i = 0; i < n; ++i) tr = add_checked(tr, t(i, i));
        c[n - k] = -tr / k;
    }
    return c;
}

inline std::vector<std::complex<double>> polynomial_roots(const std::vector<Int>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    if (n == 1) return {std::complex<double>(-static_cast<double>(c[0]), 0.0)};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -static_cast<double>(c[i]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<std::complex<double>> roots;
    for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i]);
    return roots;
}

inline constexpr double kExpansiveMargin = 1e-9;

inline bool is_expansive(const IntMatrix& q) {
    for (auto& z : polynomial_roots(characteristic_polynomial(q)))
        if (std::abs(z) - 1.0 <= kExpansiveMargin) return false;
    return true;
}

// The linear part Q shared by all maps of a system.
class ExpansionMap {
public:
    ExpansionMap() = default;

    explicit ExpansionMap(IntMatrix q) : q_(std::move(q)) {
        if (q_.rows() < 1 || q_.rows() != q_.cols())
            throw Error(ErrorKind::InvalidInput, "expansion matrix must be square and non-empty");
        det_ = determinant(q_);
        if (det_ == 0) throw Error(ErrorKind::InvalidInput, "expansion matrix is singular");
        if (!is_expansive(q_))
            throw Error(ErrorKind::InvalidInput, "expansion matrix " + q_.to_string() + " is not expansive");
        adj_ = adjugate(q_);
    }

    static ExpansionMap scalar(int d, Int c) { return ExpansionMap(IntMatrix::scalar(d, c)); }

    int dim() const { return q_.rows(); }
    const IntMatrix& matrix() const { return q_; }
    Int det() const { return det_; }
    Int abs_det() const { return det_ < 0 ? -det_ : det_; }

    IntVec apply(const IntVec& v) const { return q_ * v; }

    // Q^{-1} v, which must be integral.
    IntVec solve(const IntVec& v) const {
        IntVec w = adj_ * v;
        for (Int& x : w) {
            if (x % det_ != 0) throw Error(ErrorKind::InvalidInput, "vector not in the image of Q");
            x /= det_;
        }
        return w;
    }

    // Only used for powers of one map, which stay expansive; skip the numeric check.
    ExpansionMap then(const ExpansionMap& inner) const { return ExpansionMap(q_ * inner.q_, Trusted{}); }

    ExpansionMap power(int k) const {
        ExpansionMap r(IntMatrix::identity(dim()), Trusted{});
        for (int i = 0; i < k; ++i) r = ExpansionMap(q_ * r.q_, Trusted{});
        return r;
    }

    bool operator==(const ExpansionMap& o) const { return q_ == o.q_; }

private:
    struct Trusted {};
    ExpansionMap(IntMatrix q, Trusted) : q_(std::move(q)) {
        det_ = determinant(q_);
        adj_ = adjugate(q_);
    }

    IntMatrix q_;
    IntMatrix adj_;
    Int det_ = 1;
};

// ---- lattices --------------------------------------------------------------

class Sublattice;

// Incremental column Hermite form that tolerates rank deficiency.  Column for
// pivot row i has its last nonzero entry in row i, positive; entries in other
// pivot rows are reduced into [0, pivot).
class LatticeBuilder {
public:
    explicit LatticeBuilder(int d) : d_(d), piv_(static_cast<std::size_t>(d)) {}

    int dim() const { return d_; }

    int rank() const {
        return static_cast<int>(std::count_if(piv_.begin(), piv_.end(), [](const IntVec& v) { return !v.empty(); }));
    }

    bool full_rank() const { return rank() == d_; }

    bool contains(IntVec v) const {
        for (int i = d_ - 1; i >= 0; --i) {
            if (v[i] == 0) continue;
            if (piv_[i].empty() || v[i] % piv_[i][i] != 0) return false;
            v = sub_multiple(v, v[i] / piv_[i][i], piv_[i]);
        }
        return true;
    }

    // Returns true if the generated group grew.
    bool add(IntVec v) {
        if (static_cast<int>(v.size()) != d_) throw Error(ErrorKind::DimensionMismatch, "generator of wrong dimension");
        if (contains(v)) return false;
        for (int i = d_ - 1; i >= 0; --i) {
            if (v[i] == 0) continue;
            if (piv_[i].empty()) {
                if (v[i] < 0) v = scale(-1, v);
                piv_[i] = v;
                break;
            }
            IntVec& b = piv_[i];
            ExtGcd e = ext_gcd(b[i], v[i]);
            IntVec nb = modco::add(scale(e.s, b), scale(e.t, v));
            IntVec rem = sub(scale(b[i] / e.g, v), scale(v[i] / e.g, b));
            b = nb;
            v = rem;
            reduce_partial(v, i);
        }
        normalize();
        return true;
    }

    bool operator==(const LatticeBuilder& o) const { return piv_ == o.piv_; }

    const std::vector<IntVec>& pivots() const { return piv_; }

    Sublattice lattice() const;

private:
    // Shrink entries of v in rows below `above` using existing pivots.
    void reduce_partial(IntVec& v, int above) const {
        for (int r = above - 1; r >= 0; --r)
            if (!piv_[r].empty()) v = sub_multiple(v, floor_div(v[r], piv_[r][r]), piv_[r]);
    }

    void normalize() {
        for (int j = 0; j < d_; ++j) {
            if (piv_[j].empty()) continue;
            for (int r = j - 1; r >= 0; --r)
                if (!piv_[r].empty()) piv_[j] = sub_multiple(piv_[j], floor_div(piv_[j][r], piv_[r][r]), piv_[r]);
        }
    }

    int d_;
    std::vector<IntVec> piv_;
};

// Full-rank subgroup of Z^d in canonical (upper triangular, column) Hermite form.
class Sublattice {
public:
    Sublattice() = default;

    static Sublattice standard(int d) {
        Sublattice s;
        s.d_ = d;
        for (int j = 0; j < d; ++j) {
            IntVec c = zero_vec(d);
            c[j] = 1;
            s.cols_.push_back(c);
        }
        return s;
    }

    int dim() const { return d_; }
    const std::vector<IntVec>& columns() const { return cols_; }
    IntMatrix basis() const { return IntMatrix::from_columns(cols_, d_); }
    Int diagonal(int i) const { return cols_[i][i]; }

    Int det() const {
        Int p = 1;
        for (int i = 0; i < d_; ++i) p = mul_checked(p, cols_[i][i]);
        return p;
    }

    IntVec reduce(IntVec x) const {
        if (static_cast<int>(x.size()) != d_) throw Error(ErrorKind::DimensionMismatch, "vector of wrong dimension");
        for (int i = d_ - 1; i >= 0; --i) x = sub_multiple(x, floor_div(x[i], cols_[i][i]), cols_[i]);
        return x;
    }

    bool contains(const IntVec& x) const { return is_zero(reduce(x)); }

    bool contains(const Sublattice& inner) const {
        return std::all_of(inner.cols_.begin(), inner.cols_.end(), [&](const IntVec& c) { return contains(c); });
    }

    // The lattice M·L.
    Sublattice image(const IntMatrix& m) const;

    bool operator==(const Sublattice& o) const { return d_ == o.d_ && cols_ == o.cols_; }

    // "2Z" style in 1D, basis matrix otherwise.
    std::string to_string() const {
        if (d_ == 1) return cols_[0][0] == 1 ? "Z" : std::to_string(cols_[0][0]) + "Z";
        return basis().to_string();
    }

private:
    friend class LatticeBuilder;
    int d_ = 0;
    std::vector<IntVec> cols_;
};

inline Sublattice LatticeBuilder::lattice() const {
    if (!full_rank())
        throw Error(ErrorKind::RankDeficient, "generators span a rank " + std::to_string(rank()) + " subgroup of Z^" +
                                                  std::to_string(d_));
    Sublattice s;
    s.d_ = d_;
    s.cols_ = piv_;
    return s;
}

inline Sublattice hnf(const std::vector<IntVec>& generators, int d) {
    LatticeBuilder b(d);
    for (const auto& g : generators) b.add(g);
    return b.lattice();
}

inline Sublattice Sublattice::image(const IntMatrix& m) const {
    std::vector<IntVec> gens;
    for (const auto& c : cols_) gens.push_back(m * c);
    return hnf(gens, d_);
}

inline Int index(const Sublattice& outer, const Sublattice& inner) {
    if (outer.dim() != inner.dim()) throw Error(ErrorKind::DimensionMismatch, "lattices of different dimension");
    if (!outer.contains(inner))
        throw Error(ErrorKind::NotNested, inner.to_string() + " is not contained in " + outer.to_string());
    return inner.det() / outer.det();
}

struct CosetLabel {
    Sublattice ambient;
    Sublattice modulus;
    IntVec representative;

    bool operator==(const CosetLabel& o) const {
        return modulus == o.modulus && representative == o.representative;
    }
    bool operator<(const CosetLabel& o) const { return representative < o.representative; }
};

inline CosetLabel coset_reduce(const IntVec& x, const Sublattice& modulus) {
    return {Sublattice::standard(modulus.dim()), modulus, modulus.reduce(x)};
}

// Reduced representatives of outer/inner, lexicographically sorted (0 first).
inline std::vector<IntVec> coset_representative_vectors(const Sublattice& outer, const Sublattice& inner) {
    index(outer, inner);  // containment check
    const int d = outer.dim();
    std::vector<IntVec> out;
    // Points A·c of the outer lattice inside the box prod [0, B_ii); fixed
    // from the last coordinate up because A is upper triangular.
    std::vector<Int> c(static_cast<std::size_t>(d), 0);
    std::function<void(int, IntVec)> rec = [&](int i, IntVec partial) {
        if (i < 0) {
            out.push_back(partial);
            return;
        }
        const Int a = outer.diagonal(i);
        const Int b = inner.diagonal(i);
        // partial[i] + a*c_i in [0, b)
        Int lo = floor_div(-partial[i] + a - 1, a);
        for (Int ci = lo; partial[i] + a * ci < b; ++ci)
            rec(i - 1, add(partial, scale(ci, outer.columns()[i])));
    };
    rec(d - 1, zero_vec(d));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<CosetLabel> coset_representatives(const Sublattice& outer, const Sublattice& inner) {
    std::vector<CosetLabel> labels;
    for (auto& r : coset_representative_vectors(outer, inner)) labels.push_back({outer, inner, r});
    return labels;
}

// ---- Q-adic digits ---------------------------------------------------------

// A validated system of representatives of Z^d / QZ^d.
class Transversal {
public:
    Transversal(const ExpansionMap& q, std::vector<IntVec> reps)
        : qlat_(Sublattice::standard(q.dim()).image(q.matrix())), reps_(std::move(reps)) {
        if (static_cast<Int>(reps_.size()) != q.abs_det())
            throw Error(ErrorKind::BadTransversal, "transversal has " + std::to_string(reps_.size()) +
                                                       " elements but |det Q| = " + std::to_string(q.abs_det()));
        for (std::size_t i = 0; i < reps_.size(); ++i) {
            if (static_cast<int>(reps_[i].size()) != q.dim())
                throw Error(ErrorKind::DimensionMismatch, "digit of wrong dimension");
            auto [it, fresh] = by_class_.emplace(qlat_.reduce(reps_[i]), i);
            if (!fresh)
                throw Error(ErrorKind::BadTransversal, "digits " + format_vec(reps_[it->second]) + " and " +
                                                           format_vec(reps_[i]) + " are congruent mod QZ^d");
        }
    }

    const std::vector<IntVec>& digits() const { return reps_; }
    const Sublattice& q_lattice() const { return qlat_; }

    std::size_t index_of(const IntVec& x) const { return by_class_.at(qlat_.reduce(x)); }

private:
    Sublattice qlat_;
    std::vector<IntVec> reps_;
    std::map<IntVec, std::size_t> by_class_;
};

struct QadicExpansion {
    std::vector<IntVec> digits;  // alpha_1 .. alpha_k
    IntVec remainder;            // x = alpha_1 + Q alpha_2 + ... + Q^{k-1} alpha_k + Q^k remainder
};

inline QadicExpansion qadic_expansion(IntVec x, const ExpansionMap& q, int k, const Transversal& t) {
    QadicExpansion e;
    for (int i = 0; i < k; ++i) {
        const IntVec& a = t.digits()[t.index_of(x)];
        e.digits.push_back(a);
        x = q.solve(sub(x, a));
    }
    e.remainder = x;
    return e;
}

inline std::vector<IntVec> qadic_digits(const IntVec& x, const ExpansionMap& q, int k,
                                        const std::vector<IntVec>& transversal) {
    return qadic_expansion(x, q, k, Transversal(q, transversal)).digits;
}

inline IntVec evaluate_digits(const std::vector<IntVec>& digits, const ExpansionMap& q) {
    IntVec x = zero_vec(q.dim());
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) x = add(q.apply(x), *it);
    return x;
}

}  // namespace modco
