#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "perfdel/rational.hpp"

namespace perfdel {

/// Dense rational vector.
struct QVec {
    std::vector<Rat> e;

    QVec() = default;
    explicit QVec(size_t dim) : e(dim) {}
    QVec(std::initializer_list<Rat> init) : e(init) {}

    size_t dim() const { return e.size(); }
    Rat& operator[](size_t i) { return e[i]; }
    const Rat& operator[](size_t i) const { return e[i]; }

    static QVec unit(size_t dim, size_t i) {
        QVec v(dim);
        v[i] = 1;
        return v;
    }
    static QVec constant(size_t dim, const Rat& c) {
        QVec v(dim);
        for (auto& x : v.e) x = c;
        return v;
    }

    bool is_zero() const {
        return std::all_of(e.begin(), e.end(), [](const Rat& x) { return x.is_zero(); });
    }
    bool is_integral() const {
        return std::all_of(e.begin(), e.end(), [](const Rat& x) { return x.is_integer(); });
    }

    friend QVec operator+(const QVec& a, const QVec& b) {
        QVec r(a.dim());
        for (size_t i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
        return r;
    }
    friend QVec operator-(const QVec& a, const QVec& b) {
        QVec r(a.dim());
        for (size_t i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
        return r;
    }
    QVec operator-() const {
        QVec r(dim());
        for (size_t i = 0; i < dim(); ++i) r[i] = -e[i];
        return r;
    }
    friend QVec operator*(const Rat& c, const QVec& a) {
        QVec r(a.dim());
        for (size_t i = 0; i < a.dim(); ++i) r[i] = c * a[i];
        return r;
    }

    friend bool operator==(const QVec& a, const QVec& b) { return a.e == b.e; }
    friend bool operator!=(const QVec& a, const QVec& b) { return !(a == b); }
    /// Lexicographic order on entries; the canonical order for all output lists.
    friend bool operator<(const QVec& a, const QVec& b) {
        if (a.dim() != b.dim()) return a.dim() < b.dim();
        for (size_t i = 0; i < a.dim(); ++i) {
            if (a[i] != b[i]) return a[i] < b[i];
        }
        return false;
    }
};

inline Rat dot(const QVec& a, const QVec& b) {
    Rat s;
    for (size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

/// Sum of entries.
inline Rat entry_sum(const QVec& a) {
    Rat s;
    for (const auto& x : a.e) s += x;
    return s;
}

/// Dense rational matrix, row-major.
struct QMat {
    size_t rows = 0, cols = 0;
    std::vector<Rat> a;

    QMat() = default;
    QMat(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}

    Rat& at(size_t i, size_t j) { return a[i * cols + j]; }
    const Rat& at(size_t i, size_t j) const { return a[i * cols + j]; }

    static QMat identity(size_t n) {
        QMat m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    QVec row(size_t i) const {
        QVec v(cols);
        for (size_t j = 0; j < cols; ++j) v[j] = at(i, j);
        return v;
    }
    QVec col(size_t j) const {
        QVec v(rows);
        for (size_t i = 0; i < rows; ++i) v[i] = at(i, j);
        return v;
    }
    void set_col(size_t j, const QVec& v) {
        for (size_t i = 0; i < rows; ++i) at(i, j) = v[i];
    }

    QMat transpose() const {
        QMat m(cols, rows);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    bool is_symmetric() const {
        if (rows != cols) return false;
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = i + 1; j < cols; ++j)
                if (at(i, j) != at(j, i)) return false;
        return true;
    }

    friend bool operator==(const QMat& x, const QMat& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
    friend bool operator!=(const QMat& x, const QMat& y) { return !(x == y); }
};

inline QVec mul(const QMat& m, const QVec& v) {
    QVec r(m.rows);
    for (size_t i = 0; i < m.rows; ++i) {
        Rat s;
        for (size_t j = 0; j < m.cols; ++j) s += m.at(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline QMat mul(const QMat& x, const QMat& y) {
    QMat r(x.rows, y.cols);
    for (size_t i = 0; i < x.rows; ++i)
        for (size_t k = 0; k < x.cols; ++k) {
            if (x.at(i, k).is_zero()) continue;
            for (size_t j = 0; j < y.cols; ++j) r.at(i, j) += x.at(i, k) * y.at(k, j);
        }
    return r;
}

namespace detail {

/// Row-scales a rational matrix to integers; scaling rows preserves rank,
/// solution sets of [A|b], and nullspaces.
inline std::vector<std::vector<Int>> scale_rows_integral(const QMat& m) {
    std::vector<std::vector<Int>> z(m.rows, std::vector<Int>(m.cols));
    for (size_t i = 0; i < m.rows; ++i) {
        Int l = 1;
        for (size_t j = 0; j < m.cols; ++j) l = lcm(l, m.at(i, j).den());
        for (size_t j = 0; j < m.cols; ++j) z[i][j] = m.at(i, j).num() * (l / m.at(i, j).den());
    }
    return z;
}

}  // namespace detail

struct RankSolveResult {
    size_t rank = 0;
    std::optional<QVec> particular;  // absent when A·x = b is inconsistent
    std::vector<QVec> nullspace;     // basis of ker(A), integer coprime, first nonzero positive
};

/// Exact rank, particular solution, and nullspace of A·x = b by fraction-free
/// (Bareiss) Gaussian elimination. rank + |nullspace| = cols(A).
inline RankSolveResult rank_solve(const QMat& A, const QVec& b) {
    if (A.rows != b.dim()) throw std::invalid_argument("rank_solve: dimension mismatch");
    const size_t m = A.rows, n = A.cols;

    QMat aug(m, n + 1);
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, n) = b[i];
    }
    auto M = detail::scale_rows_integral(aug);

    std::vector<size_t> pivot_col;
    Int prev = 1;
    size_t r = 0;
    for (size_t c = 0; c < n && r < m; ++c) {
        size_t p = r;
        while (p < m && M[p][c] == 0) ++p;
        if (p == m) continue;
        std::swap(M[p], M[r]);
        for (size_t i = r + 1; i < m; ++i) {
            for (size_t j = c + 1; j <= n; ++j) {
                Int t = M[r][c] * M[i][j] - M[i][c] * M[r][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                M[i][j] = t;
            }
            M[i][c] = 0;
        }
        prev = M[r][c];
        pivot_col.push_back(c);
        ++r;
    }

    RankSolveResult res;
    res.rank = pivot_col.size();

    bool consistent = true;
    for (size_t i = res.rank; i < m; ++i) {
        if (M[i][n] != 0) {
            consistent = false;
            break;
        }
    }

    std::vector<bool> is_pivot(n, false);
    for (size_t c : pivot_col) is_pivot[c] = true;

    auto back_substitute = [&](QVec x, bool use_rhs) {
        for (size_t k = res.rank; k-- > 0;) {
            size_t c = pivot_col[k];
            Rat s = use_rhs ? Rat(M[k][n]) : Rat(0);
            for (size_t j = c + 1; j < n; ++j) {
                if (M[k][j] != 0) s -= Rat(M[k][j]) * x[j];
            }
            x[c] = s / Rat(M[k][c]);
        }
        return x;
    };

    if (consistent) res.particular = back_substitute(QVec(n), true);

    for (size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        QVec x(n);
        x[f] = 1;
        x = back_substitute(std::move(x), false);
        // canonical scaling: integer coprime entries, first nonzero positive
        Int l = 1;
        for (const auto& v : x.e) l = lcm(l, v.den());
        Int g = 0;
        for (auto& v : x.e) {
            v = v * Rat(l);
            g = gcd(g, v.num());
        }
        int lead = 0;
        for (const auto& v : x.e) {
            if (!v.is_zero()) {
                lead = v.sign();
                break;
            }
        }
        Rat scale = Rat(lead < 0 ? -g : g);
        for (auto& v : x.e) v = v / scale;
        res.nullspace.push_back(std::move(x));
    }
    return res;
}

/// Exact determinant (Bareiss with row pivoting).
inline Rat determinant(const QMat& A) {
    if (A.rows != A.cols) throw std::invalid_argument("determinant: not square");
    const size_t n = A.rows;
    if (n == 0) return Rat(1);

    // scale rows to integers, track the total scaling factor
    auto M = detail::scale_rows_integral(A);
    Rat factor(1);
    for (size_t i = 0; i < n; ++i) {
        Int l = 1;
        for (size_t j = 0; j < n; ++j) l = lcm(l, A.at(i, j).den());
        factor *= Rat(l);
    }

    Int prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        size_t p = k;
        while (p < n && M[p][k] == 0) ++p;
        if (p == n) return Rat(0);
        if (p != k) {
            std::swap(M[p], M[k]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                Int t = M[k][k] * M[i][j] - M[i][k] * M[k][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                M[i][j] = t;
            }
            M[i][k] = 0;
        }
        prev = M[k][k];
    }
    Int det_scaled = sign * M[n - 1][n - 1];
    return Rat(det_scaled) / factor;
}

/// True iff all leading principal minors of a symmetric matrix are positive.
inline bool is_posdef(const QMat& G) {
    if (!G.is_symmetric()) throw std::invalid_argument("is_posdef: matrix not symmetric");
    const size_t n = G.rows;
    if (n == 0) return true;

    // one global positive scale keeps all minor signs
    Int D = 1;
    for (const auto& x : G.a) D = lcm(D, x.den());
    std::vector<std::vector<Int>> M(n, std::vector<Int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) M[i][j] = G.at(i, j).num() * (D / G.at(i, j).den());

    // Bareiss without pivoting: M[k][k] after k steps is the (k+1)-st leading
    // principal minor of the scaled matrix
    Int prev = 1;
    for (size_t k = 0; k < n; ++k) {
        if (M[k][k] <= 0) return false;
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                Int t = M[k][k] * M[i][j] - M[i][k] * M[k][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                M[i][j] = t;
            }
            M[i][k] = 0;
        }
        prev = M[k][k];
    }
    return true;
}

/// Solves A·x = b for invertible square A; throws if singular.
inline QVec solve_unique(const QMat& A, const QVec& b) {
    auto r = rank_solve(A, b);
    if (!r.particular || !r.nullspace.empty())
        throw std::invalid_argument("solve_unique: matrix is singular");
    return *r.particular;
}

inline std::string to_string(const QVec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.dim(); ++i) {
        if (i) s += ", ";
        s += v[i].str();
    }
    return s + ")";
}

}  // namespace perfdel
