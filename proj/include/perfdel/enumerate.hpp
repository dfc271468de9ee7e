#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "perfdel/lattice.hpp"
#include "perfdel/qform.hpp"

namespace perfdel {

struct EnumResult {
    Rat min_value;                 // meaningful only when !minimizers.empty()
    std::vector<QVec> minimizers;  // sorted lexicographically
    std::vector<QVec> all_inside;  // sorted lexicographically (when requested)
};

namespace detail {

/// Depth-first enumeration over integer coefficient vectors t with
/// (t - tc)^T G (t - tc) <= rho, G positive definite, everything exact.
/// Layer bounds are computed with integer square roots on scaled integers.
class CoeffEnumerator {
public:
    CoeffEnumerator(QMat G, QVec tc, Rat rho) : m_(G.rows), tc_(std::move(tc)), rho_(std::move(rho)) {
        perm_.resize(m_);
        for (size_t i = 0; i < m_; ++i) perm_[i] = i;

        // rational Cholesky-style completion with greedy diagonal pivoting:
        // Q(v) = sum_i q[i][i] (v_i + sum_{j>i} q[i][j] v_j)^2, arranged so
        // the decomposition diagonal decreases towards the tree root (the
        // last level, searched first); ties break on the original index
        q_ = std::move(G);
        for (size_t i = 0; i < m_; ++i) {
            size_t p = i;
            for (size_t j = i + 1; j < m_; ++j) {
                if (q_.at(j, j) < q_.at(p, p) ||
                    (q_.at(j, j) == q_.at(p, p) && perm_[j] < perm_[p]))
                    p = j;
            }
            if (p != i) {
                std::swap(perm_[i], perm_[p]);
                std::swap(tc_[i], tc_[p]);
                for (size_t c = 0; c < m_; ++c) std::swap(q_.at(i, c), q_.at(p, c));
                for (size_t r = 0; r < m_; ++r) std::swap(q_.at(r, i), q_.at(r, p));
            }
            if (q_.at(i, i) <= Rat(0))
                throw std::invalid_argument("enumeration: form not positive definite");
            for (size_t j = i + 1; j < m_; ++j) {
                Rat saved = q_.at(i, j);
                q_.at(j, i) = saved;
                q_.at(i, j) = saved / q_.at(i, i);
            }
            // full symmetric Schur update so later diagonal pivot swaps stay valid
            for (size_t l = i + 1; l < m_; ++l)
                for (size_t j = i + 1; j < m_; ++j)
                    q_.at(l, j) -= q_.at(l, i) * q_.at(i, j);
        }
    }

    /// Collects all (t, value) pairs; t in original (unpermuted) coordinates.
    std::vector<std::pair<std::vector<Int>, Rat>> run() const {
        std::vector<std::pair<std::vector<Int>, Rat>> out;
        if (rho_ < Rat(0) || m_ == 0) {
            if (m_ == 0 && rho_ >= Rat(0)) out.push_back({{}, Rat(0)});
            return out;
        }
        std::vector<Int> t(m_);
        std::vector<Rat> v(m_);  // v_i = t_i - tc_i once fixed
        descend(m_ - 1, rho_, t, v, out);
        return out;
    }

private:
    void descend(size_t level, const Rat& budget, std::vector<Int>& t, std::vector<Rat>& v,
                 std::vector<std::pair<std::vector<Int>, Rat>>& out) const {
        // offset from already-fixed deeper coordinates
        Rat u;
        for (size_t j = level + 1; j < m_; ++j) {
            if (!q_.at(level, j).is_zero()) u += q_.at(level, j) * v[j];
        }
        const Rat w = u - tc_[level];  // term is q_ii (t + w)^2

        // integer range: (t*b + a)^2 <= floor(p*b^2 / qq) with w = a/b, R = p/qq
        const Rat R = budget / q_.at(level, level);
        const Int a = w.num(), b = w.den();
        const Int F = floor_div(R.num() * b * b, R.den());
        if (F < 0) return;
        const Int W = isqrt_floor(F);
        Int lo = ceil_div(-W - a, b);
        Int hi = floor_div(W - a, b);

        for (Int ti = lo; ti <= hi; ++ti) {
            Rat vi = Rat(ti) + w;  // t_i + offset (tc folded into w)
            Rat used = q_.at(level, level) * vi * vi;
            if (used > budget) continue;  // isqrt window is tight, but keep the exact guard
            t[level] = ti;
            v[level] = Rat(ti) - tc_[level];
            if (level == 0) {
                std::vector<Int> orig(m_);
                for (size_t i = 0; i < m_; ++i) orig[perm_[i]] = t[i];
                out.push_back({std::move(orig), rho_ - (budget - used)});  // = Q(t - tc)
            } else {
                descend(level - 1, budget - used, t, v, out);
            }
        }
    }

    size_t m_;
    QVec tc_;
    Rat rho_;
    QMat q_;
    std::vector<size_t> perm_;
};

struct AffineProblem {
    QVec origin;   // z0
    QMat basis;    // columns span the translation lattice
    QMat G;        // basis^T gram basis
    QVec w;        // basis^T gram (z0 - c)
    Rat q0;        // phi[z0 - c]
};

inline AffineProblem make_affine(const QForm& phi, const QVec& center, const LatticeCoset& C) {
    if (phi.dim != C.dim() || center.dim() != C.dim())
        throw std::invalid_argument("enumeration: dimension mismatch");
    AffineProblem P;
    P.origin = C.rep_point;
    P.basis = C.translation.basis;
    const size_t m = P.basis.cols;
    QMat GB = mul(phi.gram, P.basis);
    P.G = mul(P.basis.transpose(), GB);
    QVec d0 = P.origin - center;
    P.w = QVec(m);
    for (size_t j = 0; j < m; ++j) P.w[j] = dot(GB.col(j), d0);
    P.q0 = eval_form(phi, d0);
    return P;
}

}  // namespace detail

/// All coset points z with phi[z - c] <= r2, exactly. Requires phi positive
/// definite on the coset's direction space.
inline EnumResult enum_ellipsoid(const QForm& phi, const QVec& center, const Rat& r2,
                                 const LatticeCoset& C) {
    EnumResult res;
    if (C.empty) return res;
    auto P = detail::make_affine(phi, center, C);
    const size_t m = P.basis.cols;

    // complete the square over the coefficient space:
    // value(t) = (t - tc)^T G (t - tc) + qmin
    auto sol = rank_solve(P.G, -P.w);
    if (!sol.particular || !sol.nullspace.empty())
        throw std::invalid_argument("enum_ellipsoid: form degenerate on coset direction space");
    QVec tc = *sol.particular;
    Rat qmin = P.q0 + dot(P.w, tc);
    Rat rho = r2 - qmin;

    detail::CoeffEnumerator en(P.G, tc, rho);
    std::vector<std::pair<QVec, Rat>> pts;
    for (auto& [t, val] : en.run()) {
        QVec coeff(m);
        for (size_t i = 0; i < m; ++i) coeff[i] = Rat(t[i]);
        pts.push_back({P.origin + mul(P.basis, coeff), val + qmin});
    }
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    bool have_min = false;
    Rat mn;
    for (const auto& [z, val] : pts) {
        if (!have_min || val < mn) {
            mn = val;
            have_min = true;
        }
    }
    for (auto& [z, val] : pts) {
        if (val == mn) res.minimizers.push_back(z);
        res.all_inside.push_back(std::move(z));
    }
    if (have_min) res.min_value = mn;
    return res;
}

/// Global minimum of phi[z - center] over the coset, skipping the points in
/// `exclude` (sorted). The exclusion set must not cover the whole coset.
inline EnumResult min_over_coset_centered(const QForm& phi, const QVec& center,
                                          const LatticeCoset& C,
                                          const std::vector<QVec>& exclude = {}) {
    if (C.empty) throw std::invalid_argument("min_over_coset: empty coset");
    auto P = detail::make_affine(phi, center, C);
    const size_t m = P.basis.cols;

    auto sol = rank_solve(P.G, -P.w);
    if (!sol.particular || !sol.nullspace.empty())
        throw std::invalid_argument("min_over_coset: form degenerate on coset direction space");
    QVec tc = *sol.particular;

    auto excluded = [&](const QVec& z) {
        return std::binary_search(exclude.begin(), exclude.end(), z);
    };

    // upper bound from actual coset points: the rounded center's neighborhood
    // plus, when those are all excluded, neighbors of the excluded points (a
    // finite exclusion set cannot be closed under basis translations)
    std::optional<Rat> ub;
    auto consider_t = [&](const QVec& t) {
        QVec z = P.origin + mul(P.basis, t);
        if (excluded(z)) return;
        Rat v = eval_form(phi, z - center);
        if (!ub || v < *ub) ub = v;
    };
    QVec t0(m);
    for (size_t i = 0; i < m; ++i) t0[i] = Rat(tc[i].round_nearest());
    consider_t(t0);
    for (size_t i = 0; i < m; ++i) {
        QVec tp = t0, tm = t0;
        tp[i] += 1;
        tm[i] -= 1;
        consider_t(tp);
        consider_t(tm);
    }
    if (!ub) {
        for (const auto& z : exclude) {
            auto zt = C.translation.coords_of(z - P.origin);
            if (!zt || !zt->is_integral()) continue;
            for (size_t i = 0; i < m; ++i) {
                QVec tp = *zt, tm = *zt;
                tp[i] += 1;
                tm[i] -= 1;
                consider_t(tp);
                consider_t(tm);
            }
        }
    }
    if (!ub) throw std::logic_error("min_over_coset: no candidate point outside exclusion set");

    auto full = enum_ellipsoid(phi, center, *ub, C);
    EnumResult res;
    bool have = false;
    for (const auto& z : full.all_inside) {
        if (excluded(z)) continue;
        Rat v = eval_form(phi, z - center);
        if (!have || v < res.min_value) {
            res.min_value = v;
            res.minimizers.clear();
            have = true;
        }
        if (v == res.min_value) res.minimizers.push_back(z);
    }
    if (!have) throw std::logic_error("min_over_coset: enumeration found no admissible point");
    return res;
}

/// Global minimum of phi over the coset, with the complete minimizer list.
/// With exclude_zero, the origin is ignored (it must not be the only point).
inline EnumResult min_over_coset(const QForm& phi, const LatticeCoset& C, bool exclude_zero) {
    std::vector<QVec> excl;
    if (exclude_zero) excl.push_back(QVec(C.dim()));
    return min_over_coset_centered(phi, QVec(C.dim()), C, excl);
}

/// Minimum of phi over { z in L : z = rep mod 2L } with complete minimizer list.
inline EnumResult shortest_in_parity_class(const QForm& phi, const LatticeBasis& L,
                                           const QVec& rep) {
    if (!L.contains(rep))
        throw std::invalid_argument("shortest_in_parity_class: rep not in the lattice");
    QMat doubled = L.basis;
    for (auto& x : doubled.a) x = Rat(2) * x;
    auto coset = LatticeCoset::shifted(LatticeBasis(L.dim, std::move(doubled)), rep);
    return min_over_coset(phi, coset, /*exclude_zero=*/false);
}

}  // namespace perfdel
