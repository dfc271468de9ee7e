#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "perfdel/linalg.hpp"

namespace perfdel {

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::optional<QVec> x;
    std::optional<Rat> value;
    std::vector<size_t> tight;  // indices of constraints active at the optimum
};

/// Exact rational simplex for: maximize objective·x subject to a·x <= b over
/// free x. Bland's rule on both pivot choices, so termination is guaranteed
/// and the result is deterministic. Free variables are split x = u - w.
inline LpResult lp_max_exact(const QVec& objective,
                             const std::vector<std::pair<QVec, Rat>>& constraints) {
    const size_t n = objective.dim();
    const size_t m = constraints.size();
    for (const auto& [a, b] : constraints)
        if (a.dim() != n) throw std::invalid_argument("lp_max_exact: dimension mismatch");

    const size_t nstruct = 2 * n;          // u, w split
    const size_t nslack = m;
    size_t nart = 0;
    std::vector<bool> negated(m, false);
    for (size_t i = 0; i < m; ++i)
        if (constraints[i].second < Rat(0)) {
            negated[i] = true;
            ++nart;
        }
    const size_t ncols = nstruct + nslack + nart;

    // tableau: m constraint rows, column layout [u w slack art | rhs]
    std::vector<std::vector<Rat>> T(m + 1, std::vector<Rat>(ncols + 1));
    std::vector<size_t> basis(m);
    {
        size_t art = nstruct + nslack;
        for (size_t i = 0; i < m; ++i) {
            const auto& [a, b] = constraints[i];
            Rat s = negated[i] ? Rat(-1) : Rat(1);
            for (size_t j = 0; j < n; ++j) {
                T[i][j] = s * a[j];
                T[i][n + j] = -s * a[j];
            }
            T[i][nstruct + i] = s;  // slack coefficient (negated rows carry -1)
            T[i][ncols] = s * b;
            if (negated[i]) {
                T[i][art] = 1;
                basis[i] = art++;
            } else {
                basis[i] = nstruct + i;
            }
        }
    }

    auto pivot = [&](size_t row, size_t col) {
        Rat p = T[row][col];
        for (auto& v : T[row]) v = v / p;
        for (size_t i = 0; i <= m; ++i) {
            if (i == row || T[i][col].is_zero()) continue;
            Rat f = T[i][col];
            for (size_t j = 0; j <= ncols; ++j) T[i][j] -= f * T[row][j];
        }
        basis[row] = col;
    };

    // runs the simplex loop on the current reduced-cost row T[m];
    // returns false on unboundedness
    auto solve_loop = [&](size_t active_cols) -> bool {
        for (;;) {
            size_t enter = active_cols;
            for (size_t j = 0; j < active_cols; ++j) {
                if (T[m][j] > Rat(0)) {
                    enter = j;
                    break;
                }
            }
            if (enter == active_cols) return true;  // optimal
            size_t leave = m;
            Rat best;
            for (size_t i = 0; i < m; ++i) {
                if (T[i][enter] <= Rat(0)) continue;
                Rat ratio = T[i][ncols] / T[i][enter];
                if (leave == m || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m) return false;  // unbounded direction
            pivot(leave, enter);
        }
    };

    // reduced costs c_j - c_B B^-1 A_j for a given cost vector over all
    // columns; the rhs cell holds the negated objective value, which is the
    // quantity the uniform pivot update preserves
    auto set_objective_row = [&](const std::vector<Rat>& c) {
        for (size_t j = 0; j <= ncols; ++j) {
            Rat r = (j < ncols) ? c[j] : Rat(0);
            for (size_t i = 0; i < m; ++i) {
                if (!c[basis[i]].is_zero()) r -= c[basis[i]] * T[i][j];
            }
            T[m][j] = r;
        }
    };

    LpResult res;

    if (nart > 0) {
        std::vector<Rat> c1(ncols);
        for (size_t j = nstruct + nslack; j < ncols; ++j) c1[j] = -1;
        set_objective_row(c1);
        if (!solve_loop(ncols)) throw std::logic_error("lp_max_exact: phase 1 unbounded");
        if (T[m][ncols] > Rat(0)) {  // rhs cell is -z; z < 0 means artificials remain
            res.status = LpStatus::Infeasible;
            return res;
        }
        // drive remaining artificials out of the basis
        for (size_t i = 0; i < m; ++i) {
            if (basis[i] < nstruct + nslack) continue;
            size_t col = nstruct + nslack;
            for (size_t j = 0; j < nstruct + nslack; ++j) {
                if (!T[i][j].is_zero()) {
                    col = j;
                    break;
                }
            }
            if (col < nstruct + nslack) pivot(i, col);
            // else the row is redundant; its artificial stays basic at value 0
        }
    }

    std::vector<Rat> c2(ncols);
    for (size_t j = 0; j < n; ++j) {
        c2[j] = objective[j];
        c2[n + j] = -objective[j];
    }
    set_objective_row(c2);
    if (!solve_loop(nstruct + nslack)) {
        res.status = LpStatus::Unbounded;
        return res;
    }

    QVec x(n);
    for (size_t i = 0; i < m; ++i) {
        if (basis[i] < n)
            x[basis[i]] += T[i][ncols];
        else if (basis[i] < nstruct)
            x[basis[i] - n] -= T[i][ncols];
    }
    res.status = LpStatus::Optimal;
    res.value = dot(objective, x);
    for (size_t i = 0; i < m; ++i)
        if (dot(constraints[i].first, x) == constraints[i].second) res.tight.push_back(i);
    res.x = std::move(x);
    return res;
}

}  // namespace perfdel
