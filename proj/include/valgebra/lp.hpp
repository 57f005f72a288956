#pragma once

#include "valgebra/vec.hpp"

#include <stdexcept>

namespace valgebra {

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class S>
struct LpResult {
    LpStatus status;
    S value;
    Vec<S> x;
};

// Dense two-phase simplex with Bland's rule on min c.x s.t. Ax = b, x >= 0.
// Exact over rationals; small problems only.
template <class S>
LpResult<S> lp_solve_standard(Mat<S> a, Vec<S> b, Vec<S> c) {
    std::size_t m = a.size();
    std::size_t n = c.size();
    for (std::size_t i = 0; i < m; ++i)
        if (b[i] < S(0)) {
            for (auto& v : a[i]) v = -v;
            b[i] = -b[i];
        }

    // Tableau with artificial variables appended.
    std::size_t total = n + m;
    Mat<S> t(m, Vec<S>(total + 1, S(0)));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = S(1);
        t[i][total] = b[i];
        basis[i] = n + i;
    }

    auto pivot = [&](std::size_t row, std::size_t col) {
        S p = t[row][col];
        for (auto& v : t[row]) v /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || t[i][col] == S(0)) continue;
            S f = t[i][col];
            for (std::size_t j = 0; j <= total; ++j) t[i][j] -= f * t[row][j];
        }
        basis[row] = col;
    };

    auto run_phase = [&](const Vec<S>& cost, std::size_t ncols) -> bool {
        // reduced costs recomputed each iteration (Bland's rule; no cycling)
        for (int guard = 0; guard < 100000; ++guard) {
            Vec<S> y(m);
            for (std::size_t i = 0; i < m; ++i) y[i] = cost[basis[i]];
            std::size_t enter = ncols;
            for (std::size_t j = 0; j < ncols; ++j) {
                S red = cost[j];
                for (std::size_t i = 0; i < m; ++i) red -= y[i] * t[i][j];
                if (red < S(0)) {
                    enter = j;
                    break;
                }
            }
            if (enter == ncols) return true; // optimal
            std::size_t leave = m;
            for (std::size_t i = 0; i < m; ++i) {
                if (t[i][enter] <= S(0)) continue;
                if (leave == m) {
                    leave = i;
                    continue;
                }
                S lhs = t[i][total] * t[leave][enter];
                S rhs = t[leave][total] * t[i][enter];
                if (lhs < rhs || (lhs == rhs && basis[i] < basis[leave])) leave = i;
            }
            if (leave == m) return false; // unbounded
            pivot(leave, enter);
        }
        throw std::runtime_error("lp: iteration limit");
    };

    // Phase 1
    Vec<S> cost1(total, S(0));
    for (std::size_t j = n; j < total; ++j) cost1[j] = S(1);
    run_phase(cost1, total);
    S phase1(0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] >= n) phase1 += t[i][total];
    bool feasible;
    if constexpr (scalar_traits<S>::exact)
        feasible = (phase1 == S(0));
    else
        feasible = (to_double(phase1) < 1e-9);
    if (!feasible) return {LpStatus::Infeasible, S(0), {}};

    // Drive leftover artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        std::size_t enter = n;
        for (std::size_t j = 0; j < n; ++j)
            if (t[i][j] != S(0)) {
                enter = j;
                break;
            }
        if (enter < n) pivot(i, enter);
        // otherwise the row is redundant; harmless to keep
    }

    // Phase 2
    Vec<S> cost2(total, S(0));
    for (std::size_t j = 0; j < n; ++j) cost2[j] = c[j];
    if (!run_phase(cost2, n)) return {LpStatus::Unbounded, S(0), {}};

    Vec<S> x(n, S(0));
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) x[basis[i]] = t[i][total];
    S val(0);
    for (std::size_t j = 0; j < n; ++j) val += c[j] * x[j];
    return {LpStatus::Optimal, val, x};
}

/// min c.x subject to G x >= h with x free; free variables are split.
template <class S>
LpResult<S> lp_minimize_free(const Mat<S>& g, const Vec<S>& h, const Vec<S>& c) {
    std::size_t m = g.size();
    std::size_t n = c.size();
    // columns: x+ (n), x- (n), surplus (m)
    Mat<S> a(m, Vec<S>(2 * n + m, S(0)));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = g[i][j];
            a[i][n + j] = -g[i][j];
        }
        a[i][2 * n + i] = S(-1);
    }
    Vec<S> cost(2 * n + m, S(0));
    for (std::size_t j = 0; j < n; ++j) {
        cost[j] = c[j];
        cost[n + j] = -c[j];
    }
    LpResult<S> r = lp_solve_standard(std::move(a), h, cost);
    if (r.status != LpStatus::Optimal) return {r.status, S(0), {}};
    Vec<S> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = r.x[j] - r.x[n + j];
    return {LpStatus::Optimal, r.value, x};
}

} // namespace valgebra
