#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "emdut/core.hpp"

namespace emdut {

template <class S>
struct EmdResult {
    S value;
    Matching phi;
};

namespace detail {

template <class S>
S abs_diff(const S& a, const S& b) {
    S d = a - b;
    if (d < S(0)) d = -d;
    return d;
}

}  // namespace detail

// Value of the optimal monotone matching of sorted blues into sorted reds.
template <class S>
S emd_1d_sorted_value(const std::vector<S>& b, const std::vector<S>& r) {
    const std::size_t m = b.size(), n = r.size();
    if (m > n) throw std::invalid_argument("more blue points than red points");
    if (m == 0) return S(0);
    // prev[k]: cost of matching the first i-1 blues into the first k reds.
    std::vector<S> prev(n + 1, S(0)), cur(n + 1);
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t k = i; k <= n - (m - i); ++k) {
            S take = prev[k - 1] + detail::abs_diff(b[i - 1], r[k - 1]);
            if (k > i && cur[k - 1] < take) cur[k] = cur[k - 1];
            else cur[k] = std::move(take);
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

template <class S>
EmdResult<S> emd_1d_monotone(const PointSet<S>& B, const PointSet<S>& R) {
    if (B.dim() != 1 || R.dim() != 1) throw std::invalid_argument("emd_1d_monotone needs one-dimensional sets");
    const Index m = B.size(), n = R.size();
    if (m > n) throw std::invalid_argument("more blue points than red points");
    auto bo = sorted_order(B.axis(0));
    auto ro = sorted_order(R.axis(0));
    std::vector<S> b(m), r(n);
    for (Index i = 0; i < m; ++i) b[i] = B(0, bo[i]);
    for (Index k = 0; k < n; ++k) r[k] = R(0, ro[k]);

    // suf(i, k): optimal cost of blues i.. into reds k.., defined when n-k >= m-i.
    const Index w = n + 1;
    std::vector<S> suf(static_cast<std::size_t>((m + 1) * w), S(0));
    auto at = [&](Index i, Index k) -> S& { return suf[static_cast<std::size_t>(i * w + k)]; };
    for (Index i = m - 1; i >= 0; --i) {
        for (Index k = n - (m - i); k >= 0; --k) {
            S take = detail::abs_diff(b[i], r[k]) + at(i + 1, k + 1);
            if (n - (k + 1) >= m - i && at(i, k + 1) < take) at(i, k) = at(i, k + 1);
            else at(i, k) = std::move(take);
        }
    }
    // Forward pass picks the smallest feasible red for every blue.
    Matching phi;
    phi.assignment.assign(static_cast<std::size_t>(m), -1);
    Index k = 0;
    for (Index i = 0; i < m; ++i) {
        for (;; ++k) {
            if (detail::abs_diff(b[i], r[k]) + at(i + 1, k + 1) == at(i, k)) break;
        }
        phi.assignment[bo[i]] = ro[k];
        ++k;
    }
    return {m == 0 ? S(0) : at(0, 0), std::move(phi)};
}

template <class S>
Coords<S> cost_matrix(const PointSet<S>& B, const PointSet<S>& R, Metric metric, const Point<S>& tau) {
    if (B.dim() != R.dim() || tau.size() != B.dim()) throw std::invalid_argument("dimension mismatch");
    Coords<S> c(B.size(), R.size());
    for (Index j = 0; j < B.size(); ++j)
        for (Index r = 0; r < R.size(); ++r) c(j, r) = shifted_distance(B.point(j), tau, R.point(r), metric);
    return c;
}

template <class S>
struct HungarianSolution {
    S value;
    std::vector<Index> row_to_col;  // size m
    std::vector<S> u;               // row potentials
    std::vector<S> v;               // column potentials, all <= 0
};

// Shortest augmenting path Hungarian method on an m x n cost matrix, m <= n.
// Columns left unused behave as if matched to zero-cost dummy rows: they keep
// potential 0, which is exactly the dual of the padded square problem.
template <class S>
HungarianSolution<S> hungarian(const Coords<S>& cost) {
    const Index m = cost.rows(), n = cost.cols();
    if (m > n) throw std::invalid_argument("more blue points than red points");
    std::vector<S> u(m + 1, S(0)), v(n + 1, S(0));
    std::vector<Index> p(n + 1, 0), way(n + 1, 0);
    std::vector<S> minv(n + 1);
    std::vector<char> used(n + 1), has_min(n + 1);
    for (Index i = 1; i <= m; ++i) {
        p[0] = i;
        Index j0 = 0;
        std::fill(used.begin(), used.end(), 0);
        std::fill(has_min.begin(), has_min.end(), 0);
        do {
            used[j0] = 1;
            const Index i0 = p[j0];
            std::optional<S> delta;
            Index j1 = -1;
            for (Index j = 1; j <= n; ++j) {
                if (used[j]) continue;
                S cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (!has_min[j] || cur < minv[j]) {
                    minv[j] = std::move(cur);
                    has_min[j] = 1;
                    way[j] = j0;
                }
                if (!delta || minv[j] < *delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (Index j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += *delta;
                    v[j] -= *delta;
                } else {
                    minv[j] -= *delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const Index j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    HungarianSolution<S> sol;
    sol.row_to_col.assign(static_cast<std::size_t>(m), -1);
    for (Index j = 1; j <= n; ++j)
        if (p[j] != 0) sol.row_to_col[p[j] - 1] = j - 1;
    sol.value = S(0);
    for (Index i = 0; i < m; ++i) sol.value += cost(i, sol.row_to_col[i]);
    sol.u.assign(u.begin() + 1, u.end());
    sol.v.assign(v.begin() + 1, v.end());
    return sol;
}

// Among all optimal assignments, the lexicographically smallest row->column list.
// Works on the tight graph of the padded square problem: dummy rows are tight to
// every column with zero potential, real rows where cost = u + v.
template <class S>
std::vector<Index> lexmin_optimal_assignment(const Coords<S>& cost, const HungarianSolution<S>& sol) {
    const Index m = cost.rows(), n = cost.cols();
    std::vector<std::vector<char>> tight(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (Index i = 0; i < n; ++i)
        for (Index c = 0; c < n; ++c)
            tight[i][c] = i < m ? (cost(i, c) - sol.u[i] - sol.v[c] == S(0)) : sol.v[c] == S(0);

    std::vector<Index> row_col(static_cast<std::size_t>(n), -1), col_row(static_cast<std::size_t>(n), -1);
    for (Index i = 0; i < m; ++i) row_col[i] = sol.row_to_col[i];
    for (Index i = 0; i < m; ++i) col_row[row_col[i]] = i;
    Index next_dummy = m;
    for (Index c = 0; c < n; ++c)
        if (col_row[c] < 0) {
            col_row[c] = next_dummy;
            row_col[next_dummy++] = c;
        }

    std::vector<Index> next_col(static_cast<std::size_t>(n));
    std::vector<char> in_z(static_cast<std::size_t>(n));
    std::vector<Index> queue;
    for (Index i = 0; i < m; ++i) {
        const Index c0 = row_col[i];
        // Rows that can hand their column down an alternating path ending at c0.
        std::fill(in_z.begin(), in_z.end(), 0);
        queue.clear();
        auto expand = [&](Index col) {
            for (Index row = i + 1; row < n; ++row)
                if (!in_z[row] && tight[row][col]) {
                    in_z[row] = 1;
                    next_col[row] = col;
                    queue.push_back(row);
                }
        };
        expand(c0);
        for (std::size_t q = 0; q < queue.size(); ++q) expand(row_col[queue[q]]);

        for (Index c = 0; c < c0; ++c) {
            if (!tight[i][c]) continue;
            Index holder = col_row[c];
            if (holder <= i || !in_z[holder]) continue;
            // Shift columns along the path, then give c to row i.
            Index row = holder;
            for (;;) {
                const Index col = next_col[row];
                const Index displaced = col_row[col];
                row_col[row] = col;
                col_row[col] = row;
                if (col == c0) break;
                row = displaced;
            }
            row_col[i] = c;
            col_row[c] = i;
            break;
        }
    }
    return {row_col.begin(), row_col.begin() + m};
}

template <class S>
S emd_value(const PointSet<S>& B, const PointSet<S>& R, Metric metric, const Point<S>& tau) {
    if (B.size() > R.size()) throw std::invalid_argument("more blue points than red points");
    if (B.empty()) return S(0);
    return hungarian(cost_matrix(B, R, metric, tau)).value;
}

template <class S>
EmdResult<S> emd_hungarian_at(const PointSet<S>& B, const PointSet<S>& R, Metric metric, const Point<S>& tau) {
    if (B.dim() != R.dim()) throw std::invalid_argument("dimension mismatch");
    if (B.size() > R.size()) throw std::invalid_argument("more blue points than red points");
    if (B.empty()) return {S(0), Matching{}};
    Coords<S> cost = cost_matrix(B, R, metric, tau);
    auto sol = hungarian(cost);
    Matching phi{lexmin_optimal_assignment(cost, sol)};
    return {sol.value, std::move(phi)};
}

template <class S>
EmdResult<S> emd_hungarian(const PointSet<S>& B, const PointSet<S>& R, Metric metric) {
    return emd_hungarian_at(B, R, metric, zero_point<S>(B.dim()));
}

inline constexpr Index kBruteForceMaxRed = 8;

template <class S>
S emd_bruteforce_at(const PointSet<S>& B, const PointSet<S>& R, Metric metric, const Point<S>& tau) {
    if (B.dim() != R.dim()) throw std::invalid_argument("dimension mismatch");
    if (R.size() > kBruteForceMaxRed) throw std::invalid_argument("emd_bruteforce supports at most 8 red points");
    if (B.size() > R.size()) throw std::invalid_argument("more blue points than red points");
    const Index m = B.size(), n = R.size();
    Coords<S> cost = cost_matrix(B, R, metric, tau);
    std::optional<S> best;
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    S acc(0);
    auto rec = [&](auto&& self, Index j) -> void {
        if (j == m) {
            if (!best || acc < *best) best = acc;
            return;
        }
        for (Index r = 0; r < n; ++r) {
            if (used[r]) continue;
            used[r] = 1;
            acc += cost(j, r);
            self(self, j + 1);
            acc -= cost(j, r);
            used[r] = 0;
        }
    };
    rec(rec, 0);
    return *best;
}

template <class S>
S emd_bruteforce(const PointSet<S>& B, const PointSet<S>& R, Metric metric) {
    return emd_bruteforce_at(B, R, metric, zero_point<S>(B.dim()));
}

}  // namespace emdut
