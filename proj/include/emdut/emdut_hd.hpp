#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "emdut/emd.hpp"

namespace emdut {

// The set {tau : normal . tau + offset = 0}, scaled so the first nonzero normal entry is 1.
template <class S>
struct Hyperplane {
    Point<S> normal;
    S offset;

    Hyperplane(Point<S> n, S off) : normal(std::move(n)), offset(std::move(off)) {
        Index lead = 0;
        while (lead < normal.size() && normal(lead) == S(0)) ++lead;
        if (lead == normal.size()) throw std::invalid_argument("hyperplane with zero normal");
        if (normal(lead) != S(1)) {
            const S scale = normal(lead);
            for (Index i = 0; i < normal.size(); ++i) normal(i) /= scale;
            offset /= scale;
        }
    }

    S eval(const Point<S>& tau) const {
        S acc = offset;
        for (Index i = 0; i < normal.size(); ++i)
            if (normal(i) != S(0)) acc += normal(i) * tau(i);
        return acc;
    }

    friend bool operator<(const Hyperplane& a, const Hyperplane& b) {
        for (Index i = 0; i < a.normal.size(); ++i)
            if (a.normal(i) != b.normal(i)) return a.normal(i) < b.normal(i);
        return a.offset < b.offset;
    }
    friend bool operator==(const Hyperplane& a, const Hyperplane& b) { return !(a < b) && !(b < a); }
};

namespace detail {

inline double to_double(const Rational& x) { return x.to_double(); }
template <class T>
    requires std::is_arithmetic_v<T>
double to_double(T x) {
    return static_cast<double>(x);
}

template <class S>
Point<S> unit(Index d, Index i, const S& value = S(1)) {
    Point<S> p = Point<S>::Constant(d, S(0));
    p(i) = value;
    return p;
}

template <class S>
void sort_unique(std::vector<Hyperplane<S>>& hs) {
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
}

template <class S>
bool lex_less(const Point<S>& a, const Point<S>& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

struct LexLess {
    template <class S>
    bool operator()(const Point<S>& a, const Point<S>& b) const {
        return lex_less(a, b);
    }
};

// Unique solution of the square system rows . x + offsets = 0, if the rows are independent.
template <class S>
std::optional<Point<S>> solve_square(const std::vector<const Hyperplane<S>*>& rows) {
    const Index d = static_cast<Index>(rows.size());
    Coords<S> a(d, d + 1);
    for (Index i = 0; i < d; ++i) {
        a.row(i).head(d) = rows[i]->normal.transpose();
        a(i, d) = -rows[i]->offset;
    }
    for (Index col = 0; col < d; ++col) {
        Index piv = col;
        while (piv < d && a(piv, col) == S(0)) ++piv;
        if (piv == d) return std::nullopt;
        if (piv != col) a.row(piv).swap(a.row(col));
        for (Index r = 0; r < d; ++r) {
            if (r == col || a(r, col) == S(0)) continue;
            const S f = a(r, col) / a(col, col);
            for (Index c = col; c <= d; ++c)
                if (a(col, c) != S(0)) a(r, c) -= f * a(col, c);
        }
    }
    Point<S> x(d);
    for (Index i = 0; i < d; ++i) x(i) = a(i, d) / a(i, i);
    return x;
}

inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
        if (c > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(c);
}

// Calls visit(indices) for every k-subset of [0, n) in lexicographic order.
template <class F>
void for_each_subset(Index n, Index k, F&& visit) {
    if (k > n) return;
    std::vector<Index> idx(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        visit(idx);
        Index i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (Index j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

template <class S>
std::vector<Hyperplane<S>> hyperplanes_l1(const PointSet<S>& B, const PointSet<S>& R) {
    if (B.dim() != R.dim()) throw std::invalid_argument("dimension mismatch");
    const Index d = B.dim();
    std::vector<Hyperplane<S>> hs;
    for (Index j = 0; j < B.size(); ++j)
        for (Index k = 0; k < R.size(); ++k)
            for (Index i = 0; i < d; ++i) hs.emplace_back(detail::unit<S>(d, i), B(i, j) - R(i, k));
    detail::sort_unique(hs);
    return hs;
}

template <class S>
std::vector<Hyperplane<S>> hyperplanes_linf(const PointSet<S>& B, const PointSet<S>& R) {
    if (B.dim() != R.dim()) throw std::invalid_argument("dimension mismatch");
    const Index d = B.dim();
    std::vector<Hyperplane<S>> hs;
    for (Index j = 0; j < B.size(); ++j)
        for (Index k = 0; k < R.size(); ++k) {
            Point<S> diff = R.point(k) - B.point(j);
            for (Index i = 0; i < d; ++i) hs.emplace_back(detail::unit<S>(d, i), -diff(i));
            for (Index i = 0; i < d; ++i)
                for (Index l = i + 1; l < d; ++l) {
                    Point<S> minus = detail::unit<S>(d, i);
                    minus(l) = S(-1);
                    hs.emplace_back(minus, diff(l) - diff(i));
                    Point<S> plus = detail::unit<S>(d, i);
                    plus(l) = S(1);
                    hs.emplace_back(plus, -(diff(i) + diff(l)));
                }
        }
    detail::sort_unique(hs);
    return hs;
}

inline constexpr std::uint64_t kDefaultHdBudget = 10'000'000;

// All points where d hyperplanes with independent normals meet, sorted lexicographically.
template <class S>
std::vector<Point<S>> arrangement_vertices(const std::vector<Hyperplane<S>>& H, Index d,
                                           std::uint64_t budget = kDefaultHdBudget) {
    const std::uint64_t subsets = detail::binomial_capped(H.size(), static_cast<std::uint64_t>(d), budget);
    if (subsets > budget)
        throw BudgetExceeded("arrangement enumeration exceeds the budget of " + std::to_string(budget) +
                             " subset evaluations");
    std::set<Point<S>, detail::LexLess> found;
    std::vector<const Hyperplane<S>*> rows(static_cast<std::size_t>(d));
    detail::for_each_subset(static_cast<Index>(H.size()), d, [&](const std::vector<Index>& idx) {
        for (Index i = 0; i < d; ++i) rows[i] = &H[idx[i]];
        if (auto x = detail::solve_square(rows)) found.insert(std::move(*x));
    });
    return {found.begin(), found.end()};
}

enum class HdStrategy { Auto, Enumerate, BranchAndBound };

struct HdOptions {
    std::uint64_t budget = kDefaultHdBudget;
    HdStrategy strategy = HdStrategy::Auto;
};

struct HdStats {
    std::uint64_t candidates = 0;  // translations at which an exact EMD was computed
    std::uint64_t work = 0;        // budgeted steps (subsets, lattice nodes or boxes)
    std::string method;
};

template <class S>
struct HdResult {
    S value;
    Point<S> tau;
    Matching phi;
    HdStats stats;
};

// Candidate translations the solver optimises over: the axis lattice for L1,
// the vertices of the full arrangement for LInf.
template <class S>
std::vector<Point<S>> hd_candidates(const PointSet<S>& B, const PointSet<S>& R, Metric metric,
                                    std::uint64_t budget = kDefaultHdBudget) {
    const Index d = B.dim();
    if (metric == Metric::LInf && d > 1) return arrangement_vertices(hyperplanes_linf(B, R), d, budget);
    std::vector<std::vector<S>> axes(static_cast<std::size_t>(d));
    std::uint64_t total = 1;
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < B.size(); ++j)
            for (Index k = 0; k < R.size(); ++k) axes[i].push_back(R(i, k) - B(i, j));
        std::sort(axes[i].begin(), axes[i].end());
        axes[i].erase(std::unique(axes[i].begin(), axes[i].end()), axes[i].end());
        total = std::min<std::uint64_t>(total * axes[i].size(), budget + 1);
    }
    if (total > budget) throw BudgetExceeded("candidate lattice exceeds the budget of " + std::to_string(budget));
    std::vector<Point<S>> out;
    std::vector<std::size_t> pos(static_cast<std::size_t>(d), 0);
    if (total == 0) return out;
    for (;;) {
        Point<S> p(d);
        for (Index i = 0; i < d; ++i) p(i) = axes[i][pos[i]];
        out.push_back(std::move(p));
        Index i = d - 1;
        while (i >= 0 && ++pos[i] == axes[i].size()) pos[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

namespace detail {

template <class S>
class HdSearch {
public:
    HdSearch(const PointSet<S>& B, const PointSet<S>& R, Metric metric, const HdOptions& opt)
        : B_(B), R_(R), metric_(metric), opt_(opt), d_(B.dim()) {}

    HdResult<S> run() {
        HdResult<S> out;
        if (metric_ == Metric::L1 || d_ == 1) {
            stats_.method = "l1-lattice";
            search_l1();
        } else {
            const auto H = hyperplanes_linf(B_, R_);
            const std::uint64_t subsets = binomial_capped(H.size(), static_cast<std::uint64_t>(d_), opt_.budget);
            const bool enumerate = opt_.strategy == HdStrategy::Enumerate ||
                                   (opt_.strategy == HdStrategy::Auto && subsets <= opt_.budget);
            if (enumerate) {
                stats_.method = "linf-arrangement";
                stats_.work = subsets;
                for (const auto& tau : arrangement_vertices(H, d_, opt_.budget)) offer(tau);
            } else {
                stats_.method = "linf-branch-and-bound";
                search_boxes(H);
            }
        }
        auto emd = emd_hungarian_at(B_, R_, metric_, *best_tau_);
        out.value = std::move(*best_);
        out.tau = std::move(*best_tau_);
        out.phi = std::move(emd.phi);
        out.stats = stats_;
        return out;
    }

private:
    void spend(std::uint64_t units = 1) {
        stats_.work += units;
        if (stats_.work > opt_.budget)
            throw BudgetExceeded("translation search exceeds the budget of " + std::to_string(opt_.budget) +
                                 " steps");
    }

    S evaluate(const Point<S>& tau) {
        ++stats_.candidates;
        return emd_value(B_, R_, metric_, tau);
    }

    void offer(const Point<S>& tau) {
        S v = evaluate(tau);
        if (!best_ || v < *best_ || (v == *best_ && lex_less(tau, *best_tau_))) {
            if (!bound_ || v < *bound_) set_bound(v);
            best_ = std::move(v);
            best_tau_ = tau;
        }
    }

    // Sum of per-axis one-dimensional EMDs is a lower bound for L1 and is separable.
    void search_l1() {
        axes_.assign(static_cast<std::size_t>(d_), {});
        axis_lb_.assign(static_cast<std::size_t>(d_), {});
        for (Index i = 0; i < d_; ++i) {
            auto b = B_.axis(i), r = R_.axis(i);
            std::sort(b.begin(), b.end());
            std::sort(r.begin(), r.end());
            auto& offs = axes_[i];
            for (const S& rv : r)
                for (const S& bv : b) offs.push_back(rv - bv);
            std::sort(offs.begin(), offs.end());
            offs.erase(std::unique(offs.begin(), offs.end()), offs.end());
            std::vector<S> shifted(b.size());
            for (const S& t : offs) {
                for (std::size_t q = 0; q < b.size(); ++q) shifted[q] = b[q] + t;
                axis_lb_[i].push_back(emd_1d_sorted_value(shifted, r));
            }
            spend(offs.size());
        }
        // min_rest_[i]: smallest possible contribution of axes i.. .
        min_rest_.assign(static_cast<std::size_t>(d_ + 1), S(0));
        Point<S> seed(d_);
        for (Index i = d_ - 1; i >= 0; --i) {
            auto it = std::min_element(axis_lb_[i].begin(), axis_lb_[i].end());
            min_rest_[i] = min_rest_[i + 1] + *it;
            seed(i) = axes_[i][static_cast<std::size_t>(it - axis_lb_[i].begin())];
        }
        set_bound(evaluate(seed));
        Point<S> tau(d_);
        lattice_dfs(0, S(0), tau);
    }

    void lattice_dfs(Index axis, const S& partial, Point<S>& tau) {
        if (axis == d_) {
            offer(tau);
            return;
        }
        for (std::size_t q = 0; q < axes_[axis].size(); ++q) {
            spend();
            S lb = partial + axis_lb_[axis][q];
            if (*bound_ < lb + min_rest_[axis + 1]) continue;
            tau(axis) = axes_[axis][q];
            lattice_dfs(axis + 1, lb, tau);
        }
    }

    struct Box {
        Point<S> lo, hi;
        double lb;
        std::vector<Index> planes;  // hyperplanes meeting the closed box
    };

    struct BoxOrder {
        bool operator()(const Box& a, const Box& b) const {
            if (a.lb != b.lb) return b.lb < a.lb;
            return lex_less(b.lo, a.lo);
        }
    };

    // Lower bound for f over the box, computed in doubles. Each blue point's pair
    // costs are tilted by the subgradient of its matched pair at the centre; a
    // tilted LInf distance has a closed-form minimum over the box, and the tilts
    // come back as one linear term. The value is read off a dual certificate and
    // lowered by a margin far above the rounding error, so it never overshoots.
    double box_bound(const Point<S>& lo_s, const Point<S>& hi_s) {
        const Index m = B_.size(), n = R_.size();
        Eigen::VectorXd lo(d_), hi(d_), c(d_);
        double mag = data_mag_;
        for (Index i = 0; i < d_; ++i) {
            lo(i) = to_double(lo_s(i));
            hi(i) = to_double(hi_s(i));
            c(i) = 0.5 * (lo(i) + hi(i));
            mag = std::max({mag, std::abs(lo(i)), std::abs(hi(i))});
        }
        Coords<double> cost(m, n);
        for (Index j = 0; j < m; ++j)
            for (Index k = 0; k < n; ++k) cost(j, k) = (Bd_.col(j) + c - Rd_.col(k)).cwiseAbs().maxCoeff();
        const auto centre = hungarian(cost);

        std::vector<Index> tilt_axis(static_cast<std::size_t>(m), -1);
        std::vector<double> tilt_sign(static_cast<std::size_t>(m), 0.0);
        Eigen::VectorXd total_tilt = Eigen::VectorXd::Zero(d_);
        for (Index j = 0; j < m; ++j) {
            const Index r = centre.row_to_col[j];
            double best = 0;
            for (Index i = 0; i < d_; ++i) {
                const double x = Bd_(i, j) + c(i) - Rd_(i, r);
                if (best < std::abs(x)) {
                    best = std::abs(x);
                    tilt_axis[j] = i;
                    tilt_sign[j] = x < 0 ? -1.0 : 1.0;
                }
            }
            if (tilt_axis[j] >= 0) total_tilt(tilt_axis[j]) += tilt_sign[j];
        }

        for (Index j = 0; j < m; ++j)
            for (Index k = 0; k < n; ++k) {
                double t_min = 0;
                for (Index i = 0; i < d_; ++i) {
                    const double base = Bd_(i, j) - Rd_(i, k);
                    t_min = std::max({t_min, base + lo(i), -(base + hi(i))});
                }
                const Index a = tilt_axis[j];
                if (a < 0) {
                    cost(j, k) = t_min;
                    continue;
                }
                const double base = Bd_(a, j) - Rd_(a, k);
                const double reach = tilt_sign[j] > 0 ? base + hi(a) : -(base + lo(a));
                cost(j, k) = t_min - std::min(reach, t_min) + tilt_sign[j] * (base + c(a));
            }
        // Any column potentials w <= 0 certify sum_j min_k (cost - w) + sum_k w.
        const auto tilted = hungarian(cost);
        double lb = 0;
        for (Index k = 0; k < n; ++k) lb += std::min(tilted.v[k], 0.0);
        for (Index j = 0; j < m; ++j) {
            double row = std::numeric_limits<double>::infinity();
            for (Index k = 0; k < n; ++k) row = std::min(row, cost(j, k) - std::min(tilted.v[k], 0.0));
            lb += row;
        }
        for (Index i = 0; i < d_; ++i) {
            const double g = total_tilt(i);
            if (g > 0) lb += g * (lo(i) - c(i));
            else if (g < 0) lb += g * (hi(i) - c(i));
        }
        return lb - 1e-9 * static_cast<double>(m + n + d_) * (1.0 + mag);
    }

    bool beats_bound(double lb) const { return bound_d_ < lb; }

    void set_bound(S v) {
        bound_ = std::move(v);
        bound_d_ = to_double(*bound_);
    }

    static bool meets(const Hyperplane<S>& h, const Point<S>& lo, const Point<S>& hi) {
        S lo_val = h.offset, hi_val = h.offset;
        for (Index i = 0; i < h.normal.size(); ++i) {
            const S& c = h.normal(i);
            if (c == S(0)) continue;
            if (S(0) < c) {
                lo_val += c * lo(i);
                hi_val += c * hi(i);
            } else {
                lo_val += c * hi(i);
                hi_val += c * lo(i);
            }
        }
        return !(S(0) < lo_val) && !(hi_val < S(0));
    }

    static bool inside(const Point<S>& p, const Point<S>& lo, const Point<S>& hi) {
        for (Index i = 0; i < p.size(); ++i)
            if (p(i) < lo(i) || hi(i) < p(i)) return false;
        return true;
    }

    // Either the planes share exactly one point, have rank below d, or neither.
    enum class Pencil { Point, LowRank, General };

    Pencil classify(const std::vector<Hyperplane<S>>& H, const std::vector<Index>& planes, Point<S>& common) {
        std::vector<const Hyperplane<S>*> basis;
        std::vector<Point<S>> reduced;  // echelon copies of the chosen normals
        std::vector<Index> pivots;
        for (Index idx : planes) {
            Point<S> v = H[idx].normal;
            for (std::size_t q = 0; q < reduced.size(); ++q)
                if (v(pivots[q]) != S(0)) v -= (v(pivots[q]) / reduced[q](pivots[q])) * reduced[q];
            Index piv = 0;
            while (piv < d_ && v(piv) == S(0)) ++piv;
            if (piv == d_) continue;
            reduced.push_back(std::move(v));
            pivots.push_back(piv);
            basis.push_back(&H[idx]);
            if (static_cast<Index>(basis.size()) == d_) break;
        }
        if (static_cast<Index>(basis.size()) < d_) return Pencil::LowRank;
        common = *solve_square(basis);
        for (Index idx : planes)
            if (H[idx].eval(common) != S(0)) return Pencil::General;
        return Pencil::Point;
    }

    void search_boxes(const std::vector<Hyperplane<S>>& H) {
        constexpr std::size_t kLeafPlanes = 10;
        Bd_.resize(d_, B_.size());
        Rd_.resize(d_, R_.size());
        for (Index j = 0; j < B_.size(); ++j)
            for (Index i = 0; i < d_; ++i) Bd_(i, j) = to_double(B_(i, j));
        for (Index k = 0; k < R_.size(); ++k)
            for (Index i = 0; i < d_; ++i) Rd_(i, k) = to_double(R_(i, k));
        data_mag_ = std::max(Bd_.cwiseAbs().maxCoeff(), Rd_.cwiseAbs().maxCoeff());
        // Any optimum lies within the upper bound of some alignment of the first blue point.
        const Point<S> b0 = B_.point(0);
        set_bound(evaluate(zero_point<S>(d_)));
        for (Index k = 0; k < R_.size(); ++k) {
            S v = evaluate(R_.point(k) - b0);
            if (v < *bound_) set_bound(std::move(v));
        }
        Point<S> lo = R_.point(0) - b0, hi = lo;
        for (Index k = 1; k < R_.size(); ++k)
            for (Index i = 0; i < d_; ++i) {
                const S t = R_(i, k) - b0(i);
                if (t < lo(i)) lo(i) = t;
                if (hi(i) < t) hi(i) = t;
            }
        for (Index i = 0; i < d_; ++i) {
            lo(i) -= *bound_;
            hi(i) += *bound_;
        }
        std::priority_queue<Box, std::vector<Box>, BoxOrder> open;
        std::set<Point<S>, LexLess> seen;
        auto push = [&](Point<S> l, Point<S> h, const std::vector<Index>& parent) {
            spend();
            Box box{std::move(l), std::move(h), 0.0, {}};
            for (Index idx : parent)
                if (meets(H[idx], box.lo, box.hi)) box.planes.push_back(idx);
            if (static_cast<Index>(box.planes.size()) < d_) return;
            box.lb = box_bound(box.lo, box.hi);
            if (beats_bound(box.lb)) return;
            open.push(std::move(box));
        };
        auto consider = [&](const Point<S>& tau) {
            if (seen.insert(tau).second) offer(tau);
        };
        std::vector<Index> all(H.size());
        for (std::size_t i = 0; i < H.size(); ++i) all[i] = static_cast<Index>(i);
        push(lo, hi, all);
        while (!open.empty()) {
            Box box = open.top();
            open.pop();
            if (beats_bound(box.lb)) break;
            Point<S> common(d_);
            const Pencil kind = classify(H, box.planes, common);
            if (kind == Pencil::LowRank) continue;
            if (kind == Pencil::Point) {
                if (inside(common, box.lo, box.hi)) consider(common);
                continue;
            }
            if (box.planes.size() <= kLeafPlanes) {
                std::vector<const Hyperplane<S>*> rows(static_cast<std::size_t>(d_));
                for_each_subset(static_cast<Index>(box.planes.size()), d_, [&](const std::vector<Index>& idx) {
                    spend();
                    for (Index i = 0; i < d_; ++i) rows[i] = &H[box.planes[idx[i]]];
                    if (auto x = solve_square(rows); x && inside(*x, box.lo, box.hi)) consider(*x);
                });
                continue;
            }
            Index axis = 0;
            for (Index i = 1; i < d_; ++i)
                if (box.hi(axis) - box.lo(axis) < box.hi(i) - box.lo(i)) axis = i;
            const S mid = (box.lo(axis) + box.hi(axis)) / S(2);
            Point<S> left_hi = box.hi, right_lo = box.lo;
            left_hi(axis) = mid;
            right_lo(axis) = mid;
            push(box.lo, left_hi, box.planes);
            push(right_lo, box.hi, box.planes);
        }
    }

    const PointSet<S>& B_;
    const PointSet<S>& R_;
    Metric metric_;
    HdOptions opt_;
    Index d_;
    HdStats stats_;
    std::optional<S> best_, bound_;
    double bound_d_ = 0;
    Eigen::MatrixXd Bd_, Rd_;
    double data_mag_ = 0;
    std::optional<Point<S>> best_tau_;
    std::vector<std::vector<S>> axes_, axis_lb_;
    std::vector<S> min_rest_;
};

}  // namespace detail

// Exact EMD under translation in any dimension for L1 and LInf. Reports the
// lexicographically smallest optimal candidate translation.
template <class S>
HdResult<S> emdut_hd(const PointSet<S>& B, const PointSet<S>& R, Metric metric, const HdOptions& opt = {}) {
    if (B.dim() != R.dim()) throw std::invalid_argument("dimension mismatch");
    if (B.size() > R.size()) throw std::invalid_argument("more blue points than red points");
    if (B.empty()) return {S(0), zero_point<S>(B.dim()), Matching{}, {}};
    return detail::HdSearch<S>(B, R, metric, opt).run();
}

template <class S>
PointSet<S> rotate_45_to_l1(const PointSet<S>& P) {
    if (P.dim() != 2) throw std::invalid_argument("rotation needs a two-dimensional point set");
    Coords<S> c(2, P.size());
    const S half = S(1) / S(2);
    for (Index i = 0; i < P.size(); ++i) {
        c(0, i) = (P(0, i) + P(1, i)) * half;
        c(1, i) = (P(0, i) - P(1, i)) * half;
    }
    return PointSet<S>(std::move(c));
}

}  // namespace emdut
