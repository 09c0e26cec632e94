#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "emdut/emd.hpp"
#include "emdut/envelope.hpp"

namespace emdut {

struct SweepStats {
    std::uint64_t events = 0;          // processed type (i) and type (ii) events
    std::uint64_t type_ii_events = 0;  // subset of the above
    std::uint64_t moves = 0;           // single-step advances of blue points
    std::uint64_t stale_events = 0;    // superseded type (ii) entries skipped
};

template <class S>
struct Emdut1dResult {
    S value;
    S tau;
    Matching phi;
    SweepStats stats;
};

// Hooks for tests; matchings are given on sorted order.
template <class S>
struct SweepObserver {
    virtual ~SweepObserver() = default;
    // Called after every processed event with the cost piece valid just right of tau.
    virtual void on_event(const S& /*tau*/, bool /*type_ii*/, const LinearFn<S>& /*piece*/) {}
    virtual void on_shift(const S& /*tau*/, Index /*run_start*/, Index /*first_moved*/, Index /*run_end*/,
                          const std::vector<Index>& /*before*/, const std::vector<Index>& /*after*/) {}
};

namespace detail {

template <class S>
struct Sorted1d {
    std::vector<S> b, r;
    std::vector<Index> bo, ro;  // sorted position -> original index
};

template <class S>
Sorted1d<S> sorted_copies(const PointSet<S>& B, const PointSet<S>& R) {
    if (B.dim() != 1 || R.dim() != 1) throw std::invalid_argument("one-dimensional point sets required");
    Sorted1d<S> out;
    out.bo = sorted_order(B.axis(0));
    out.ro = sorted_order(R.axis(0));
    for (Index i : out.bo) out.b.push_back(B(0, i));
    for (Index k : out.ro) out.r.push_back(R(0, k));
    return out;
}

template <class S>
Matching unsort(const Sorted1d<S>& s, const std::vector<Index>& match) {
    Matching phi;
    phi.assignment.assign(s.bo.size(), -1);
    for (std::size_t i = 0; i < match.size(); ++i) phi.assignment[s.bo[i]] = s.ro[match[i]];
    return phi;
}

}  // namespace detail

template <class S>
Emdut1dResult<S> emdut_1d_symmetric(const PointSet<S>& B, const PointSet<S>& R) {
    if (B.size() != R.size()) throw std::invalid_argument("symmetric solver needs |B| = |R|");
    if (B.empty()) throw std::invalid_argument("symmetric solver needs at least one point");
    auto s = detail::sorted_copies(B, R);
    const std::size_t n = s.b.size();
    std::vector<S> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = s.r[i] - s.b[i];
    std::vector<S> sorted = diff;
    std::nth_element(sorted.begin(), sorted.begin() + (n - 1) / 2, sorted.end());
    S tau = sorted[(n - 1) / 2];
    S value(0);
    for (std::size_t i = 0; i < n; ++i) value += detail::abs_diff(tau, diff[i]);
    std::vector<Index> ident(n);
    for (std::size_t i = 0; i < n; ++i) ident[i] = static_cast<Index>(i);
    return {value, tau, detail::unsort(s, ident), {}};
}

inline constexpr Index kAlignmentOracleMaxPairs = 10000;

// Minimum over the alignment translations {r - b} of the monotone EMD.
template <class S>
Emdut1dResult<S> emdut_1d_alignment_oracle_full(const PointSet<S>& B, const PointSet<S>& R) {
    if (B.size() > R.size()) throw std::invalid_argument("more blue points than red points");
    if (B.size() * R.size() > kAlignmentOracleMaxPairs)
        throw BudgetExceeded("alignment oracle limited to |B|*|R| <= 10^4");
    auto s = detail::sorted_copies(B, R);
    if (s.b.empty()) return {S(0), S(0), Matching{}, {}};
    std::vector<S> cands;
    for (const S& r : s.r)
        for (const S& b : s.b) cands.push_back(r - b);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    std::optional<S> best;
    S best_tau;
    std::vector<S> shifted(s.b.size());
    for (const S& tau : cands) {
        for (std::size_t i = 0; i < s.b.size(); ++i) shifted[i] = s.b[i] + tau;
        S v = emd_1d_sorted_value(shifted, s.r);
        if (!best || v < *best) {
            best = std::move(v);
            best_tau = tau;
        }
    }
    auto witness = emd_1d_monotone(translate(B, Point<S>(Point<S>::Constant(1, best_tau))), R);
    return {*best, best_tau, std::move(witness.phi), {}};
}

template <class S>
S emdut_1d_alignment_oracle(const PointSet<S>& B, const PointSet<S>& R) {
    return emdut_1d_alignment_oracle_full(B, R).value;
}

// Event-driven sweep over translations. The matching starts as b_i -> r_i and
// only ever advances suffixes of runs by one red point; each run keeps its
// suffix-cost lines in an envelope whose first root is the next change.
template <class S, class Env = TreeEnvelope<S>>
class Sweep1d {
public:
    Sweep1d(const PointSet<S>& B, const PointSet<S>& R, SweepObserver<S>* observer = nullptr)
        : s_(detail::sorted_copies(B, R)), observer_(observer) {
        if (B.size() > R.size()) throw std::invalid_argument("more blue points than red points");
    }

    Emdut1dResult<S> run() {
        const Index m = static_cast<Index>(s_.b.size());
        const Index n = static_cast<Index>(s_.r.size());
        if (m == 0) return {S(0), S(0), Matching{}, {}};
        m_ = m;
        n_ = n;
        init();
        std::optional<S> best;
        S best_tau;
        std::size_t best_log = 0;
        while (!queue_.empty()) {
            Event ev = queue_.top();
            queue_.pop();
            if (ev.kind == Kind::TypeII) {
                Run& run = runs_[ev.a];
                if (!run.alive || run.version != ev.version) {
                    ++stats_.stale_events;
                    continue;
                }
            }
            tau_ = ev.tau;
            if (ev.kind == Kind::TypeI) handle_type_i(ev.a, ev.b);
            else handle_type_ii(ev.a);
            ++stats_.events;
            S value = f_(tau_);
            if (!best || value < *best) {
                best = std::move(value);
                best_tau = tau_;
                best_log = log_.size();
            }
            if (observer_) observer_->on_event(tau_, ev.kind == Kind::TypeII, f_);
        }
        // Replay the recorded advances up to the best event.
        std::vector<Index> match(m);
        for (Index i = 0; i < m; ++i) match[i] = i;
        for (std::size_t q = 0; q < best_log; ++q) ++match[log_[q]];
        return {*best, best_tau, detail::unsort(s_, match), stats_};
    }

private:
    enum class Kind { TypeI = 0, TypeII = 1 };

    struct Event {
        S tau;
        Kind kind;
        Index a;  // blue (type i) or run id (type ii)
        Index b;  // red (type i)
        std::uint64_t version;

        friend bool operator>(const Event& x, const Event& y) {
            if (auto c = compare(x.tau, y.tau); c != 0) return c > 0;
            if (x.kind != y.kind) return x.kind > y.kind;
            if (x.a != y.a) return x.a > y.a;
            return x.b > y.b;
        }
    };

    struct Run {
        Index start = 0, end = 0;
        bool terminal = false;  // anchored at the last red point; can never move
        bool alive = true;
        std::uint64_t version = 0;
        Env env;
    };

    LinearFn<S> dprime_piece(Index i) const {
        const Index v = match_[i];
        if (v + 1 >= n_) return {};
        const S x = s_.b[i] + tau_;
        const S& r0 = s_.r[v];
        const S& r1 = s_.r[v + 1];
        if (x < r0) return {S(0), r1 - r0};
        if (x < r1) return {S(-2), r0 + r1 - s_.b[i] - s_.b[i]};
        return {S(0), r0 - r1};
    }

    LinearFn<S> cost_piece(Index i) const {
        const S& r = s_.r[match_[i]];
        if (s_.b[i] + tau_ < r) return {S(-1), r - s_.b[i]};
        return {S(1), s_.b[i] - r};
    }

    // Suffix sums of the current pieces for blues [from, to].
    std::vector<LinearFn<S>> suffix_lines(Index from, Index to, const LinearFn<S>& tail) const {
        std::vector<LinearFn<S>> lines(static_cast<std::size_t>(to - from + 1));
        LinearFn<S> acc = tail;
        for (Index i = to; i >= from; --i) {
            acc += dprime_[i];
            lines[i - from] = acc;
        }
        return lines;
    }

    void init() {
        match_.resize(m_);
        run_of_.assign(m_, 0);
        dprime_.resize(m_);
        // Just below the first alignment every blue lies left of every red.
        tau_ = s_.r.front() - s_.b.back() - S(1);
        f_ = {};
        for (Index i = 0; i < m_; ++i) {
            match_[i] = i;
            dprime_[i] = dprime_piece(i);
            f_ += cost_piece(i);
        }
        runs_.clear();
        Run run;
        run.start = 0;
        run.end = m_ - 1;
        run.terminal = m_ == n_;
        if (!run.terminal) run.env.build(suffix_lines(0, m_ - 1, {}));
        runs_.push_back(std::move(run));
        for (Index i = 0; i < m_; ++i) queue_.push(Event{s_.r[0] - s_.b[i], Kind::TypeI, i, 0, 0});
        schedule(0);
    }

    void schedule(Index id) {
        Run& run = runs_[id];
        ++run.version;
        if (!run.alive || run.terminal) return;
        if (auto root = run.env.first_root_at_or_after(tau_))
            queue_.push(Event{std::move(*root), Kind::TypeII, id, 0, run.version});
    }

    void handle_type_i(Index j, Index k) {
        if (k + 1 < n_) queue_.push(Event{s_.r[k + 1] - s_.b[j], Kind::TypeI, j, k + 1, 0});
        const Index v = match_[j];
        if (k == v) f_ += LinearFn<S>{S(2), S(2) * (s_.b[j] - s_.r[k])};
        if (k != v && k != v + 1) return;
        LinearFn<S> piece = dprime_piece(j);
        LinearFn<S> diff = piece - dprime_[j];
        dprime_[j] = std::move(piece);
        const Index id = run_of_[j];
        Run& run = runs_[id];
        if (run.terminal || diff.is_zero()) return;
        run.env.range_add(0, j - run.start + 1, diff);
        schedule(id);
    }

    void handle_type_ii(Index id) {
        const Index s = runs_[id].start, t = runs_[id].end;
        const Index pos = runs_[id].env.argmin_position(tau_);
        const Index j = s + pos;
        const LinearFn<S> delta = runs_[id].env.line_at(pos);
        if (S(0) < delta(tau_)) throw std::logic_error("type (ii) event without a non-positive suffix cost");
        ++stats_.type_ii_events;

        std::vector<Index> before;
        if (observer_) before = match_;
        f_ += delta;
        for (Index i = j; i <= t; ++i) {
            ++match_[i];
            log_.push_back(i);
        }
        stats_.moves += static_cast<std::uint64_t>(t - j + 1);
        for (Index i = j; i <= t; ++i) dprime_[i] = dprime_piece(i);

        // Shrink or retire the run that lost its suffix.
        if (j > s) {
            Run& run = runs_[id];
            for (Index p = t - s; p >= pos; --p) run.env.remove(p);
            run.env.range_add(0, pos, -delta);
            run.end = j - 1;
            schedule(id);
        } else {
            runs_[id].alive = false;
            runs_[id].env = Env{};
            ++runs_[id].version;
        }

        // Attach the moved block to the following run when they became adjacent.
        Index target;
        if (t + 1 < m_ && match_[t + 1] == match_[t] + 1) {
            target = run_of_[t + 1];
            Run& next = runs_[target];
            if (!next.terminal) {
                auto lines = suffix_lines(j, t, next.env.line_at(0));
                for (Index i = t; i >= j; --i) next.env.insert(0, lines[i - j]);
            }
            next.start = j;
        } else {
            target = static_cast<Index>(runs_.size());
            Run run;
            run.start = j;
            run.end = t;
            run.terminal = match_[t] == n_ - 1;
            if (!run.terminal) run.env.build(suffix_lines(j, t, {}));
            runs_.push_back(std::move(run));
        }
        for (Index i = j; i <= t; ++i) run_of_[i] = target;
        schedule(target);
        if (observer_) observer_->on_shift(tau_, s, j, t, before, match_);
    }

    detail::Sorted1d<S> s_;
    SweepObserver<S>* observer_;
    Index m_ = 0, n_ = 0;
    S tau_;
    LinearFn<S> f_;
    std::vector<Index> match_, run_of_, log_;
    std::vector<LinearFn<S>> dprime_;
    std::vector<Run> runs_;
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue_;
    SweepStats stats_;
};

template <class S, class Env = TreeEnvelope<S>>
Emdut1dResult<S> emdut_1d_sweep(const PointSet<S>& B, const PointSet<S>& R, SweepObserver<S>* observer = nullptr) {
    return Sweep1d<S, Env>(B, R, observer).run();
}

}  // namespace emdut
