#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "emdut/core.hpp"

namespace emdut {

template <class S>
struct LinearFn {
    S slope{0};
    S intercept{0};

    S operator()(const S& x) const { return slope * x + intercept; }
    bool is_zero() const { return slope == S(0) && intercept == S(0); }

    LinearFn& operator+=(const LinearFn& o) {
        slope += o.slope;
        intercept += o.intercept;
        return *this;
    }
    LinearFn& operator-=(const LinearFn& o) {
        slope -= o.slope;
        intercept -= o.intercept;
        return *this;
    }
    friend LinearFn operator+(LinearFn a, const LinearFn& b) { return a += b; }
    friend LinearFn operator-(LinearFn a, const LinearFn& b) { return a -= b; }
    LinearFn operator-() const { return {-slope, -intercept}; }
    friend bool operator==(const LinearFn&, const LinearFn&) = default;
};

// Abscissa where two non-parallel lines meet.
template <class S>
S crossing(const LinearFn<S>& a, const LinearFn<S>& b) {
    return (b.intercept - a.intercept) / (a.slope - b.slope);
}

class EnvelopeOrderError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

template <class S>
void check_sorted(const std::vector<LinearFn<S>>& lines) {
    for (std::size_t i = 1; i < lines.size(); ++i)
        if (lines[i].slope < lines[i - 1].slope)
            throw EnvelopeOrderError("slopes must be non-decreasing by position (violated at " + std::to_string(i) + ")");
}

inline std::uint32_t next_priority(std::uint64_t& state) {
    // splitmix64
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::uint32_t>((z ^ (z >> 31)) >> 16);
}

}  // namespace detail

// Reference implementation: a plain list of lines, every query is linear.
template <class S = Rational>
class NaiveEnvelope {
public:
    NaiveEnvelope() = default;
    explicit NaiveEnvelope(std::vector<LinearFn<S>> lines) { build(std::move(lines)); }

    void build(std::vector<LinearFn<S>> lines) {
        detail::check_sorted(lines);
        lines_ = std::move(lines);
    }

    Index size() const { return static_cast<Index>(lines_.size()); }
    bool empty() const { return lines_.empty(); }

    void insert(Index pos, const LinearFn<S>& line) {
        if (pos < 0 || pos > size()) throw std::out_of_range("insert position out of range");
        if ((pos > 0 && line.slope < lines_[pos - 1].slope) || (pos < size() && lines_[pos].slope < line.slope))
            throw EnvelopeOrderError("insert would break slope order");
        lines_.insert(lines_.begin() + pos, line);
    }

    void remove(Index pos) {
        if (pos < 0 || pos >= size()) throw std::out_of_range("remove position out of range");
        lines_.erase(lines_.begin() + pos);
    }

    void range_add(Index from_pos, const LinearFn<S>& f) {
        if (S(0) < f.slope) throw EnvelopeOrderError("range_add needs a non-positive slope");
        range_add(from_pos, size(), f);
    }

    // Adds f to positions [first, last); refuses changes that break slope order.
    void range_add(Index first, Index last, const LinearFn<S>& f) {
        if (first < 0 || last > size() || first > last) throw std::out_of_range("range_add bounds out of range");
        if (first == last) return;
        if (first > 0 && lines_[first].slope + f.slope < lines_[first - 1].slope)
            throw EnvelopeOrderError("range_add would break slope order");
        if (last < size() && lines_[last].slope < lines_[last - 1].slope + f.slope)
            throw EnvelopeOrderError("range_add would break slope order");
        for (Index i = first; i < last; ++i) lines_[i] += f;
    }

    LinearFn<S> line_at(Index pos) const {
        if (pos < 0 || pos >= size()) throw std::out_of_range("line position out of range");
        return lines_[pos];
    }

    std::vector<LinearFn<S>> lines() const { return lines_; }

    S envelope_value(const S& tau) const {
        if (empty()) throw std::logic_error("envelope_value on empty envelope");
        S best = lines_[0](tau);
        for (std::size_t i = 1; i < lines_.size(); ++i) {
            S v = lines_[i](tau);
            if (v < best) best = std::move(v);
        }
        return best;
    }

    std::optional<S> first_root_at_or_after(const S& tau0) const {
        if (empty()) return std::nullopt;
        if (envelope_value(tau0) <= S(0)) return tau0;
        // Every line is positive at tau0, so only falling lines can reach zero.
        std::optional<S> best;
        for (const auto& l : lines_) {
            if (!(l.slope < S(0))) continue;
            S root = -l.intercept / l.slope;
            if (!best || root < *best) best = std::move(root);
        }
        return best;
    }

    // Position of the line attaining the minimum just to the right of tau;
    // among identical lines the smallest position wins.
    Index argmin_position(const S& tau) const {
        if (empty()) throw std::logic_error("argmin on empty envelope");
        Index best = 0;
        S best_v = lines_[0](tau);
        for (Index i = 1; i < size(); ++i) {
            S v = lines_[i](tau);
            if (v < best_v || (v == best_v && lines_[i].slope < lines_[best].slope)) {
                best = i;
                best_v = std::move(v);
            }
        }
        return best;
    }

    std::uint64_t node_touches() const { return 0; }

private:
    std::vector<LinearFn<S>> lines_;
};

namespace chain {

// Persistent treap holding the lines of a lower envelope in position order
// (increasing slope, so decreasing abscissa of the active interval). Nodes
// are never mutated once shared; offsets make whole-subtree additions O(1).
template <class S>
struct Node {
    LinearFn<S> line;    // own line, before this node's offset
    LinearFn<S> offset;  // applies to the whole subtree
    LinearFn<S> first;   // lowest-position line of the subtree, offset included
    LinearFn<S> last;    // highest-position line of the subtree, offset included
    const void* tag = nullptr;
    std::uint32_t prio = 0;
    Index size = 1;
    std::shared_ptr<const Node> left, right;
};

template <class S>
using Ptr = std::shared_ptr<const Node<S>>;

template <class S>
Index size(const Ptr<S>& t) {
    return t ? t->size : 0;
}

template <class S>
Ptr<S> make(LinearFn<S> line, const void* tag, std::uint32_t prio, Ptr<S> left, Ptr<S> right) {
    auto n = std::make_shared<Node<S>>();
    n->first = left ? left->first : line;
    n->last = right ? right->last : line;
    n->size = 1 + size(left) + size(right);
    n->line = std::move(line);
    n->tag = tag;
    n->prio = prio;
    n->left = std::move(left);
    n->right = std::move(right);
    return n;
}

template <class S>
Ptr<S> shifted(const Ptr<S>& t, const LinearFn<S>& f) {
    if (!t || f.is_zero()) return t;
    auto n = std::make_shared<Node<S>>(*t);
    n->offset += f;
    n->first += f;
    n->last += f;
    return n;
}

template <class S>
Ptr<S> merge(const Ptr<S>& a, const Ptr<S>& b) {
    if (!a) return b;
    if (!b) return a;
    if (a->prio > b->prio) {
        Ptr<S> l = shifted(a->left, a->offset);
        Ptr<S> r = merge(shifted(a->right, a->offset), b);
        return make<S>(a->line + a->offset, a->tag, a->prio, std::move(l), std::move(r));
    }
    Ptr<S> l = merge(a, shifted(b->left, b->offset));
    Ptr<S> r = shifted(b->right, b->offset);
    return make<S>(b->line + b->offset, b->tag, b->prio, std::move(l), std::move(r));
}

// First k elements and the rest.
template <class S>
std::pair<Ptr<S>, Ptr<S>> split(const Ptr<S>& t, Index k) {
    if (!t) return {nullptr, nullptr};
    if (k <= 0) return {nullptr, t};
    if (k >= t->size) return {t, nullptr};
    Ptr<S> l = shifted(t->left, t->offset);
    Ptr<S> r = shifted(t->right, t->offset);
    LinearFn<S> own = t->line + t->offset;
    const Index ls = size(l);
    if (k <= ls) {
        auto [a, b] = split(l, k);
        return {a, make<S>(std::move(own), t->tag, t->prio, std::move(b), std::move(r))};
    }
    auto [a, b] = split(r, k - ls - 1);
    return {make<S>(std::move(own), t->tag, t->prio, std::move(l), std::move(a)), b};
}

template <class S>
struct Element {
    LinearFn<S> line;
    const void* tag = nullptr;
    Index index = 0;
};

template <class S>
Element<S> at(const Ptr<S>& root, Index k) {
    LinearFn<S> acc;
    const Node<S>* t = root.get();
    Index base = 0;
    for (;;) {
        acc += t->offset;
        const Index ls = size(t->left);
        if (k < ls) {
            t = t->left.get();
        } else if (k == ls) {
            return {acc + t->line, t->tag, base + k};
        } else {
            k -= ls + 1;
            base += ls + 1;
            t = t->right.get();
        }
    }
}

enum class Side { Left, Right };

// Element active on (tau - eps, tau) for Side::Left, on (tau, tau + eps) for Side::Right.
template <class S>
Element<S> locate(const Ptr<S>& root, const S& tau, Side side) {
    LinearFn<S> acc;
    std::optional<LinearFn<S>> prev, next;  // neighbours inherited from ancestors
    const Node<S>* t = root.get();
    Index base = 0;
    for (;;) {
        acc += t->offset;
        LinearFn<S> e = acc + t->line;
        std::optional<LinearFn<S>> p = t->left ? std::optional<LinearFn<S>>(acc + t->left->last) : prev;
        std::optional<LinearFn<S>> q = t->right ? std::optional<LinearFn<S>>(acc + t->right->first) : next;
        bool go_left = false, go_right = false;
        if (p) {
            S hi = crossing(*p, e);
            go_left = side == Side::Right ? !(tau < hi) : hi < tau;
        }
        if (!go_left && q) {
            S lo = crossing(e, *q);
            go_right = side == Side::Right ? tau < lo : !(lo < tau);
        }
        const Index ls = size(t->left);
        if (go_left && t->left) {
            next = e;
            t = t->left.get();
        } else if (go_right && t->right) {
            prev = e;
            base += ls + 1;
            t = t->right.get();
        } else {
            return {std::move(e), t->tag, base + ls};
        }
    }
}

template <class S>
S value(const Ptr<S>& root, const S& tau) {
    return locate(root, tau, Side::Right).line(tau);
}

// Smallest tau >= tau0 where the envelope is <= 0.
template <class S>
std::optional<S> first_root(const Ptr<S>& root, const S& tau0) {
    if (!root) return std::nullopt;
    if (!(S(0) < value(root, tau0))) return tau0;
    LinearFn<S> acc;
    std::optional<LinearFn<S>> prev, next;
    const Node<S>* t = root.get();
    while (t) {
        acc += t->offset;
        LinearFn<S> e = acc + t->line;
        std::optional<LinearFn<S>> p = t->left ? std::optional<LinearFn<S>>(acc + t->left->last) : prev;
        std::optional<LinearFn<S>> q = t->right ? std::optional<LinearFn<S>>(acc + t->right->first) : next;
        std::optional<S> hi, lo;
        if (p) hi = crossing(*p, e);
        if (q) lo = crossing(e, *q);
        if (hi && !(tau0 < *hi)) {
            // Active interval lies left of tau0.
            next = e;
            t = t->left.get();
            continue;
        }
        S from = (lo && tau0 < *lo) ? *lo : tau0;
        if (!(S(0) < e(from))) {
            prev = e;
            t = t->right.get();
            continue;
        }
        if (hi && S(0) < e(*hi)) {
            next = e;
            t = t->left.get();
            continue;
        }
        if (!(e.slope < S(0))) return std::nullopt;
        return -e.intercept / e.slope;
    }
    return std::nullopt;
}

// Envelope of lines from P (lower positions) and Q (higher positions). All
// slopes in P are <= all slopes in Q, so the result is a prefix of P followed
// by a suffix of Q; both cut points are found by binary search.
template <class S>
Ptr<S> combine(const Ptr<S>& P, const Ptr<S>& Q) {
    if (!P) return Q;
    if (!Q) return P;
    const Index p = P->size, q = Q->size;

    // Does P's element i survive? D = Q - P is non-decreasing; element i survives
    // iff D is positive just left of its right breakpoint.
    auto keep_p = [&](Index i) {
        Element<S> e = at(P, i);
        if (i == 0) {
            const LinearFn<S>& f = Q->first;
            return e.line.slope < f.slope || (e.line.slope == f.slope && !(f.intercept < e.line.intercept));
        }
        Element<S> e_prev = at(P, i - 1);
        S x = crossing(e_prev.line, e.line);
        Element<S> fq = locate(Q, x, Side::Left);
        S d = fq.line(x) - e.line(x);
        return S(0) < d || (d == S(0) && fq.line.slope == e.line.slope);
    };
    // Does Q's element j survive? iff D < 0 at its left breakpoint.
    auto keep_q = [&](Index j) {
        Element<S> f = at(Q, j);
        if (j == q - 1) {
            const LinearFn<S>& e = P->last;
            return e.slope < f.line.slope || (e.slope == f.line.slope && f.line.intercept < e.intercept);
        }
        Element<S> f_next = at(Q, j + 1);
        S y = crossing(f.line, f_next.line);
        S d = f.line(y) - value(P, y);
        return d < S(0);
    };

    Index lo = 0, hi = p;  // keep_p true on [0, a), false on [a, p)
    while (lo < hi) {
        Index mid = (lo + hi) / 2;
        if (keep_p(mid)) lo = mid + 1;
        else hi = mid;
    }
    const Index a = lo;
    lo = 0;
    hi = q;  // keep_q false on [0, b), true on [b, q)
    while (lo < hi) {
        Index mid = (lo + hi) / 2;
        if (keep_q(mid)) hi = mid;
        else lo = mid + 1;
    }
    Index b = lo;
    if (a > 0 && b < q && at(P, a - 1).line.slope == at(Q, b).line.slope) ++b;
    return merge(split(P, a).first, split(Q, b).second);
}

template <class S>
void collect(const Ptr<S>& t, LinearFn<S> acc, std::vector<Element<S>>& out) {
    if (!t) return;
    acc += t->offset;
    collect(t->left, acc, out);
    out.push_back({acc + t->line, t->tag, static_cast<Index>(out.size())});
    collect(t->right, acc, out);
}

}  // namespace chain

// Balanced tree over positions. Every node carries a lazy linear offset for its
// subtree and a persistent chain with the lower envelope of its subtree, built
// from the children's chains by one split/concatenate per merge.
template <class S = Rational>
class TreeEnvelope {
    struct Node {
        LinearFn<S> line;
        LinearFn<S> lazy;
        chain::Ptr<S> env;  // excludes this node's lazy
        Node* left = nullptr;
        Node* right = nullptr;
        Node* parent = nullptr;
        std::uint32_t prio = 0;
        Index size = 1;
    };

public:
    TreeEnvelope() = default;
    explicit TreeEnvelope(std::vector<LinearFn<S>> lines) { build(std::move(lines)); }
    TreeEnvelope(const TreeEnvelope&) = delete;
    TreeEnvelope& operator=(const TreeEnvelope&) = delete;
    TreeEnvelope(TreeEnvelope&& o) noexcept : root_(o.root_), seed_(o.seed_), touches_(o.touches_) { o.root_ = nullptr; }
    TreeEnvelope& operator=(TreeEnvelope&& o) noexcept {
        if (this != &o) {
            destroy(root_);
            root_ = o.root_;
            seed_ = o.seed_;
            touches_ = o.touches_;
            o.root_ = nullptr;
        }
        return *this;
    }
    ~TreeEnvelope() { destroy(root_); }

    void build(std::vector<LinearFn<S>> lines) {
        detail::check_sorted(lines);
        destroy(root_);
        root_ = nullptr;
        // Cartesian-tree construction on a stack keeps build linear in treap operations.
        std::vector<Node*> spine;
        for (auto& l : lines) {
            Node* n = new Node;
            n->line = std::move(l);
            n->prio = detail::next_priority(seed_);
            Node* last = nullptr;
            while (!spine.empty() && spine.back()->prio < n->prio) {
                last = spine.back();
                spine.pop_back();
            }
            n->left = last;
            if (last) last->parent = n;
            if (!spine.empty()) {
                spine.back()->right = n;
                n->parent = spine.back();
            }
            spine.push_back(n);
        }
        if (!spine.empty()) {
            root_ = spine.front();
            root_->parent = nullptr;
            pull_all(root_);
        }
    }

    Index size() const { return root_ ? root_->size : 0; }
    bool empty() const { return root_ == nullptr; }

    void insert(Index pos, const LinearFn<S>& line) {
        if (pos < 0 || pos > size()) throw std::out_of_range("insert position out of range");
        if ((pos > 0 && line.slope < line_at(pos - 1).slope) || (pos < size() && line_at(pos).slope < line.slope))
            throw EnvelopeOrderError("insert would break slope order");
        Node* n = new Node;
        n->line = line;
        n->prio = detail::next_priority(seed_);
        pull(n);
        auto [a, b] = split(root_, pos);
        root_ = merge(merge(a, n), b);
    }

    void remove(Index pos) {
        if (pos < 0 || pos >= size()) throw std::out_of_range("remove position out of range");
        auto [a, b] = split(root_, pos);
        auto [mid, c] = split(b, 1);
        delete mid;
        root_ = merge(a, c);
    }

    void range_add(Index from_pos, const LinearFn<S>& f) {
        if (S(0) < f.slope) throw EnvelopeOrderError("range_add needs a non-positive slope");
        range_add(from_pos, size(), f);
    }

    void range_add(Index first, Index last, const LinearFn<S>& f) {
        if (first < 0 || last > size() || first > last) throw std::out_of_range("range_add bounds out of range");
        if (first == last || f.is_zero()) return;
        if (first > 0 && line_at(first).slope + f.slope < line_at(first - 1).slope)
            throw EnvelopeOrderError("range_add would break slope order");
        if (last < size() && line_at(last).slope < line_at(last - 1).slope + f.slope)
            throw EnvelopeOrderError("range_add would break slope order");
        if (first == 0 && last == size()) {
            root_->lazy += f;
            return;
        }
        auto [a, rest] = split(root_, first);
        auto [mid, c] = split(rest, last - first);
        mid->lazy += f;
        root_ = merge(merge(a, mid), c);
    }

    LinearFn<S> line_at(Index pos) const {
        if (pos < 0 || pos >= size()) throw std::out_of_range("line position out of range");
        LinearFn<S> acc;
        const Node* t = root_;
        for (;;) {
            acc += t->lazy;
            const Index ls = t->left ? t->left->size : 0;
            if (pos < ls) {
                t = t->left;
            } else if (pos == ls) {
                return acc + t->line;
            } else {
                pos -= ls + 1;
                t = t->right;
            }
        }
    }

    std::vector<LinearFn<S>> lines() const {
        std::vector<LinearFn<S>> out;
        out.reserve(static_cast<std::size_t>(size()));
        collect_lines(root_, LinearFn<S>{}, out);
        return out;
    }

    S envelope_value(const S& tau) const {
        if (empty()) throw std::logic_error("envelope_value on empty envelope");
        return chain::value(root_env(), tau);
    }

    std::optional<S> first_root_at_or_after(const S& tau0) const {
        if (empty()) return std::nullopt;
        return chain::first_root(root_env(), tau0);
    }

    Index argmin_position(const S& tau) const {
        if (empty()) throw std::logic_error("argmin on empty envelope");
        auto e = chain::locate(root_env(), tau, chain::Side::Right);
        return position_of(static_cast<const Node*>(e.tag));
    }

    // Lines currently on the envelope, in position order, with their positions.
    std::vector<std::pair<Index, LinearFn<S>>> hull() const {
        std::vector<chain::Element<S>> els;
        if (root_) chain::collect(root_env(), LinearFn<S>{}, els);
        std::vector<std::pair<Index, LinearFn<S>>> out;
        for (auto& e : els) out.emplace_back(position_of(static_cast<const Node*>(e.tag)), e.line);
        return out;
    }

    std::uint64_t node_touches() const { return touches_; }

private:
    chain::Ptr<S> root_env() const { return chain::shifted(root_->env, root_->lazy); }

    static Index position_of(const Node* n) {
        Index pos = n->left ? n->left->size : 0;
        while (n->parent) {
            if (n->parent->right == n) pos += (n->parent->left ? n->parent->left->size : 0) + 1;
            n = n->parent;
        }
        return pos;
    }

    static void destroy(Node* n) {
        std::vector<Node*> stack;
        if (n) stack.push_back(n);
        while (!stack.empty()) {
            Node* t = stack.back();
            stack.pop_back();
            if (t->left) stack.push_back(t->left);
            if (t->right) stack.push_back(t->right);
            delete t;
        }
    }

    static void collect_lines(const Node* t, LinearFn<S> acc, std::vector<LinearFn<S>>& out) {
        if (!t) return;
        acc += t->lazy;
        collect_lines(t->left, acc, out);
        out.push_back(acc + t->line);
        collect_lines(t->right, acc, out);
    }

    static void push(Node* t) {
        if (t->lazy.is_zero()) return;
        t->line += t->lazy;
        t->env = chain::shifted(t->env, t->lazy);
        if (t->left) t->left->lazy += t->lazy;
        if (t->right) t->right->lazy += t->lazy;
        t->lazy = LinearFn<S>{};
    }

    void pull(Node* t) {
        ++touches_;
        t->size = 1;
        chain::Ptr<S> env = chain::make<S>(t->line, t, detail::next_priority(seed_), nullptr, nullptr);
        if (t->left) {
            t->size += t->left->size;
            t->left->parent = t;
            env = chain::combine(chain::shifted(t->left->env, t->left->lazy), env);
        }
        if (t->right) {
            t->size += t->right->size;
            t->right->parent = t;
            env = chain::combine(env, chain::shifted(t->right->env, t->right->lazy));
        }
        t->env = std::move(env);
    }

    void pull_all(Node* t) {
        if (!t) return;
        pull_all(t->left);
        pull_all(t->right);
        pull(t);
    }

    std::pair<Node*, Node*> split(Node* t, Index k) {
        if (!t) return {nullptr, nullptr};
        push(t);
        const Index ls = t->left ? t->left->size : 0;
        if (k <= ls) {
            auto [a, b] = split(t->left, k);
            t->left = b;
            pull(t);
            t->parent = nullptr;
            if (a) a->parent = nullptr;
            return {a, t};
        }
        auto [a, b] = split(t->right, k - ls - 1);
        t->right = a;
        pull(t);
        t->parent = nullptr;
        if (b) b->parent = nullptr;
        return {t, b};
    }

    Node* merge(Node* a, Node* b) {
        if (!a) return b;
        if (!b) return a;
        if (a->prio > b->prio) {
            push(a);
            a->right = merge(a->right, b);
            pull(a);
            a->parent = nullptr;
            return a;
        }
        push(b);
        b->left = merge(a, b->left);
        pull(b);
        b->parent = nullptr;
        return b;
    }

    Node* root_ = nullptr;
    std::uint64_t seed_ = 0x5eed;
    std::uint64_t touches_ = 0;
};

}  // namespace emdut
