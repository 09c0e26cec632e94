#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "emdut/rational.hpp"

namespace Eigen {

template <>
struct NumTraits<emdut::Rational> : GenericNumTraits<emdut::Rational> {
    using Real = emdut::Rational;
    using NonInteger = emdut::Rational;
    using Literal = emdut::Rational;
    using Nested = emdut::Rational;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 8,
        MulCost = 16
    };
    static Real epsilon() { return Real(0); }
    static Real dummy_precision() { return Real(0); }
    static int digits10() { return 0; }
};

}  // namespace Eigen

namespace emdut {

// A search or scale guard ran out; the input itself was fine.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Index = Eigen::Index;

template <class S>
using Point = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
using Coords = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

using PointQ = Point<Rational>;

enum class Metric { L1, LInf };

inline std::string_view to_string(Metric m) { return m == Metric::L1 ? "l1" : "linf"; }

inline Metric parse_metric(std::string_view s) {
    if (s == "l1" || s == "L1") return Metric::L1;
    if (s == "linf" || s == "LInf" || s == "Linf" || s == "inf") return Metric::LInf;
    throw std::invalid_argument("unknown metric '" + std::string(s) + "'");
}

// Immutable list of points sharing one dimension. Column i holds point i, so
// index order is the identity of a point and duplicates are allowed.
template <class S = Rational>
class PointSet {
public:
    explicit PointSet(Index dim = 1) : coords_(dim, 0) {
        if (dim < 1) throw std::invalid_argument("point set dimension must be positive");
    }

    explicit PointSet(Coords<S> coords) : coords_(std::move(coords)) {
        if (coords_.rows() < 1) throw std::invalid_argument("point set dimension must be positive");
    }

    static PointSet from_points(Index dim, const std::vector<Point<S>>& pts) {
        Coords<S> c(dim, static_cast<Index>(pts.size()));
        for (Index i = 0; i < c.cols(); ++i) {
            if (pts[i].size() != dim) throw std::invalid_argument("point has wrong dimension");
            c.col(i) = pts[i];
        }
        return PointSet(std::move(c));
    }

    // Convenience for one-dimensional sets.
    static PointSet line(const std::vector<S>& xs) {
        Coords<S> c(1, static_cast<Index>(xs.size()));
        for (Index i = 0; i < c.cols(); ++i) c(0, i) = xs[i];
        return PointSet(std::move(c));
    }

    Index dim() const { return coords_.rows(); }
    Index size() const { return coords_.cols(); }
    bool empty() const { return coords_.cols() == 0; }

    const Coords<S>& coords() const { return coords_; }
    auto point(Index i) const { return coords_.col(i); }
    const S& operator()(Index axis, Index i) const { return coords_(axis, i); }

    std::vector<S> axis(Index a) const {
        std::vector<S> out(static_cast<std::size_t>(size()));
        for (Index i = 0; i < size(); ++i) out[i] = coords_(a, i);
        return out;
    }

    friend bool operator==(const PointSet& a, const PointSet& b) {
        return a.dim() == b.dim() && a.size() == b.size() && a.coords_ == b.coords_;
    }

private:
    Coords<S> coords_;
};

using PointSetQ = PointSet<Rational>;

template <class S>
PointSet<S> translate(const PointSet<S>& p, const Point<S>& tau) {
    if (tau.size() != p.dim()) throw std::invalid_argument("translation has wrong dimension");
    Coords<S> c = p.coords();
    c.colwise() += tau;
    return PointSet<S>(std::move(c));
}

// Entry j is the red index assigned to blue index j.
struct Matching {
    std::vector<Index> assignment;

    Index size() const { return static_cast<Index>(assignment.size()); }
    Index operator[](Index j) const { return assignment[static_cast<std::size_t>(j)]; }
    friend bool operator==(const Matching&, const Matching&) = default;

    static Matching identity(Index m) {
        Matching out;
        out.assignment.resize(static_cast<std::size_t>(m));
        for (Index j = 0; j < m; ++j) out.assignment[j] = j;
        return out;
    }
};

inline void check_matching(const Matching& phi, Index blue_count, Index red_count) {
    if (phi.size() != blue_count) throw std::invalid_argument("matching length differs from |B|");
    std::vector<char> used(static_cast<std::size_t>(red_count), 0);
    for (Index r : phi.assignment) {
        if (r < 0 || r >= red_count) throw std::invalid_argument("matching entry out of range");
        if (used[r]) throw std::invalid_argument("matching is not injective");
        used[r] = 1;
    }
}

template <class DA, class DB>
auto lp_distance(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b, Metric metric) {
    using S = typename DA::Scalar;
    if (a.size() != b.size()) throw std::invalid_argument("distance between points of different dimension");
    S out(0);
    for (Index i = 0; i < a.size(); ++i) {
        S d = a(i) - b(i);
        if (d < S(0)) d = -d;
        if (metric == Metric::L1) out += d;
        else if (out < d) out = std::move(d);
    }
    return out;
}

// ||b + tau - r||_p without materialising the translated point.
template <class DB, class DT, class DR>
auto shifted_distance(const Eigen::MatrixBase<DB>& b, const Eigen::MatrixBase<DT>& tau,
                      const Eigen::MatrixBase<DR>& r, Metric metric) {
    using S = typename DB::Scalar;
    S out(0);
    for (Index i = 0; i < b.size(); ++i) {
        S d = b(i);
        d += tau(i);
        d -= r(i);
        if (d < S(0)) d = -d;
        if (metric == Metric::L1) out += d;
        else if (out < d) out = std::move(d);
    }
    return out;
}

template <class S>
S matching_cost(const PointSet<S>& B, const PointSet<S>& R, Metric metric, const Matching& phi,
                const Point<S>& tau) {
    if (B.dim() != R.dim() || tau.size() != B.dim())
        throw std::invalid_argument("dimension mismatch in matching_cost");
    check_matching(phi, B.size(), R.size());
    S total(0);
    for (Index j = 0; j < B.size(); ++j) total += shifted_distance(B.point(j), tau, R.point(phi[j]), metric);
    return total;
}

template <class S>
Point<S> zero_point(Index dim) {
    return Point<S>::Constant(dim, S(0));
}

// Indices of a one-dimensional coordinate list in increasing order, ties by index.
template <class S>
std::vector<Index> sorted_order(const std::vector<S>& xs) {
    std::vector<Index> idx(xs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Index>(i);
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return xs[a] < xs[b]; });
    return idx;
}

}  // namespace emdut
