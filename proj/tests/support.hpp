#pragma once

#include <random>
#include <vector>

#include "emdut/core.hpp"

namespace testing_support {

using emdut::Index;
using emdut::PointSetQ;
using emdut::Rational;

inline Rational random_rational(std::mt19937_64& rng, long lo, long hi, long max_den = 1) {
    std::uniform_int_distribution<long> num(lo * max_den, hi * max_den);
    std::uniform_int_distribution<long> den(1, max_den);
    return Rational(num(rng), den(rng));
}

inline long uniform(std::mt19937_64& rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline PointSetQ random_points(std::mt19937_64& rng, Index count, Index dim, long lo, long hi, long max_den = 1) {
    emdut::Coords<Rational> c(dim, count);
    for (Index j = 0; j < count; ++j)
        for (Index i = 0; i < dim; ++i) c(i, j) = random_rational(rng, lo, hi, max_den);
    return PointSetQ(std::move(c));
}

inline PointSetQ line_set(std::initializer_list<long> xs) {
    std::vector<Rational> v;
    for (long x : xs) v.emplace_back(x);
    return PointSetQ::line(v);
}

inline PointSetQ plane_set(std::initializer_list<std::pair<long, long>> xs) {
    std::vector<emdut::PointQ> pts;
    for (auto [x, y] : xs) {
        emdut::PointQ p(2);
        p << Rational(x), Rational(y);
        pts.push_back(p);
    }
    return PointSetQ::from_points(2, pts);
}

inline emdut::PointQ point(std::initializer_list<long> xs) {
    emdut::PointQ p(static_cast<Index>(xs.size()));
    Index i = 0;
    for (long x : xs) p(i++) = Rational(x);
    return p;
}

}  // namespace testing_support
