#include <doctest.h>

#include <algorithm>
#include <random>

#include "emdut/emd.hpp"
#include "support.hpp"

using namespace emdut;
using namespace testing_support;

namespace {

// Minimum cost and the lexicographically smallest injection attaining it.
std::pair<Rational, std::vector<Index>> lexmin_bruteforce(const PointSetQ& B, const PointSetQ& R, Metric metric) {
    const Index m = B.size(), n = R.size();
    std::vector<Index> cur(m), best_assign;
    std::vector<char> used(n, 0);
    std::optional<Rational> best;
    auto rec = [&](auto&& self, Index j, Rational acc) -> void {
        if (j == m) {
            if (!best || acc < *best) {
                best = acc;
                best_assign = cur;
            }
            return;
        }
        for (Index r = 0; r < n; ++r) {
            if (used[r]) continue;
            used[r] = 1;
            cur[j] = r;
            self(self, j + 1, acc + lp_distance(B.point(j), R.point(r), metric));
            used[r] = 0;
        }
    };
    rec(rec, 0, Rational(0));
    return {*best, best_assign};
}

}  // namespace

TEST_CASE("emd_1d_monotone examples") {
    auto e = emd_1d_monotone(line_set({}), line_set({1, 2}));
    CHECK(e.value == Rational(0));
    CHECK(e.phi.size() == 0);
    auto a = emd_1d_monotone(line_set({1}), line_set({0, 5}));
    CHECK(a.value == Rational(1));
    CHECK(a.phi.assignment == std::vector<Index>{0});
    auto b = emd_1d_monotone(line_set({0, 3}), line_set({1, 2, 10}));
    CHECK(b.value == Rational(2));
    CHECK(b.phi.assignment == std::vector<Index>{0, 1});
    CHECK_THROWS_AS(emd_1d_monotone(line_set({1, 2}), line_set({0})), std::invalid_argument);
}

TEST_CASE("emd_hungarian examples") {
    std::mt19937_64 rng(1);
    auto P = random_points(rng, 5, 3, -9, 9);
    auto same = emd_hungarian(P, P, Metric::L1);
    CHECK(same.value == Rational(0));
    CHECK(same.phi == Matching::identity(5));

    auto r = emd_hungarian(plane_set({{0, 0}, {2, 0}}), plane_set({{0, 0}, {0, 2}}), Metric::L1);
    CHECK(r.value == emd_bruteforce(plane_set({{0, 0}, {2, 0}}), plane_set({{0, 0}, {0, 2}}), Metric::L1));
    CHECK(r.value == Rational(4));
    CHECK(r.phi.assignment == std::vector<Index>{0, 1});
    CHECK_THROWS(emd_hungarian(line_set({1, 2}), line_set({0}), Metric::L1));
}

TEST_CASE("emd_bruteforce examples") {
    CHECK(emd_bruteforce(line_set({0}), line_set({7}), Metric::L1) == Rational(7));
    CHECK(emd_bruteforce(line_set({0, 1}), line_set({0, 1}), Metric::L1) == Rational(0));
    CHECK(emd_bruteforce(line_set({0, 4}), line_set({1, 2}), Metric::L1) == Rational(3));
    CHECK_THROWS(emd_bruteforce(line_set({0}), line_set({0, 1, 2, 3, 4, 5, 6, 7, 8}), Metric::L1));
}

TEST_CASE("hungarian equals brute force and returns the lexicographic minimum") {
    std::mt19937_64 rng(2024);
    for (int it = 0; it < 400; ++it) {
        Index d = uniform(rng, 1, 3);
        Index n = uniform(rng, 1, 7);
        Index m = uniform(rng, 0, n);
        // Small coordinate ranges force many ties.
        long span = it % 2 ? 2 : 12;
        auto B = random_points(rng, m, d, -span, span, it % 3 == 0 ? 2 : 1);
        auto R = random_points(rng, n, d, -span, span);
        for (Metric metric : {Metric::L1, Metric::LInf}) {
            auto h = emd_hungarian(B, R, metric);
            CHECK(h.value == emd_bruteforce(B, R, metric));
            check_matching(h.phi, m, n);
            CHECK(matching_cost(B, R, metric, h.phi, zero_point<Rational>(d)) == h.value);
            if (m > 0) CHECK(h.phi.assignment == lexmin_bruteforce(B, R, metric).second);
        }
    }
}

TEST_CASE("one-dimensional consistency and monotone witness") {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 300; ++it) {
        Index n = uniform(rng, 1, 12);
        Index m = uniform(rng, 0, n);
        auto B = random_points(rng, m, 1, -15, 15, it % 2 ? 3 : 1);
        auto R = random_points(rng, n, 1, -15, 15);
        auto mono = emd_1d_monotone(B, R);
        CHECK(mono.value == emd_hungarian(B, R, Metric::L1).value);
        CHECK(mono.value == emd_1d_sorted_value([&] {
                  auto v = B.axis(0);
                  std::sort(v.begin(), v.end());
                  return v;
              }(), [&] {
                  auto v = R.axis(0);
                  std::sort(v.begin(), v.end());
                  return v;
              }()));
        CHECK(matching_cost(B, R, Metric::L1, mono.phi, zero_point<Rational>(1)) == mono.value);
        for (Index a = 0; a < m; ++a)
            for (Index b = 0; b < m; ++b)
                if (B(0, a) < B(0, b)) CHECK(R(0, mono.phi[a]) <= R(0, mono.phi[b]));
        auto bo = sorted_order(B.axis(0));
        std::vector<Index> rank(n);
        auto ro = sorted_order(R.axis(0));
        for (Index k = 0; k < n; ++k) rank[ro[k]] = k;
        for (Index i = 1; i < m; ++i) CHECK(rank[mono.phi[bo[i - 1]]] < rank[mono.phi[bo[i]]]);
    }
}

TEST_CASE("symmetric sizes are invariant under swapping colours") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 100; ++it) {
        Index n = uniform(rng, 1, 6);
        Index d = uniform(rng, 1, 3);
        auto B = random_points(rng, n, d, -10, 10);
        auto R = random_points(rng, n, d, -10, 10);
        for (Metric metric : {Metric::L1, Metric::LInf})
            CHECK(emd_hungarian(B, R, metric).value == emd_hungarian(R, B, metric).value);
    }
}
