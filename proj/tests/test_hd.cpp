#include <doctest.h>

#include <random>

#include "emdut/emdut_hd.hpp"
#include "support.hpp"

using namespace emdut;
using namespace testing_support;

namespace {

Rational brute_over_candidates(const PointSetQ& B, const PointSetQ& R, Metric metric) {
    std::optional<Rational> best;
    for (const auto& tau : hd_candidates(B, R, metric)) {
        Rational v = emd_bruteforce_at(B, R, metric, tau);
        if (!best || v < *best) best = v;
    }
    return *best;
}

PointQ rational_point(std::initializer_list<Rational> xs) {
    PointQ p(static_cast<Index>(xs.size()));
    Index i = 0;
    for (const auto& x : xs) p(i++) = x;
    return p;
}

}  // namespace

TEST_CASE("hyperplane families") {
    auto B = plane_set({{0, 0}});
    auto R = plane_set({{1, 2}});
    auto l1 = hyperplanes_l1(B, R);
    REQUIRE(l1.size() == 2);
    CHECK(l1[0].eval(point({7, 2})) == Rational(0));  // normals sort as (0,1) < (1,0)
    CHECK(l1[1].eval(point({1, 7})) == Rational(0));

    auto two = hyperplanes_l1(B, plane_set({{1, 2}, {3, 4}}));
    CHECK(two.size() == 4);
    CHECK(hyperplanes_l1(B, plane_set({{1, 2}, {1, 2}})).size() == 2);

    auto linf = hyperplanes_linf(B, R);
    REQUIRE(linf.size() == 4);
    // tau = (1, 2) lies on all four: tau1 = 1, tau2 = 2, tau1 - tau2 = -1, tau1 + tau2 = 3.
    for (const auto& h : linf) CHECK(h.eval(point({1, 2})) == Rational(0));
    CHECK(linf[1].eval(point({0, 1})) == Rational(0));  // tau1 - tau2 = -1
    CHECK(linf[3].eval(point({0, 3})) == Rational(0));  // tau1 + tau2 = 3

    auto line_b = line_set({0, 4}), line_r = line_set({1, 2, 9});
    CHECK(hyperplanes_linf(line_b, line_r) == hyperplanes_l1(line_b, line_r));

    std::mt19937_64 rng(3);
    auto B3 = random_points(rng, 1, 3, -1000, 1000);
    auto R3 = random_points(rng, 1, 3, -1000, 1000);
    CHECK(hyperplanes_linf(B3, R3).size() == 9);
}

TEST_CASE("arrangement vertices") {
    std::vector<Hyperplane<Rational>> H{{point({1, 0}), Rational(-1)}, {point({0, 1}), Rational(-2)}};
    auto v = arrangement_vertices(H, 2);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == point({1, 2}));

    std::vector<Hyperplane<Rational>> parallel{{point({1, 0}), Rational(-1)}, {point({2, 0}), Rational(3)}};
    CHECK(arrangement_vertices(parallel, 2).empty());

    auto B = plane_set({{0, 0}, {1, 1}});
    auto R = plane_set({{2, 5}, {3, 3}, {0, 1}});
    auto lattice = hd_candidates(B, R, Metric::L1);
    auto vertices = arrangement_vertices(hyperplanes_l1(B, R), 2);
    CHECK(lattice == vertices);

    std::vector<Hyperplane<Rational>> crossing{{point({1, 1}), Rational(0)}, {point({1, -1}), Rational(-1)}};
    auto diag = arrangement_vertices(crossing, 2);
    REQUIRE(diag.size() == 1);
    CHECK(diag[0] == rational_point({Rational(1, 2), Rational(-1, 2)}));

    CHECK_THROWS_AS(arrangement_vertices(hyperplanes_linf(B, R), 2, 10), BudgetExceeded);
}

TEST_CASE("emdut_hd examples") {
    auto same = plane_set({{1, 2}, {-3, 4}, {0, 0}});
    for (Metric metric : {Metric::L1, Metric::LInf}) {
        auto res = emdut_hd(same, same, metric);
        CHECK(res.value == Rational(0));
        CHECK(res.tau == point({0, 0}));
        CHECK(res.phi == Matching::identity(3));
    }
    auto single = emdut_hd(plane_set({{0, 0}}), plane_set({{5, 5}}), Metric::L1);
    CHECK(single.value == Rational(0));
    CHECK(single.tau == point({5, 5}));

    auto pair = emdut_hd(plane_set({{0, 0}, {1, 0}}), plane_set({{0, 0}, {3, 0}}), Metric::L1);
    CHECK(pair.value == Rational(2));
    CHECK(matching_cost(plane_set({{0, 0}, {1, 0}}), plane_set({{0, 0}, {3, 0}}), Metric::L1, pair.phi, pair.tau) ==
          Rational(2));

    CHECK_THROWS_AS(emdut_hd(plane_set({{0, 0}, {1, 1}}), plane_set({{0, 0}}), Metric::L1), std::invalid_argument);
    CHECK_THROWS_AS(emdut_hd(plane_set({{0, 0}}), line_set({0}), Metric::L1), std::invalid_argument);
}

TEST_CASE("emdut_hd matches brute force over its candidates") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = uniform(rng, 1, 4);
        const Index m = uniform(rng, 1, std::min<Index>(3, n));
        auto B = random_points(rng, m, 2, -6, 6);
        auto R = random_points(rng, n, 2, -6, 6);
        for (Metric metric : {Metric::L1, Metric::LInf}) {
            INFO("trial " << trial << " metric " << to_string(metric));
            auto res = emdut_hd(B, R, metric);
            CHECK(res.value == brute_over_candidates(B, R, metric));
            CHECK(res.value <= emd_value(B, R, metric, zero_point<Rational>(2)));
            CHECK(matching_cost(B, R, metric, res.phi, res.tau) == res.value);
        }
    }
}

TEST_CASE("returned translation is the smallest optimal candidate and optimal for its matching") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const Index n = uniform(rng, 1, 4);
        const Index m = uniform(rng, 1, n);
        auto B = random_points(rng, m, 2, -4, 4);
        auto R = random_points(rng, n, 2, -4, 4);
        for (Metric metric : {Metric::L1, Metric::LInf}) {
            auto res = emdut_hd(B, R, metric);
            std::optional<PointQ> first;
            for (const auto& tau : hd_candidates(B, R, metric)) {
                CHECK(res.value <= emd_value(B, R, metric, tau));
                if (!first && emd_value(B, R, metric, tau) == res.value) first = tau;
                CHECK(matching_cost(B, R, metric, res.phi, res.tau) <= matching_cost(B, R, metric, res.phi, tau));
            }
            REQUIRE(first);
            CHECK(*first == res.tau);
        }
    }
}

TEST_CASE("LInf branch and bound agrees with full enumeration") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const Index d = uniform(rng, 2, 3);
        const Index n = uniform(rng, 1, 4);
        const Index m = uniform(rng, 1, n);
        const long span = trial % 2 ? 3 : 10;
        auto B = random_points(rng, m, d, -span, span);
        auto R = random_points(rng, n, d, -span, span);
        HdOptions enumerate{kDefaultHdBudget, HdStrategy::Enumerate};
        HdOptions boxes{kDefaultHdBudget, HdStrategy::BranchAndBound};
        auto a = emdut_hd(B, R, Metric::LInf, enumerate);
        auto b = emdut_hd(B, R, Metric::LInf, boxes);
        INFO("trial " << trial);
        CHECK(a.stats.method == "linf-arrangement");
        CHECK(b.stats.method == "linf-branch-and-bound");
        CHECK(a.value == b.value);
        CHECK(a.tau == b.tau);
        CHECK(a.phi == b.phi);
    }
}

TEST_CASE("LInf branch and bound stays exact with fine rationals and tied optima") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 60; ++trial) {
        const Index n = uniform(rng, 2, 4);
        const Index m = uniform(rng, 1, n);
        const Index d = m * n <= 4 ? uniform(rng, 2, 4) : uniform(rng, 2, 3);
        // Odd denominators are not dyadic, so box coordinates never land on them exactly.
        auto B = trial % 3 == 0 ? random_points(rng, m, d, -2, 2) : random_points(rng, m, d, -5, 5, 999);
        auto R = trial % 3 == 0 ? random_points(rng, n, d, -2, 2) : random_points(rng, n, d, -5, 5, 999);
        auto a = emdut_hd(B, R, Metric::LInf, {kDefaultHdBudget, HdStrategy::Enumerate});
        auto b = emdut_hd(B, R, Metric::LInf, {kDefaultHdBudget, HdStrategy::BranchAndBound});
        INFO("trial " << trial);
        CHECK(a.value == b.value);
        CHECK(a.tau == b.tau);
    }
}

TEST_CASE("LInf in the plane equals L1 after rotation") {
    std::mt19937_64 rng(41);
    CHECK(rotate_45_to_l1(plane_set({{0, 0}})) == plane_set({{0, 0}}));
    CHECK(rotate_45_to_l1(plane_set({{2, 0}})) == plane_set({{1, 1}}));
    CHECK_THROWS_AS(rotate_45_to_l1(line_set({1})), std::invalid_argument);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = uniform(rng, 1, 5);
        const Index m = uniform(rng, 1, n);
        auto B = random_points(rng, m, 2, -8, 8, 2);
        auto R = random_points(rng, n, 2, -8, 8, 2);
        auto linf = emdut_hd(B, R, Metric::LInf);
        auto l1 = emdut_hd(rotate_45_to_l1(B), rotate_45_to_l1(R), Metric::L1);
        CHECK(linf.value == l1.value);
    }
}

TEST_CASE("emdut_hd is translation invariant") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = uniform(rng, 1, 4);
        const Index m = uniform(rng, 1, n);
        auto B = random_points(rng, m, 3, -5, 5);
        auto R = random_points(rng, n, 3, -5, 5);
        PointQ c(3);
        for (Index i = 0; i < 3; ++i) c(i) = random_rational(rng, -20, 20, 5);
        for (Metric metric : {Metric::L1, Metric::LInf}) {
            auto base = emdut_hd(B, R, metric);
            auto moved = emdut_hd(translate(B, c), R, metric);
            CHECK(base.value == moved.value);
        }
    }
}

TEST_CASE("budget exhaustion is reported") {
    std::mt19937_64 rng(61);
    auto B = random_points(rng, 3, 3, -50, 50);
    auto R = random_points(rng, 4, 3, -50, 50);
    CHECK_THROWS_AS(emdut_hd(B, R, Metric::L1, HdOptions{5, HdStrategy::Auto}), BudgetExceeded);
    CHECK_THROWS_AS(emdut_hd(B, R, Metric::LInf, HdOptions{5, HdStrategy::Auto}), BudgetExceeded);
}
