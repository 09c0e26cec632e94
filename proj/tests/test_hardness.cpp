#include <doctest.h>

#include <algorithm>
#include <random>

#include "emdut/emd.hpp"
#include "emdut/hardness.hpp"
#include "emdut/io.hpp"
#include "emdut/sweep1d.hpp"
#include "support.hpp"

using namespace emdut;
using namespace testing_support;

namespace {

std::vector<Rational> sorted_line(const PointSetQ& P) {
    auto v = P.axis(0);
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<Rational> values(std::initializer_list<long> xs) {
    std::vector<Rational> v;
    for (long x : xs) v.emplace_back(x);
    std::sort(v.begin(), v.end());
    return v;
}

Rational emd_shifted(const PointSetQ& B, const PointSetQ& R, const Rational& tau) {
    return emd_1d_monotone(translate(B, PointQ(PointQ::Constant(1, tau))), R).value;
}

BitVector random_bits(std::mt19937_64& rng, int d) {
    BitVector v(static_cast<std::size_t>(d));
    for (int& b : v) b = static_cast<int>(uniform(rng, 0, 1));
    return v;
}

bool orthogonal(const BitVector& x, const BitVector& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] == 1 && y[i] == 1) return false;
    return true;
}

Graph graph(int nodes, std::initializer_list<std::pair<int, int>> edges) {
    Graph g;
    g.nodes = nodes;
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

// Points of gadget g (1-based) sit within one spacing unit right of U * g on the first axis.
std::vector<PointQ> gadget_points(const PointSetQ& P, const Rational& U, long g) {
    std::vector<PointQ> out;
    for (Index j = 0; j < P.size(); ++j) {
        PointQ p = P.point(j);
        p(0) -= U * Rational(g);
        if (-U / Rational(2) < p(0) && p(0) < U / Rational(2)) out.push_back(p);
    }
    std::sort(out.begin(), out.end(), detail::LexLess{});
    return out;
}

std::vector<PointQ> sorted_points(std::vector<PointQ> pts) {
    std::sort(pts.begin(), pts.end(), detail::LexLess{});
    return pts;
}

}  // namespace

TEST_CASE("OV gadgets for d = 2") {
    auto R = ov_red_gadget({1, 0});
    std::vector<Rational> want(16, Rational(0));
    want.insert(want.end(), 16, Rational(9));
    for (long c : {2, 3, 5, 6, 7, 8}) want.emplace_back(c);
    std::sort(want.begin(), want.end());
    CHECK(sorted_line(R) == want);

    auto B = ov_blue_gadget({0, 1});
    CHECK(sorted_line(B) == values({0, 9, 2, 3, 5, 8}));
    CHECK(emd_1d_monotone(B, R).value == Rational(0));
    CHECK(emd_hungarian(B, R, Metric::L1).value == Rational(0));

    CHECK_THROWS_AS(ov_red_gadget({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(ov_blue_gadget({}), std::invalid_argument);
}

TEST_CASE("OV gadget sizes and constants") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = static_cast<int>(uniform(rng, 1, 6));
        auto x = random_bits(rng, d), y = random_bits(rng, d);
        long ones = 0;
        for (int b : x) ones += b;
        CHECK(ov_red_gadget(x).size() == 16 * d + 4 * d - 2 * ones);
        CHECK(ov_blue_gadget(y).size() == 2 * (d + 1));
        const auto R = sorted_line(ov_red_gadget(x));
        CHECK(R.front() == Rational(0));
        CHECK(R.back() == Rational(4 * d + 1));
    }
    auto c = ov_gadget_constants(2);
    CHECK(c.w == Rational(9));
    CHECK(c.c1 == Rational(6));
    // The far-apart line works out to 4d^2 + 5d + 1 for the intercept.
    CHECK(c.c2 == Rational(27));
}

TEST_CASE("OV gadget costs on random pairs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = static_cast<int>(uniform(rng, 1, 4));
        auto x = random_bits(rng, d), y = random_bits(rng, d);
        auto R = ov_red_gadget(x), B = ov_blue_gadget(y);
        auto consts = ov_gadget_constants(d);
        INFO("trial " << trial);
        const Rational at_zero = emd_1d_monotone(B, R).value;
        CHECK(at_zero == emd_hungarian(B, R, Metric::L1).value);
        if (orthogonal(x, y)) {
            CHECK(at_zero == Rational(0));
        } else {
            CHECK(Rational(1) <= emdut_1d_sweep(B, R).value);
            for (long num = -4; num <= 4; ++num) {
                const Rational tau(num, 4);
                CHECK(max(Rational(1), abs(tau)) <= emd_shifted(B, R, tau));
            }
        }
        const Rational& w = consts.w;
        for (const Rational& mag : {w, w * Rational(2), w + Rational(1, 3), w * Rational(2) + Rational(1, 3)})
            for (const Rational& tau : {mag, -mag}) {
                CHECK(emd_shifted(B, R, tau) == consts.c1 * abs(tau) - consts.c2);
            }
    }
}

TEST_CASE("OV reduction layout and threshold") {
    OvInstance inst{{{1, 0}, {1, 1}, {0, 1}}, {{0, 1}, {1, 1}, {1, 0}}};
    auto gi = ov_reduction(inst);
    CHECK(gi.metric == Metric::L1);
    CHECK(gi.param("n") == Rational(4));
    CHECK(gi.param("delta") == Rational(8000));
    // c1 * delta * n(n-2)/4 - c2 * (n-2) = 6 * 8000 * 2 - 27 * 2
    CHECK(gi.lambda == Rational(95946));
    CHECK(gi.B.size() == 3 * 6);
    // Red cells: five copies for each vector, plus five all-ones cells in slot 0.
    const long red = 5 * (ov_red_gadget({1, 0}).size() + ov_red_gadget({1, 1}).size() + ov_red_gadget({0, 1}).size() +
                          ov_red_gadget({1, 1}).size());
    CHECK(gi.R.size() == red);
    const auto b = sorted_line(gi.B);
    CHECK(b.front() == Rational(4 * 8000));
    const auto r = sorted_line(gi.R);
    CHECK(r.front() == Rational((0 + 4) * 3 * 8000));
    CHECK(r.back() == Rational((3 + 20) * 3 * 8000 + 9));

    // Two vectors per side: n would be 3, so an all-ones vector is appended.
    auto padded = ov_reduction({{{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}});
    CHECK(padded.param("n") == Rational(4));
    CHECK(padded.B.size() == 3 * 6);

    CHECK_THROWS_AS(ov_reduction({{{1, 0, 1}}, {{0, 1, 0}}}), std::invalid_argument);  // d > n
    CHECK_THROWS_AS(ov_reduction({{{1, 0}}, {{0, 1}, {1, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(ov_reduction({{{1, 0}}, {{0, 1, 1}}}), std::invalid_argument);
}

TEST_CASE("decide_ov examples and sampled agreement") {
    CHECK(decide_ov({{{1, 0}, {1, 1}, {0, 1}}, {{0, 1}, {1, 1}, {1, 0}}}));
    CHECK_FALSE(decide_ov({{{1, 1}}, {{1, 1}}}));
    CHECK(decide_ov({{{0, 0}, {1, 1}, {1, 1}}, {{1, 1}, {1, 1}, {1, 1}}}));
    // Blue cell 3 lands next to red slot 0 here; without the all-ones cells the value overshoots.
    auto gap = decide_ov_detailed({{{0, 0, 1}, {1, 0, 1}, {0, 1, 0}}, {{1, 1, 0}, {0, 1, 1}, {1, 1, 0}}});
    CHECK(gap.yes);
    CHECK(gap.value == gap.lambda);

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 16; ++trial) {
        const int d = static_cast<int>(uniform(rng, 2, 3));
        OvInstance inst;
        for (int i = 0; i < 3; ++i) {
            inst.X.push_back(random_bits(rng, d));
            inst.Y.push_back(random_bits(rng, d));
        }
        bool truth = false;
        for (const auto& x : inst.X)
            for (const auto& y : inst.Y) truth = truth || orthogonal(x, y);
        auto dec = decide_ov_detailed(inst);
        // Recomputed from the construction formulas with n = 4.
        const long n = 4, delta = 1000L * d * n;
        const Rational lambda = Rational(2 * (d + 1) * delta * n * (n - 2), 4) - Rational((4L * d * d + 5L * d + 1) * (n - 2));
        INFO("trial " << trial);
        CHECK(dec.lambda == lambda);
        CHECK(dec.yes == truth);
        CHECK(has_orthogonal_pair(inst) == truth);
        if (truth) CHECK(dec.value == lambda);
        else CHECK(lambda + Rational(1) <= dec.value);
    }
}

TEST_CASE("combine_gadgets spacing and decomposition") {
    auto B0 = line_set({0, 2}), R0 = line_set({1, 5, 6});
    Rational U;
    auto [B, R] = combine_gadgets({{B0, R0}}, &U);
    CHECK(U == Rational((2 * 5 + 5) * 6));
    CHECK(sorted_line(B) == values({90, 92}));
    CHECK(emdut_1d_sweep(B, R).value == emdut_1d_sweep(B0, R0).value);

    auto same = line_set({3}), still = line_set({3, 3});
    auto [Bz, Rz] = combine_gadgets({{same, still}}, &U);
    CHECK(U == Rational(1));
    CHECK(sorted_line(Bz) == values({4}));

    CHECK_THROWS_AS(combine_gadgets({{still, same}}), std::invalid_argument);
    CHECK_THROWS_AS(combine_gadgets({{same, same}, {plane_set({{0, 0}}), plane_set({{0, 0}})}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(combine_gadgets({}), std::invalid_argument);

    // Combined optimum equals the best common translation for the separate gadgets.
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const Index d = trial % 2 ? 2 : 1;
        const int count = static_cast<int>(uniform(rng, 1, 3));
        std::vector<std::pair<PointSetQ, PointSetQ>> parts;
        for (int g = 0; g < count; ++g) {
            const Index n = uniform(rng, 1, 3);
            parts.emplace_back(random_points(rng, uniform(rng, 1, n), d, -4, 4), random_points(rng, n, d, -4, 4));
        }
        auto [Bc, Rc] = combine_gadgets(parts);
        // Per-axis differences within gadgets contain an optimal L1 translation.
        std::vector<std::vector<Rational>> axis(static_cast<std::size_t>(d));
        for (const auto& [Bi, Ri] : parts)
            for (Index i = 0; i < d; ++i)
                for (Index a = 0; a < Bi.size(); ++a)
                    for (Index b = 0; b < Ri.size(); ++b) axis[i].push_back(Ri(i, b) - Bi(i, a));
        std::optional<Rational> best;
        PointQ tau(d);
        auto rec = [&](auto&& self, Index i) -> void {
            if (i == d) {
                Rational sum(0);
                for (const auto& [Bi, Ri] : parts) sum += emd_hungarian_at(Bi, Ri, Metric::L1, tau).value;
                if (!best || sum < *best) best = sum;
                return;
            }
            for (const auto& t : axis[i]) {
                tau(i) = t;
                self(self, i + 1);
            }
        };
        rec(rec, 0);
        INFO("trial " << trial);
        CHECK(emdut_hd(Bc, Rc, Metric::L1).value == *best);
    }

    // Two copies of one gadget cost twice its optimum.
    auto Bg = plane_set({{0, 0}, {2, 1}}), Rg = plane_set({{1, 3}, {4, 0}, {2, 2}});
    auto [B2, R2] = combine_gadgets({{Bg, Rg}, {Bg, Rg}});
    CHECK(emdut_hd(B2, R2, Metric::L1).value == Rational(2) * emdut_hd(Bg, Rg, Metric::L1).value);
}

TEST_CASE("graph parsing and structure") {
    auto g = parse_graph("4\n1 2\n3 2\n\n4 1\n");
    CHECK(g.nodes == 4);
    CHECK(g.edges.size() == 3);
    CHECK(g.has_edge(2, 3));
    CHECK(g.has_edge(3, 2));
    CHECK_FALSE(g.has_edge(1, 3));
    CHECK(g.edges[1] == std::pair{2, 3});
    CHECK(parse_graph("3\n").edges.empty());
    CHECK_THROWS_AS(parse_graph(""), ParseError);
    CHECK_THROWS_AS(parse_graph("3\n1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("3\n1 4\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("3\n1 2\n2 1\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("3\n1 2 3\n"), ParseError);
    CHECK_THROWS_AS(parse_graph("3\n1 x\n"), ParseError);

    CHECK(parse_vectors("1 0 1\n011\n") == std::vector<BitVector>{{1, 0, 1}, {0, 1, 1}});
    CHECK_THROWS_AS(parse_vectors("1 0\n1\n"), ParseError);
    CHECK_THROWS_AS(parse_vectors("1 2\n"), ParseError);

    CHECK(parse_clique_variant("linf-sym") == CliqueVariant::LInfSym);
    CHECK(to_string(CliqueVariant::L1Sym) == "l1-sym");
    CHECK_THROWS_AS(parse_clique_variant("l2"), std::invalid_argument);
}

TEST_CASE("clique gadget coordinates") {
    auto g = graph(3, {{1, 2}, {2, 3}});
    SUBCASE("l1 asymmetric") {
        auto gi = clique_l1_asym(g, 3);
        const Rational U = gi.param("U");
        CHECK(gi.param("gadgets") == Rational(6));
        CHECK(gi.lambda == Rational(3 * 1 * 3));
        // Gadget 1 is axes (0, 1) with filler 0, gadget 2 the same with filler N.
        CHECK(gadget_points(gi.B, U, 1) == std::vector<PointQ>{point({0, 0, 0})});
        CHECK(gadget_points(gi.R, U, 1) == sorted_points({point({1, 2, 0}), point({2, 3, 0})}));
        CHECK(gadget_points(gi.R, U, 2) == sorted_points({point({1, 2, 3}), point({2, 3, 3})}));
        CHECK(gadget_points(gi.R, U, 6) == sorted_points({point({3, 1, 2}), point({3, 2, 3})}));
    }
    SUBCASE("l1 symmetric") {
        auto gi = clique_l1_sym(g, 2);
        const Rational U = gi.param("U");
        CHECK(gi.param("d") == Rational(4));
        CHECK(gi.lambda == Rational((8 * 2 - 8) * 3));
        CHECK(gadget_points(gi.B, U, 1) == sorted_points({point({0, 0, 0, 0}), point({3, 3, -3, -3})}));
        CHECK(gadget_points(gi.B, U, 2) == sorted_points({point({0, 0, 0, 0}), point({-3, -3, 3, 3})}));
        CHECK(gadget_points(gi.R, U, 1) == sorted_points({point({1, 2, 1, 2}), point({2, 3, 2, 3})}));
        CHECK(gadget_points(gi.R, U, 2) == sorted_points({point({1, 2, 1, 2}), point({2, 3, 2, 3})}));
    }
    SUBCASE("linf symmetric") {
        auto gi = clique_linf_sym(g, 2);
        const Rational U = gi.param("U");
        CHECK(gi.metric == Metric::LInf);
        CHECK(gi.param("d") == Rational(5));
        CHECK(gi.param("gadgets") == Rational(4 * 1 * 2 + 2 * 1));
        CHECK(gi.lambda == Rational(80 * 3 + 20 * 3 * 2));
        CHECK(gadget_points(gi.R, U, 1) == std::vector<PointQ>{point({30, 0, 30, 0, 0})});
        CHECK(gadget_points(gi.R, U, 2) == std::vector<PointQ>{point({-30, 0, -30, 0, 0})});
        CHECK(gadget_points(gi.R, U, 5) == std::vector<PointQ>{point({0, 30, 0, 30, 0})});
        CHECK(gadget_points(gi.B, U, 9) == sorted_points({point({30, 30, -30, -30, 0}), point({0, 0, 0, 0, 30})}));
        CHECK(gadget_points(gi.B, U, 10) ==
              sorted_points({point({30, 30, -30, -30, 0}), point({0, 0, 0, 0, -30})}));
        CHECK(gadget_points(gi.R, U, 10) == sorted_points({point({1, 2, 1, 2, 0}), point({2, 3, 2, 3, 0})}));
    }
    CHECK_THROWS_AS(clique_l1_sym(graph(3, {}), 2), std::invalid_argument);
    CHECK_THROWS_AS(clique_l1_asym(g, 1), std::invalid_argument);
}

TEST_CASE("decide_clique examples") {
    auto triangle = graph(3, {{1, 2}, {1, 3}, {2, 3}});
    auto path = graph(3, {{1, 2}, {2, 3}});
    auto empty = graph(3, {});
    CHECK(decide_clique(triangle, 3, CliqueVariant::L1Asym));
    CHECK_FALSE(decide_clique(path, 3, CliqueVariant::L1Asym));
    CHECK_FALSE(decide_clique(empty, 3, CliqueVariant::L1Asym));
    CHECK_FALSE(decide_clique_detailed(empty, 2, CliqueVariant::LInfSym).solved);

    auto tri = decide_clique_detailed(triangle, 3, CliqueVariant::L1Asym);
    CHECK(tri.value == Rational(9));
    CHECK(tri.lambda == Rational(9));
    auto pa = decide_clique_detailed(path, 3, CliqueVariant::L1Asym);
    CHECK(pa.lambda + Rational(1) <= pa.value);

    auto edge = graph(2, {{1, 2}});
    auto sym = decide_clique_detailed(edge, 2, CliqueVariant::L1Sym);
    CHECK(sym.lambda == Rational(0));
    CHECK(sym.value == Rational(0));

    auto inf = decide_clique_detailed(path, 2, CliqueVariant::LInfSym);
    CHECK(inf.lambda == Rational(80 * 3 + 20 * 3 * 2));
    CHECK(inf.value == inf.lambda);

    // k larger than N still builds an instance, and it is a no-instance.
    auto big = decide_clique_detailed(edge, 3, CliqueVariant::L1Asym);
    CHECK_FALSE(big.yes);
    CHECK(big.lambda + Rational(1) <= big.value);
}

TEST_CASE("has_clique") {
    CHECK(has_clique(graph(4, {{1, 2}, {2, 3}, {1, 3}, {3, 4}}), 3));
    CHECK_FALSE(has_clique(graph(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}}), 3));
    CHECK(has_clique(graph(2, {}), 1));
    CHECK_FALSE(has_clique(graph(2, {}), 2));
}
