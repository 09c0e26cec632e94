#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emdut/core.hpp"
#include "emdut/emdut_hd.hpp"

namespace emdut {

using BitVector = std::vector<int>;

struct OvInstance {
    std::vector<BitVector> X, Y;
};

// Nodes are 1..nodes; each edge is stored once as (u, v) with u < v.
struct Graph {
    int nodes = 0;
    std::vector<std::pair<int, int>> edges;

    void add_edge(int u, int v);
    bool has_edge(int u, int v) const;
};

struct GadgetInstance {
    PointSetQ B, R;
    Rational lambda;
    Metric metric = Metric::L1;
    std::vector<std::pair<std::string, Rational>> params;  // construction constants, in creation order

    const Rational& param(std::string_view name) const;
};

enum class CliqueVariant { L1Asym, L1Sym, LInfSym };

std::string_view to_string(CliqueVariant v);
CliqueVariant parse_clique_variant(std::string_view s);

PointSetQ ov_red_gadget(const BitVector& x);
PointSetQ ov_blue_gadget(const BitVector& y);

// Gadget constants for vectors of length d: width w and the far-apart line c1 |tau| - c2.
struct OvGadgetConstants {
    Rational w, c1, c2;
};
OvGadgetConstants ov_gadget_constants(int d);

GadgetInstance ov_reduction(const OvInstance& inst);
bool has_orthogonal_pair(const OvInstance& inst);

struct Decision {
    bool yes = false;
    Rational value;
    Rational lambda;
    bool solved = true;  // false when answered without building an instance
};

inline constexpr Index kOvMaxPairs = 50'000'000;

Decision decide_ov_detailed(const OvInstance& inst);
bool decide_ov(const OvInstance& inst);

// Places gadget i (1-based) at offset U * i on the first axis.
std::pair<PointSetQ, PointSetQ> combine_gadgets(const std::vector<std::pair<PointSetQ, PointSetQ>>& gadgets,
                                               Rational* spacing = nullptr);

GadgetInstance clique_l1_asym(const Graph& g, int k);
GadgetInstance clique_l1_sym(const Graph& g, int k);
GadgetInstance clique_linf_sym(const Graph& g, int k);
GadgetInstance clique_instance(const Graph& g, int k, CliqueVariant variant);

bool has_clique(const Graph& g, int k);

Decision decide_clique_detailed(const Graph& g, int k, CliqueVariant variant, const HdOptions& opt = {});
bool decide_clique(const Graph& g, int k, CliqueVariant variant, const HdOptions& opt = {});

// Text formats. Vectors: one per line, 0/1 entries separated by spaces or written
// as one digit string. Graphs: node count on the first line, then "u v" per edge.
std::vector<BitVector> parse_vectors(std::string_view text);
Graph parse_graph(std::string_view text);

}  // namespace emdut
