#include "emdut/hardness.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "emdut/io.hpp"
#include "emdut/sweep1d.hpp"

namespace emdut {

namespace {

Rational binom2(int k) { return Rational(static_cast<long>(k) * (k - 1) / 2); }

void check_bits(const BitVector& v) {
    if (v.empty()) throw std::invalid_argument("vectors must have at least one entry");
    for (int b : v)
        if (b != 0 && b != 1) throw std::invalid_argument("vector entries must be 0 or 1");
}

PointSetQ points_1d(std::vector<Rational> xs) { return PointSetQ::line(xs); }

PointSetQ shift_1d(const PointSetQ& p, const Rational& by) { return translate(p, PointQ(PointQ::Constant(1, by))); }

PointSetQ concat(const std::vector<PointSetQ>& parts, Index dim) {
    Index total = 0;
    for (const auto& p : parts) total += p.size();
    Coords<Rational> c(dim, total);
    Index at = 0;
    for (const auto& p : parts) {
        if (p.dim() != dim) throw std::invalid_argument("gadgets have different dimensions");
        c.middleCols(at, p.size()) = p.coords();
        at += p.size();
    }
    return PointSetQ(std::move(c));
}

PointSetQ single(const PointQ& p) { return PointSetQ::from_points(p.size(), {p}); }

PointSetQ repeated(const PointQ& head, const PointQ& filler, Index copies) {
    std::vector<PointQ> pts{head};
    for (Index c = 0; c < copies; ++c) pts.push_back(filler);
    return PointSetQ::from_points(head.size(), pts);
}

PointQ zeros(int d) { return PointQ::Constant(d, Rational(0)); }

void require_edges(const Graph& g, int k, int min_k) {
    if (k < min_k) throw std::invalid_argument("clique size k must be at least " + std::to_string(min_k));
    if (g.edges.empty()) throw std::invalid_argument("graph has no edges");
}

template <class F>
void for_each_line(std::string_view text, F&& visit) {
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::vector<std::string_view> fields;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
            if (j > i) fields.push_back(line.substr(i, j - i));
            i = j;
        }
        if (!fields.empty()) visit(line_no, fields);
    }
}

int parse_int(std::string_view s, std::size_t line_no) {
    if (s.empty() || s.size() > 9) throw ParseError(line_no, "expected a small integer, found '" + std::string(s) + "'");
    int v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw ParseError(line_no, "expected an integer, found '" + std::string(s) + "'");
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace

void Graph::add_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("self-loops are not allowed");
    if (u < 1 || v < 1 || u > nodes || v > nodes) throw std::invalid_argument("edge endpoint out of range");
    if (u > v) std::swap(u, v);
    if (has_edge(u, v)) throw std::invalid_argument("duplicate edge");
    edges.emplace_back(u, v);
}

bool Graph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::find(edges.begin(), edges.end(), std::pair{u, v}) != edges.end();
}

const Rational& GadgetInstance::param(std::string_view name) const {
    for (const auto& [key, value] : params)
        if (key == name) return value;
    throw std::out_of_range("no construction parameter '" + std::string(name) + "'");
}

std::string_view to_string(CliqueVariant v) {
    switch (v) {
        case CliqueVariant::L1Asym: return "l1-asym";
        case CliqueVariant::L1Sym: return "l1-sym";
        case CliqueVariant::LInfSym: return "linf-sym";
    }
    return "";
}

CliqueVariant parse_clique_variant(std::string_view s) {
    if (s == "l1-asym") return CliqueVariant::L1Asym;
    if (s == "l1-sym") return CliqueVariant::L1Sym;
    if (s == "linf-sym") return CliqueVariant::LInfSym;
    throw std::invalid_argument("unknown clique variant '" + std::string(s) + "'");
}

PointSetQ ov_red_gadget(const BitVector& x) {
    check_bits(x);
    const int d = static_cast<int>(x.size());
    std::vector<Rational> pts;
    for (int c = 0; c < 8 * d; ++c) pts.emplace_back(0);
    for (int c = 0; c < 8 * d; ++c) pts.emplace_back(4 * d + 1);
    for (int i = 1; i <= d; ++i) {
        if (x[i - 1] == 0) {
            for (int c : {4 * i - 3, 4 * i - 2, 4 * i - 1, 4 * i}) pts.emplace_back(c);
        } else {
            for (int c : {4 * i - 2, 4 * i - 1}) pts.emplace_back(c);
        }
    }
    return points_1d(std::move(pts));
}

PointSetQ ov_blue_gadget(const BitVector& y) {
    check_bits(y);
    const int d = static_cast<int>(y.size());
    std::vector<Rational> pts{Rational(0), Rational(4 * d + 1)};
    for (int i = 1; i <= d; ++i) {
        if (y[i - 1] == 0) {
            for (int c : {4 * i - 2, 4 * i - 1}) pts.emplace_back(c);
        } else {
            for (int c : {4 * i - 3, 4 * i}) pts.emplace_back(c);
        }
    }
    return points_1d(std::move(pts));
}

OvGadgetConstants ov_gadget_constants(int d) {
    return {Rational(4 * d + 1), Rational(2 * (d + 1)), Rational(4L * d * d + 5L * d + 1)};
}

GadgetInstance ov_reduction(const OvInstance& inst) {
    if (inst.X.empty() || inst.X.size() != inst.Y.size())
        throw std::invalid_argument("OV instance needs equally many vectors on both sides, at least one");
    const std::size_t d = inst.X.front().size();
    for (const auto* side : {&inst.X, &inst.Y})
        for (const auto& v : *side) {
            check_bits(v);
            if (v.size() != d) throw std::invalid_argument("vectors have different lengths");
        }
    std::vector<BitVector> X = inst.X, Y = inst.Y;
    if ((X.size() + 1) % 2 != 0) {
        X.emplace_back(d, 1);
        Y.emplace_back(d, 1);
    }
    const long n = static_cast<long>(X.size()) + 1;
    if (static_cast<long>(d) > n) throw std::invalid_argument("vector length exceeds the cell parameter n");

    const Rational delta(1000L * static_cast<long>(d) * n);
    const auto consts = ov_gadget_constants(static_cast<int>(d));
    std::vector<PointSetQ> blue, red;
    for (long j = 1; j <= n - 1; ++j) blue.push_back(shift_1d(ov_blue_gadget(Y[j - 1]), Rational(j * n) * delta));
    // Red slot 0 holds an all-ones vector so every residue of the cell index has
    // a cell; otherwise an aligned translation can push a far blue cell one red
    // cell further out. All-ones is orthogonal only to a zero y, which is a yes anyway.
    for (long i = 0; i <= n - 1; ++i) {
        const BitVector& x = i == 0 ? BitVector(d, 1) : X[i - 1];
        for (long k = 1; k <= 5; ++k)
            red.push_back(shift_1d(ov_red_gadget(x), Rational((i + k * n) * (n - 1)) * delta));
    }

    GadgetInstance out;
    out.B = concat(blue, 1);
    out.R = concat(red, 1);
    out.metric = Metric::L1;
    // Every unaligned blue cell pays c1 * distance - c2 against its nearest red cell.
    out.lambda = consts.c1 * delta * Rational(n * (n - 2)) / Rational(4) - consts.c2 * Rational(n - 2);
    out.params = {{"d", Rational(static_cast<long>(d))}, {"n", Rational(n)}, {"delta", delta},
                  {"w", consts.w}, {"c1", consts.c1}, {"c2", consts.c2}};
    return out;
}

bool has_orthogonal_pair(const OvInstance& inst) {
    for (const auto& x : inst.X)
        for (const auto& y : inst.Y) {
            if (x.size() != y.size()) throw std::invalid_argument("vectors have different lengths");
            bool orth = true;
            for (std::size_t i = 0; i < x.size() && orth; ++i) orth = !(x[i] && y[i]);
            if (orth) return true;
        }
    return false;
}

Decision decide_ov_detailed(const OvInstance& inst) {
    auto gi = ov_reduction(inst);
    if (gi.B.size() * gi.R.size() > kOvMaxPairs)
        throw BudgetExceeded("OV instance exceeds the sweep scale guard of " + std::to_string(kOvMaxPairs) +
                             " point pairs");
    auto res = emdut_1d_sweep(gi.B, gi.R);
    return {res.value <= gi.lambda, res.value, gi.lambda};
}

bool decide_ov(const OvInstance& inst) { return decide_ov_detailed(inst).yes; }

std::pair<PointSetQ, PointSetQ> combine_gadgets(const std::vector<std::pair<PointSetQ, PointSetQ>>& gadgets,
                                               Rational* spacing) {
    if (gadgets.empty()) throw std::invalid_argument("no gadgets to combine");
    const Index dim = gadgets.front().first.dim();
    Index total = 0;
    std::optional<PointQ> lo, hi;
    for (const auto& [Bi, Ri] : gadgets) {
        if (Bi.dim() != dim || Ri.dim() != dim) throw std::invalid_argument("gadgets have different dimensions");
        if (Bi.size() > Ri.size()) throw std::invalid_argument("gadget has more blue than red points");
        total += Bi.size() + Ri.size();
        for (const PointSetQ* s : {&Bi, &Ri})
            for (Index j = 0; j < s->size(); ++j) {
                if (!lo) {
                    lo = PointQ(s->point(j));
                    hi = lo;
                    continue;
                }
                for (Index i = 0; i < dim; ++i) {
                    if ((*s)(i, j) < (*lo)(i)) (*lo)(i) = (*s)(i, j);
                    if ((*hi)(i) < (*s)(i, j)) (*hi)(i) = (*s)(i, j);
                }
            }
    }
    Rational diameter(0);
    if (lo)
        for (Index i = 0; i < dim; ++i) diameter += (*hi)(i) - (*lo)(i);
    Rational U = Rational(2 * static_cast<long>(total) + 5) * diameter;
    if (U == Rational(0)) U = Rational(1);
    if (spacing) *spacing = U;

    std::vector<PointSetQ> blue, red;
    for (std::size_t g = 0; g < gadgets.size(); ++g) {
        PointQ shift = zeros(static_cast<int>(dim));
        shift(0) = U * Rational(static_cast<long>(g + 1));
        blue.push_back(translate(gadgets[g].first, shift));
        red.push_back(translate(gadgets[g].second, shift));
    }
    return {concat(blue, dim), concat(red, dim)};
}

namespace {

GadgetInstance finish(const std::vector<std::pair<PointSetQ, PointSetQ>>& gadgets, Metric metric, Rational lambda,
                      std::vector<std::pair<std::string, Rational>> params) {
    GadgetInstance out;
    Rational U;
    std::tie(out.B, out.R) = combine_gadgets(gadgets, &U);
    out.lambda = std::move(lambda);
    out.metric = metric;
    params.emplace_back("U", U);
    params.emplace_back("gadgets", Rational(static_cast<long>(gadgets.size())));
    out.params = std::move(params);
    return out;
}

}  // namespace

GadgetInstance clique_l1_asym(const Graph& g, int k) {
    require_edges(g, k, 2);
    const int d = k;
    const Rational N(g.nodes);
    // p(i, u, j, v, b): coordinate i is u, coordinate j is v, all others b (0-based axes).
    auto p = [&](int i, int u, int j, int v, const Rational& b) {
        PointQ x = PointQ::Constant(d, b);
        x(i) = Rational(u);
        x(j) = Rational(v);
        return x;
    };
    std::vector<std::pair<PointSetQ, PointSetQ>> gadgets;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            std::vector<PointQ> r0, rN;
            for (auto [u, v] : g.edges) {
                r0.push_back(p(i, u, j, v, Rational(0)));
                rN.push_back(p(i, u, j, v, N));
            }
            gadgets.emplace_back(single(zeros(d)), PointSetQ::from_points(d, r0));
            gadgets.emplace_back(single(zeros(d)), PointSetQ::from_points(d, rN));
        }
    Rational lambda = binom2(k) * Rational(d - 2) * N;
    return finish(gadgets, Metric::L1, lambda, {{"d", Rational(d)}, {"k", Rational(k)}, {"N", N},
                                                {"E", Rational(static_cast<long>(g.edges.size()))}});
}

GadgetInstance clique_l1_sym(const Graph& g, int k) {
    require_edges(g, k, 2);
    const int d = 2 * k;
    const Rational N(g.nodes);
    const long E = static_cast<long>(g.edges.size());
    auto pbar = [&](int i, int u, int j, int v, const Rational& b) {
        PointQ x = PointQ::Constant(d, b);
        x(i) = x(i + k) = Rational(u);
        x(j) = x(j + k) = Rational(v);
        return x;
    };
    std::vector<std::pair<PointSetQ, PointSetQ>> gadgets;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            PointQ q = zeros(d);
            q(i) = q(j) = N;
            q(i + k) = q(j + k) = -N;
            std::vector<PointQ> r0, rN;
            for (auto [u, v] : g.edges) {
                r0.push_back(pbar(i, u, j, v, Rational(0)));
                rN.push_back(pbar(i, u, j, v, N));
            }
            gadgets.emplace_back(repeated(zeros(d), q, E - 1), PointSetQ::from_points(d, r0));
            gadgets.emplace_back(repeated(zeros(d), PointQ(-q), E - 1), PointSetQ::from_points(d, rN));
        }
    Rational lambda = binom2(k) * Rational((d + 4) * E - 8) * N;
    return finish(gadgets, Metric::L1, lambda,
                  {{"d", Rational(d)}, {"k", Rational(k)}, {"N", N}, {"E", Rational(E)}});
}

GadgetInstance clique_linf_sym(const Graph& g, int k) {
    require_edges(g, k, 2);
    const int d = 2 * k + 1;
    const Rational N(g.nodes);
    const Rational ten_n = Rational(10) * N;
    const long E = static_cast<long>(g.edges.size());
    std::vector<std::pair<PointSetQ, PointSetQ>> gadgets;
    for (int i = 0; i < k; ++i) {
        PointQ q = zeros(d);
        q(i) = q(i + k) = ten_n;
        for (int s = 0; s < 2 * (k - 1); ++s) {
            gadgets.emplace_back(single(zeros(d)), single(q));
            gadgets.emplace_back(single(zeros(d)), single(PointQ(-q)));
        }
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            PointQ b = zeros(d);
            b(i) = b(j) = ten_n;
            b(i + k) = b(j + k) = -ten_n;
            std::vector<PointQ> r;
            for (auto [u, v] : g.edges) {
                PointQ x = zeros(d);
                x(i) = x(i + k) = Rational(u);
                x(j) = x(j + k) = Rational(v);
                r.push_back(std::move(x));
            }
            PointQ up = zeros(d), down = zeros(d);
            up(d - 1) = ten_n;
            down(d - 1) = -ten_n;
            gadgets.emplace_back(repeated(b, up, E - 1), PointSetQ::from_points(d, r));
            gadgets.emplace_back(repeated(b, down, E - 1), PointSetQ::from_points(d, r));
        }
    Rational lambda = Rational(20) * N * Rational(2L * k * (k - 1)) + Rational(20) * N * Rational(E) * binom2(k);
    return finish(gadgets, Metric::LInf, lambda,
                  {{"d", Rational(d)}, {"k", Rational(k)}, {"N", N}, {"E", Rational(E)}});
}

GadgetInstance clique_instance(const Graph& g, int k, CliqueVariant variant) {
    switch (variant) {
        case CliqueVariant::L1Asym: return clique_l1_asym(g, k);
        case CliqueVariant::L1Sym: return clique_l1_sym(g, k);
        case CliqueVariant::LInfSym: return clique_linf_sym(g, k);
    }
    throw std::invalid_argument("unknown clique variant");
}

bool has_clique(const Graph& g, int k) {
    if (k <= 0) return true;
    std::vector<int> chosen;
    std::function<bool(int)> grow = [&](int next) {
        if (static_cast<int>(chosen.size()) == k) return true;
        for (int v = next; v <= g.nodes; ++v) {
            bool ok = true;
            for (int u : chosen) ok = ok && g.has_edge(u, v);
            if (!ok) continue;
            chosen.push_back(v);
            if (grow(v + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    return grow(1);
}

Decision decide_clique_detailed(const Graph& g, int k, CliqueVariant variant, const HdOptions& opt) {
    // A clique on two or more nodes needs an edge; the gadgets need one too.
    if (g.edges.empty() && k >= 2) return {false, Rational(0), Rational(0), false};
    auto gi = clique_instance(g, k, variant);
    auto res = emdut_hd(gi.B, gi.R, gi.metric, opt);
    return {res.value <= gi.lambda, res.value, gi.lambda};
}

bool decide_clique(const Graph& g, int k, CliqueVariant variant, const HdOptions& opt) {
    return decide_clique_detailed(g, k, variant, opt).yes;
}

std::vector<BitVector> parse_vectors(std::string_view text) {
    std::vector<BitVector> out;
    for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& fields) {
        BitVector v;
        for (auto f : fields)
            for (char c : f) {
                if (c != '0' && c != '1') throw ParseError(line_no, "vector entries must be 0 or 1");
                v.push_back(c - '0');
            }
        if (!out.empty() && out.front().size() != v.size())
            throw ParseError(line_no, "vector length differs from the first vector");
        out.push_back(std::move(v));
    });
    if (out.empty()) throw ParseError(1, "no vectors");
    return out;
}

Graph parse_graph(std::string_view text) {
    Graph g;
    bool have_count = false;
    for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& fields) {
        if (!have_count) {
            if (fields.size() != 1) throw ParseError(line_no, "expected the node count");
            g.nodes = parse_int(fields[0], line_no);
            have_count = true;
            return;
        }
        if (fields.size() != 2) throw ParseError(line_no, "expected an edge 'u v'");
        try {
            g.add_edge(parse_int(fields[0], line_no), parse_int(fields[1], line_no));
        } catch (const ParseError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
    });
    if (!have_count) throw ParseError(1, "missing node count");
    return g;
}

}  // namespace emdut
