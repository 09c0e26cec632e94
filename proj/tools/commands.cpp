#include "commands.hpp"

#include <chrono>
#include <random>
#include <stdexcept>

#include "emdut/emd.hpp"
#include "emdut/emdut_hd.hpp"
#include "emdut/hardness.hpp"
#include "emdut/io.hpp"
#include "emdut/sweep1d.hpp"

namespace emdut::cli {

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Json matching_json(const Matching& phi) {
    Json out = Json::array();
    for (Index j = 0; j < phi.size(); ++j) out.push_back({j, phi[j]});
    return out;
}

Json point_json(const PointQ& p) {
    Json out = Json::array();
    for (Index i = 0; i < p.size(); ++i) out.push_back(p(i).str());
    return out;
}

Json stats_json(std::uint64_t events, std::uint64_t candidates, double millis) {
    return {{"events", events}, {"candidates", candidates}, {"millis", millis}};
}

Json solve_emd(const SolveOptions& opt, const PointSetQ& B, const PointSetQ& R) {
    const Metric metric = parse_metric(opt.metric);
    const std::string algorithm = opt.algorithm.empty() ? "hungarian" : opt.algorithm;
    const auto start = Clock::now();
    EmdResult<Rational> res;
    if (algorithm == "hungarian") {
        res = emd_hungarian(B, R, metric);
    } else if (algorithm == "monotone") {
        res = emd_1d_monotone(B, R);
    } else {
        throw std::invalid_argument("unknown emd algorithm '" + algorithm + "'");
    }
    const double ms = millis_since(start);
    return {{"value", res.value.str()},
            {"matching", matching_json(res.phi)},
            {"algorithm", algorithm},
            {"stats", stats_json(0, 0, ms)}};
}

Json solve_emdut1d(const SolveOptions& opt, const PointSetQ& B, const PointSetQ& R) {
    parse_metric(opt.metric);  // both metrics agree on the line
    if (B.dim() != 1 || R.dim() != 1) throw std::invalid_argument("emdut1d needs one-dimensional point sets");
    const std::string algorithm = opt.algorithm.empty() ? "sweep" : opt.algorithm;
    const auto start = Clock::now();
    Emdut1dResult<Rational> res;
    if (algorithm == "sweep") res = emdut_1d_sweep(B, R);
    else if (algorithm == "oracle") res = emdut_1d_alignment_oracle_full(B, R);
    else if (algorithm == "symmetric") res = emdut_1d_symmetric(B, R);
    else throw std::invalid_argument("unknown emdut1d algorithm '" + algorithm + "'");
    const double ms = millis_since(start);
    return {{"value", res.value.str()},
            {"translation", Json::array({res.tau.str()})},
            {"matching", matching_json(res.phi)},
            {"algorithm", algorithm},
            {"stats", stats_json(res.stats.events, 0, ms)}};
}

HdStrategy parse_strategy(const std::string& s) {
    if (s == "auto") return HdStrategy::Auto;
    if (s == "enumerate") return HdStrategy::Enumerate;
    if (s == "branch-and-bound") return HdStrategy::BranchAndBound;
    throw std::invalid_argument("unknown strategy '" + s + "'");
}

Json solve_emdut_hd(const SolveOptions& opt, const PointSetQ& B, const PointSetQ& R) {
    if (!opt.algorithm.empty() && opt.algorithm != "exact")
        throw std::invalid_argument("emdut-hd has only the 'exact' algorithm");
    const Metric metric = parse_metric(opt.metric);
    const HdOptions hd{opt.budget, parse_strategy(opt.strategy)};
    const auto start = Clock::now();
    auto res = emdut_hd(B, R, metric, hd);
    const double ms = millis_since(start);
    return {{"value", res.value.str()},
            {"translation", point_json(res.tau)},
            {"matching", matching_json(res.phi)},
            {"algorithm", res.stats.method.empty() ? std::string("exact") : res.stats.method},
            {"stats", stats_json(0, res.stats.candidates, ms)}};
}

Json write_instance(const GadgetInstance& gi, const std::string& prefix) {
    const std::string blue = prefix + ".blue.txt", red = prefix + ".red.txt", sidecar = prefix + ".json";
    Json params = Json::object();
    for (const auto& [name, value] : gi.params) params[name] = value.str();
    Json meta = {{"lambda", gi.lambda.str()}, {"metric", std::string(to_string(gi.metric))}, {"params", params}};
    write_point_set(blue, gi.B);
    write_point_set(red, gi.R);
    write_text_file(sidecar, meta.dump(2) + "\n");
    return {{"blue", blue}, {"red", red}, {"sidecar", sidecar}, {"lambda", gi.lambda.str()}};
}

}  // namespace

Json solve(const SolveOptions& opt) {
    const PointSetQ B = read_point_set(opt.blue);
    const PointSetQ R = read_point_set(opt.red);
    if (opt.problem == "emd") return solve_emd(opt, B, R);
    if (opt.problem == "emdut1d") return solve_emdut1d(opt, B, R);
    if (opt.problem == "emdut-hd") return solve_emdut_hd(opt, B, R);
    throw std::invalid_argument("unknown problem '" + opt.problem + "'");
}

Json gen_ov(const GenOvOptions& opt) {
    OvInstance inst{parse_vectors(read_text_file(opt.x_path)), parse_vectors(read_text_file(opt.y_path))};
    return write_instance(ov_reduction(inst), opt.out);
}

Json gen_clique(const GenCliqueOptions& opt) {
    const Graph g = parse_graph(read_text_file(opt.graph));
    return write_instance(clique_instance(g, opt.k, parse_clique_variant(opt.variant)), opt.out);
}

void bench_sweep(const BenchOptions& opt, std::ostream& csv) {
    if (opt.reps < 1) throw std::invalid_argument("repetitions must be positive");
    csv << "n,m,events,millis\n";
    for (long n : opt.sizes) {
        if (n < 1) throw std::invalid_argument("sizes must be positive");
        // Each size has its own stream, so a row does not depend on the other sizes.
        std::seed_seq seq{opt.seed, static_cast<std::uint64_t>(n)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<long> coord(0, 4 * n);
        std::vector<Rational> b, r;
        for (long i = 0; i < n; ++i) b.emplace_back(coord(rng));
        for (long i = 0; i < n; ++i) r.emplace_back(coord(rng));
        const auto B = PointSetQ::line(b), R = PointSetQ::line(r);
        double best = 0;
        std::uint64_t events = 0;
        for (int rep = 0; rep < opt.reps; ++rep) {
            const auto start = Clock::now();
            const auto res = emdut_1d_sweep(B, R);
            const double ms = millis_since(start);
            if (rep == 0 || ms < best) best = ms;
            events = res.stats.events;
        }
        csv << n << ',' << n << ',' << events << ',' << best << '\n';
    }
}

}  // namespace emdut::cli
