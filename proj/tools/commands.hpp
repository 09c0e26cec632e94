#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace emdut::cli {

using Json = nlohmann::ordered_json;

struct SolveOptions {
    std::string problem;  // emd, emdut1d, emdut-hd
    std::string blue, red;
    std::string metric = "l1";
    std::string algorithm;  // empty picks the problem's default
    std::string strategy = "auto";
    std::uint64_t budget = 10'000'000;
};

struct GenOvOptions {
    std::string x_path, y_path, out;
};

struct GenCliqueOptions {
    std::string variant, graph, out;
    int k = 3;
};

struct BenchOptions {
    std::vector<long> sizes{250, 500, 1000, 2000};
    std::uint64_t seed = 1;
    int reps = 1;
};

Json solve(const SolveOptions& opt);
Json gen_ov(const GenOvOptions& opt);
Json gen_clique(const GenCliqueOptions& opt);
void bench_sweep(const BenchOptions& opt, std::ostream& csv);

}  // namespace emdut::cli
