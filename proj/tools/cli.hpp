#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mvstrat::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_inconclusive = 2;

struct VerifyOptions {
    std::optional<std::string> lattice;
    std::string model;
    std::string formula; // text, or @path
    std::string semantics = "perfect";
    std::string algorithm = "recursive";
    std::optional<std::string> state;
    std::vector<std::string> designated;
    std::string output = "text";
    unsigned parallel = 1;
    double timeout = 0; // seconds, 0 for none
    std::uint64_t strategy_cap = 10'000'000;
};

struct BenchOptions {
    std::string map = "grid12";
    std::string drones = "1";
    std::string energy = "0-2";
    std::string formula = "phi1R"; // phi1L, phi1R or phi2R
    std::optional<std::string> location;
    double timeout = 0;
    unsigned parallel = 1;
    bool strict_moves = true;
    std::string visited = "compact";
    bool epistemic = true;
    std::size_t state_cap = 2'000'000;
};

inline constexpr const char* bench_header = "drones,energy,states,tgen,tverif_lower,tverif_upper,output";

int run_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int run_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);
// Parses "verify ..." or "bench ...".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "3", "1-4" or "1,2,5".
std::vector<std::size_t> parse_range(const std::string& text);

} // namespace mvstrat::cli
