#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spotrank/types.hpp"

namespace spotrank::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;

/// Flag-level scoring options shared by every subcommand.
struct ScoringOptions {
    double z = 2.0;
    double p_weight = 0.5;
    std::string kind = "whole";
    std::string transform = "linear";
    double poly_a = 2.0;
    std::string bound = "lower";
    Count n_max_floor = 1;

    /// Throws ConfigError naming the offending flag.
    ScoringConfig to_config() const;
};

struct ScoreOptions {
    ScoringOptions scoring;
    Count up = 0;
    Count down = 0;
    // Raw question maxima; each defaults to the tally's own value.
    std::optional<Count> n_max;
    std::optional<Count> u_max;
    std::optional<Count> d_max;
};

struct RankOptions {
    ScoringOptions scoring;
    std::string input = "-";
};

struct GridOptions {
    ScoringOptions scoring;
    std::string scorer = "improved";
    Count u_range = 1000;
    Count d_range = 1000;
    Count step = 1;
    Count n_max = 2000;
    Count u_max = 1000;
    Count d_max = 1000;
    std::string out_dir = ".";
};

struct SweepOptions {
    GridOptions grid;
    std::vector<double> z_values{0, 1, 5, 25};
    std::vector<double> p_values{0, 0.25, 0.5, 0.75, 1};
    std::vector<std::string> kinds{"whole"};
    std::vector<std::string> transforms{"linear"};
};

struct SimulateOptions {
    ScoringOptions scoring;
    std::vector<std::string> profiles;  // "id:up_probability:arrival_weight"
    std::uint64_t events = 1000;
    std::uint64_t seed = 1;
    std::uint64_t cadence = 100;
    std::vector<std::string> scorers{"wilson", "improved"};
    std::string trajectory_out = "trajectory.jsonl";
    std::string report_out = "report.json";
};

// Each command writes data to `out`, diagnostics to `err`, and returns the exit code.
int cmd_score(const ScoreOptions& opts, std::ostream& out, std::ostream& err);
int cmd_rank(const RankOptions& opts, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_replay(const RankOptions& opts, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_grid(const GridOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

/// Entry point used by main(): parses argv (including `--config`) and dispatches.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace spotrank::cli
