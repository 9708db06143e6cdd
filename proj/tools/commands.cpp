#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spotrank/format.hpp"
#include "spotrank/grid_lab.hpp"
#include "spotrank/io.hpp"
#include "spotrank/ranking_state.hpp"
#include "spotrank/scoring.hpp"
#include "spotrank/vote_sim.hpp"

namespace spotrank::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

SiKind kind_from(const std::string& name) {
    if (auto k = parse_si_kind(name)) return *k;
    throw UsageError("kind: unknown spotlight kind '" + name + "'");
}

SiTransform transform_from(const std::string& name, double poly_a) {
    auto k = parse_transform_kind(name);
    if (!k) throw UsageError("transform: unknown transform '" + name + "'");
    return *k == SiTransform::Kind::Polynomial ? SiTransform::polynomial(poly_a)
                                               : SiTransform{*k, 1.0};
}

Scorer scorer_from(const std::string& name, const ScoringConfig& config) {
    auto k = parse_scorer_kind(name);
    if (!k) throw UsageError("scorer: unknown scorer '" + name + "'");
    switch (*k) {
        case Scorer::Kind::OriginalWilson: return Scorer::original_wilson(config.z, config.bound);
        case Scorer::Kind::AverageRating: return Scorer::average_rating();
        case Scorer::Kind::Improved: break;
    }
    return Scorer::improved(config);
}

AnswerProfile profile_from(const std::string& text) {
    const auto second = text.rfind(':');
    const auto first = second == std::string::npos || second == 0
                           ? std::string::npos
                           : text.rfind(':', second - 1);
    if (first == std::string::npos)
        throw UsageError("profile: expected id:up_probability:arrival_weight, got '" + text + "'");
    AnswerProfile p;
    p.answer_id = text.substr(0, first);
    try {
        std::size_t used = 0;
        const std::string prob = text.substr(first + 1, second - first - 1);
        p.up_probability = std::stod(prob, &used);
        if (used != prob.size()) throw std::invalid_argument(prob);
        const std::string weight = text.substr(second + 1);
        p.arrival_weight = std::stod(weight, &used);
        if (used != weight.size()) throw std::invalid_argument(weight);
    } catch (const std::logic_error&) {
        throw UsageError("profile: cannot read numbers in '" + text + "'");
    }
    return p;
}

GridSpec grid_spec_from(const GridOptions& opts) {
    const ScoringConfig config = opts.scoring.to_config();
    GridSpec spec;
    spec.u_range = opts.u_range;
    spec.d_range = opts.d_range;
    spec.step = opts.step;
    spec.fixed_maxima = {opts.n_max, opts.u_max, opts.d_max};
    spec.scorer = scorer_from(opts.scorer, config);
    spec.scorer.config.n_max_floor = config.n_max_floor;
    return spec;
}

// Writes every grid or none: files written before a failure are removed.
void write_all(const std::vector<const ScoreGrid*>& grids, const fs::path& dir, std::ostream& out) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::vector<fs::path> written;
    try {
        for (const ScoreGrid* g : grids) {
            const fs::path path = dir / (grid_file_stem(g->spec.scorer) + ".csv");
            write_csv_file(*g, path);
            written.push_back(path);
        }
    } catch (...) {
        for (const auto& p : written) fs::remove(p, ec);
        throw;
    }
    for (const auto& p : written) out << p.string() << '\n';
}

template <typename Body>
int guarded(std::ostream& err, Body body) {
    try {
        return body();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitUsage;
}

// "-" means the supplied stream; anything else is opened as a file.
template <typename Body>
int with_input(const std::string& name, std::istream& fallback, Body body) {
    if (name == "-") return body(fallback);
    std::ifstream file(name, std::ios::binary);
    if (!file) throw UsageError("input: cannot open '" + name + "'");
    return body(file);
}

}  // namespace

ScoringConfig ScoringOptions::to_config() const {
    ScoringConfig c;
    c.z = z;
    c.p_weight = p_weight;
    c.si_kind = kind_from(kind);
    c.si_transform = transform_from(transform, poly_a);
    auto b = parse_bound(bound);
    if (!b) throw UsageError("bound: expected lower or upper, got '" + bound + "'");
    c.bound = *b;
    c.n_max_floor = n_max_floor;
    return validate_config(c);
}

int cmd_score(const ScoreOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScoringConfig config = opts.scoring.to_config();
        const VoteTally tally{opts.up, opts.down};
        const Maxima maxima =
            effective_maxima(opts.n_max.value_or(tally.total()), opts.u_max.value_or(tally.up),
                             opts.d_max.value_or(tally.down), config.n_max_floor);
        const auto s = combined_score<double>(tally, maxima, config);
        std::ostringstream text;
        text << "wilson_lower: " << format_fixed6(s.wilson.lower) << '\n'
             << "wilson_upper: " << format_fixed6(s.wilson.upper) << '\n'
             << "si: " << format_fixed6(s.si) << '\n'
             << "combined: " << format_fixed6(s.combined) << '\n';
        out << text.str();
        return kExitOk;
    });
}

int cmd_rank(const RankOptions& opts, std::istream& in, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScoringConfig config = opts.scoring.to_config();
        return with_input(opts.input, in, [&](std::istream& src) {
            const auto tallies = read_tallies(src);
            const auto state = state_from_tallies("", tallies);
            std::ostringstream text;
            write_ranked_jsonl(text, rank(state, config));
            out << text.str();
            return kExitOk;
        });
    });
}

int cmd_replay(const RankOptions& opts, std::istream& in, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScoringConfig config = opts.scoring.to_config();
        return with_input(opts.input, in, [&](std::istream& src) {
            const auto questions = replay(read_events(src));
            std::ostringstream text;
            for (const auto& [id, state] : questions) write_ranked_jsonl(text, rank(state, config), id);
            out << text.str();
            return kExitOk;
        });
    });
}

int cmd_grid(const GridOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScoreGrid grid = grid_scores<double>(grid_spec_from(opts));
        write_all({&grid}, opts.out_dir, out);
        return kExitOk;
    });
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        SweepSpec spec;
        spec.base = grid_spec_from(opts.grid);
        if (spec.base.scorer.kind != Scorer::Kind::Improved)
            throw UsageError("scorer: sweeps always use the improved scorer");
        spec.z_values = opts.z_values;
        spec.p_values = opts.p_values;
        for (const auto& k : opts.kinds) spec.kinds.push_back(kind_from(k));
        for (const auto& t : opts.transforms)
            spec.transforms.push_back(transform_from(t, opts.grid.scoring.poly_a));

        const auto results = sweep(spec);
        std::vector<const ScoreGrid*> grids;
        for (const auto& r : results) grids.push_back(&r.grid);
        write_all(grids, opts.grid.out_dir, out);
        return kExitOk;
    });
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScoringConfig config = opts.scoring.to_config();
        StreamSpec spec;
        for (const auto& p : opts.profiles) spec.answers.push_back(profile_from(p));
        spec.total_events = opts.events;
        spec.seed = opts.seed;
        std::vector<Scorer> scorers;
        for (const auto& s : opts.scorers) scorers.push_back(scorer_from(s, config));

        const Trajectory trajectory = simulate(spec, scorers, opts.cadence);
        const StabilityReport report = stability_report(trajectory);

        std::ostringstream traj_text;
        write_trajectory_jsonl(traj_text, trajectory);
        std::ostringstream report_text;
        write_report_json(report_text, report, spec, trajectory.snapshots.size());

        const std::pair<const std::string*, std::string> files[] = {
            {&opts.trajectory_out, traj_text.str()}, {&opts.report_out, report_text.str()}};
        std::vector<fs::path> written;
        for (const auto& [path, body] : files) {
            std::ofstream file(*path, std::ios::binary | std::ios::trunc);
            file << body;
            file.flush();
            if (!file) {
                std::error_code ec;
                for (const auto& p : written) fs::remove(p, ec);
                fs::remove(*path, ec);
                throw UsageError("output: cannot write '" + *path + "'");
            }
            written.emplace_back(*path);
        }
        for (const auto& p : written) out << p.string() << '\n';
        return kExitOk;
    });
}

namespace {

void add_scoring_flags(CLI::App* app, ScoringOptions& s) {
    app->add_option("--z", s.z, "Normal quantile z");
    app->add_option("--p-weight", s.p_weight, "Weight P of the Wilson term");
    app->add_option("--kind", s.kind, "whole|net|positive|negative|upvote|downvote");
    app->add_option("--transform", s.transform, "linear|log|exp|poly");
    app->add_option("--poly-a", s.poly_a, "Exponent for the poly transform");
    app->add_option("--bound", s.bound, "lower|upper");
    app->add_option("--n-max-floor", s.n_max_floor, "Minimum substituted for small maxima");
}

void add_grid_flags(CLI::App* app, GridOptions& g) {
    add_scoring_flags(app, g.scoring);
    app->add_option("--scorer", g.scorer, "improved|wilson|average");
    app->add_option("--u-range", g.u_range, "Largest u on the grid");
    app->add_option("--d-range", g.d_range, "Largest d on the grid");
    app->add_option("--step", g.step, "Grid spacing");
    app->add_option("--n-max", g.n_max, "Fixed n_max");
    app->add_option("--u-max", g.u_max, "Fixed u_max");
    app->add_option("--d-max", g.d_max, "Fixed d_max");
    app->add_option("--out-dir", g.out_dir, "Directory for CSV output");
}

// Fills options the command line left unset from a flat TOML/INI file whose
// keys are flag names without the leading dashes.
void apply_config_file(CLI::App* sub, const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw UsageError("config: cannot open '" + path + "'");
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_file(path);
    } catch (const CLI::Error& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    for (const auto& item : items) {
        if (!item.parents.empty() || item.name == "config")
            throw UsageError("config: unsupported key '" + item.fullname() + "'");
        CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
        if (opt == nullptr) throw UsageError("config: unknown key '" + item.name + "'");
        if (opt->count() > 0) continue;
        try {
            opt->add_result(item.inputs);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config: " + item.name + ": " + e.what());
        }
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wilson + spotlight-index answer ranking"};
    app.require_subcommand(1);

    ScoreOptions score;
    RankOptions rank_opts;
    RankOptions replay_opts;
    GridOptions grid;
    SweepOptions sweep_opts;
    SimulateOptions sim;
    std::string config_path;

    auto* score_cmd = app.add_subcommand("score", "Score one tally");
    add_scoring_flags(score_cmd, score.scoring);
    score_cmd->add_option("--up", score.up, "Up-votes");
    score_cmd->add_option("--down", score.down, "Down-votes");
    score_cmd->add_option("--n-max", score.n_max, "Raw question n_max (default: this tally)");
    score_cmd->add_option("--u-max", score.u_max, "Raw question u_max (default: this tally)");
    score_cmd->add_option("--d-max", score.d_max, "Raw question d_max (default: this tally)");

    auto* rank_cmd = app.add_subcommand("rank", "Rank a JSONL tally file");
    add_scoring_flags(rank_cmd, rank_opts.scoring);
    rank_cmd->add_option("input", rank_opts.input, "Tally JSONL file, - for stdin");

    auto* replay_cmd = app.add_subcommand("replay", "Replay a JSONL vote-event log");
    add_scoring_flags(replay_cmd, replay_opts.scoring);
    replay_cmd->add_option("input", replay_opts.input, "Event JSONL file, - for stdin");

    auto* grid_cmd = app.add_subcommand("grid", "Write one score grid as CSV");
    add_grid_flags(grid_cmd, grid);

    auto* sweep_cmd = app.add_subcommand("sweep", "Write one CSV grid per (z, P, kind, transform)");
    add_grid_flags(sweep_cmd, sweep_opts.grid);
    sweep_cmd->add_option("--z-values", sweep_opts.z_values, "z values to sweep");
    sweep_cmd->add_option("--p-values", sweep_opts.p_values, "P values to sweep");
    sweep_cmd->add_option("--kinds", sweep_opts.kinds, "Spotlight kinds to sweep");
    sweep_cmd->add_option("--transforms", sweep_opts.transforms, "Transforms to sweep");

    auto* sim_cmd = app.add_subcommand("simulate", "Simulate a vote stream and compare scorers");
    add_scoring_flags(sim_cmd, sim.scoring);
    sim_cmd->add_option("--profile", sim.profiles, "Answer profile id:up_probability:weight");
    sim_cmd->add_option("--events", sim.events, "Number of votes");
    sim_cmd->add_option("--seed", sim.seed, "PRNG seed");
    sim_cmd->add_option("--cadence", sim.cadence, "Rank every this many events");
    sim_cmd->add_option("--scorer", sim.scorers, "wilson|average|improved (repeatable)");
    sim_cmd->add_option("--trajectory-out", sim.trajectory_out, "Trajectory JSONL path");
    sim_cmd->add_option("--report-out", sim.report_out, "Stability report JSON path");

    for (auto* sub : app.get_subcommands({}))
        sub->add_option("--config", config_path, "Flat key = value file; flags win");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    if (!config_path.empty()) {
        const int rc = guarded(err, [&] {
            apply_config_file(chosen, config_path);
            return kExitOk;
        });
        if (rc != kExitOk) return rc;
    }

    if (chosen == score_cmd) return cmd_score(score, out, err);
    if (chosen == rank_cmd) return cmd_rank(rank_opts, in, out, err);
    if (chosen == replay_cmd) return cmd_replay(replay_opts, in, out, err);
    if (chosen == grid_cmd) return cmd_grid(grid, out, err);
    if (chosen == sweep_cmd) return cmd_sweep(sweep_opts, out, err);
    return cmd_simulate(sim, out, err);
}

}  // namespace spotrank::cli
