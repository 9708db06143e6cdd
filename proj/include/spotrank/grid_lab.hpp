#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "spotrank/scoring.hpp"

namespace spotrank {

/// Axis ranges are inclusive: u in {0, step, ..., <= u_range}.
struct GridSpec {
    Count u_range = 1000;
    Count d_range = 1000;
    Count step = 1;
    Maxima fixed_maxima{2000, 1000, 1000};
    Scorer scorer;
};

template <typename Scalar>
using RowMajorMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Scores over a (u, d) lattice. Row i is u = u_axis[i], column j is d = d_axis[j].
template <typename Scalar = double>
struct BasicScoreGrid {
    Eigen::Matrix<Count, Eigen::Dynamic, 1> u_axis;
    Eigen::Matrix<Count, Eigen::Dynamic, 1> d_axis;
    RowMajorMatrix<Scalar> values;
    GridSpec spec;
    Maxima maxima;  // after the floor
};

using ScoreGrid = BasicScoreGrid<double>;

class GridError : public std::runtime_error {
public:
    enum class Code { InconsistentMaxima, InvalidSpec, WriteFailed };

    GridError(Code code, const std::string& message) : std::runtime_error(message), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

/// Throws GridError if the spec is malformed or its maxima cannot cover the grid.
void check_grid_spec(const GridSpec& spec);

template <typename Scalar = double>
BasicScoreGrid<Scalar> grid_scores(const GridSpec& spec) {
    check_grid_spec(spec);
    BasicScoreGrid<Scalar> grid;
    grid.spec = spec;
    grid.maxima = effective_maxima(spec.fixed_maxima.n_max, spec.fixed_maxima.u_max,
                                   spec.fixed_maxima.d_max, spec.scorer.config.n_max_floor);

    const auto rows = static_cast<Eigen::Index>(spec.u_range / spec.step + 1);
    const auto cols = static_cast<Eigen::Index>(spec.d_range / spec.step + 1);
    grid.u_axis.resize(rows);
    grid.d_axis.resize(cols);
    for (Eigen::Index i = 0; i < rows; ++i) grid.u_axis(i) = static_cast<Count>(i) * spec.step;
    for (Eigen::Index j = 0; j < cols; ++j) grid.d_axis(j) = static_cast<Count>(j) * spec.step;
    grid.values.resize(rows, cols);

    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            grid.values(i, j) = score_tally<Scalar>(
                spec.scorer, VoteTally{grid.u_axis(i), grid.d_axis(j)}, grid.maxima)
                                    .combined;
    return grid;
}

struct SweepSpec {
    GridSpec base;  // scorer config supplies everything not swept
    std::vector<double> z_values;
    std::vector<double> p_values;
    std::vector<SiKind> kinds;
    std::vector<SiTransform> transforms;
};

struct SweepPoint {
    double z = 0;
    double p_weight = 0;
    SiKind kind = SiKind::Whole;
    SiTransform transform;
};

struct SweepResult {
    SweepPoint point;
    ScoreGrid grid;
};

/// One Improved grid per (z, P, kind, transform), z outermost, transform innermost.
std::vector<SweepResult> sweep(const SweepSpec& spec);

/// Long-format CSV: `#` metadata lines, header `u,d,score`, u-major rows,
/// 12 significant digits.
void emit_csv(const ScoreGrid& grid, std::ostream& out);

/// Writes to `path`, removing the file again if writing fails.
void write_csv_file(const ScoreGrid& grid, const std::filesystem::path& path);

struct CsvRow {
    Count u = 0;
    Count d = 0;
    double score = 0;
};

struct ParsedCsv {
    std::map<std::string, std::string> metadata;
    std::vector<CsvRow> rows;
};

ParsedCsv parse_csv(std::istream& in);

/// Deterministic file stem for a grid, e.g. "improved_z2_p0.5_whole_linear".
std::string grid_file_stem(const Scorer& scorer);

}  // namespace spotrank
