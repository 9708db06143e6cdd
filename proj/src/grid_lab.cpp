#include "spotrank/grid_lab.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "spotrank/format.hpp"

namespace spotrank {

namespace {

bool normalised_by_n_max(SiKind kind) {
    return kind != SiKind::UpVote && kind != SiKind::DownVote;
}

std::string transform_name(const SiTransform& t) {
    std::string name{to_string(t.kind)};
    if (t.kind == SiTransform::Kind::Polynomial) name += format_short(t.exponent);
    return name;
}

std::string point_label(const SweepPoint& p) {
    return "(z=" + format_short(p.z) + ", p-weight=" + format_short(p.p_weight) +
           ", kind=" + std::string(to_string(p.kind)) + ", transform=" +
           transform_name(p.transform) + ")";
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && end == text.data() + text.size();
}

}  // namespace

void check_grid_spec(const GridSpec& spec) {
    using Code = GridError::Code;
    if (spec.step < 1) throw GridError(Code::InvalidSpec, "step must be at least 1");
    const Maxima& m = spec.fixed_maxima;
    if (m.n_max < 1 || m.u_max < 1 || m.d_max < 1)
        throw GridError(Code::InvalidSpec, "grid maxima must all be at least 1");
    if (spec.scorer.kind != Scorer::Kind::Improved) {
        if (!(spec.scorer.config.z >= 0.0))
            throw GridError(Code::InvalidSpec, "z must be non-negative");
        return;
    }

    try {
        validate_config(spec.scorer.config);
    } catch (const ConfigError& e) {
        throw GridError(Code::InvalidSpec, e.what());
    }

    const Maxima eff = effective_maxima(m.n_max, m.u_max, m.d_max, spec.scorer.config.n_max_floor);
    const SiKind kind = spec.scorer.config.si_kind;
    if (normalised_by_n_max(kind) && eff.n_max < spec.u_range + spec.d_range)
        throw GridError(Code::InconsistentMaxima,
                        "n-max " + std::to_string(eff.n_max) + " cannot cover u + d up to " +
                            std::to_string(spec.u_range + spec.d_range));
    if (kind == SiKind::UpVote && eff.u_max < spec.u_range)
        throw GridError(Code::InconsistentMaxima, "u-max " + std::to_string(eff.u_max) +
                                                      " cannot cover u up to " +
                                                      std::to_string(spec.u_range));
    if (kind == SiKind::DownVote && eff.d_max < spec.d_range)
        throw GridError(Code::InconsistentMaxima, "d-max " + std::to_string(eff.d_max) +
                                                      " cannot cover d up to " +
                                                      std::to_string(spec.d_range));
}

std::vector<SweepResult> sweep(const SweepSpec& spec) {
    if (spec.z_values.empty() || spec.p_values.empty() || spec.kinds.empty() ||
        spec.transforms.empty())
        throw GridError(GridError::Code::InvalidSpec, "every sweep list needs at least one value");

    std::vector<SweepResult> out;
    out.reserve(spec.z_values.size() * spec.p_values.size() * spec.kinds.size() *
                spec.transforms.size());
    for (double z : spec.z_values)
        for (double p : spec.p_values)
            for (SiKind kind : spec.kinds)
                for (const SiTransform& transform : spec.transforms) {
                    const SweepPoint point{z, p, kind, transform};
                    GridSpec g = spec.base;
                    ScoringConfig cfg = spec.base.scorer.config;
                    cfg.z = z;
                    cfg.p_weight = p;
                    cfg.si_kind = kind;
                    cfg.si_transform = transform;
                    g.scorer = Scorer::improved(cfg);
                    try {
                        out.push_back({point, grid_scores<double>(g)});
                    } catch (const GridError& e) {
                        throw GridError(e.code(), point_label(point) + ": " + e.what());
                    }
                }
    return out;
}

void emit_csv(const ScoreGrid& grid, std::ostream& out) {
    const Scorer& scorer = grid.spec.scorer;
    const ScoringConfig& c = scorer.config;

    std::string text;
    text += "# scorer=" + std::string(to_string(scorer.kind)) + "\n";
    text += "# z=" + format_short(c.z) + "\n";
    text += "# p_weight=" + format_short(c.p_weight) + "\n";
    text += "# kind=" + std::string(to_string(c.si_kind)) + "\n";
    text += "# transform=" + std::string(to_string(c.si_transform.kind)) + "\n";
    if (c.si_transform.kind == SiTransform::Kind::Polynomial)
        text += "# poly_a=" + format_short(c.si_transform.exponent) + "\n";
    text += "# bound=" + std::string(to_string(c.bound)) + "\n";
    text += "# n_max=" + std::to_string(grid.maxima.n_max) + "\n";
    text += "# u_max=" + std::to_string(grid.maxima.u_max) + "\n";
    text += "# d_max=" + std::to_string(grid.maxima.d_max) + "\n";
    text += "# step=" + std::to_string(grid.spec.step) + "\n";
    text += "u,d,score\n";

    text.reserve(text.size() + static_cast<std::size_t>(grid.values.size()) * 28);
    for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
        const std::string u = std::to_string(grid.u_axis(i)) + ",";
        for (Eigen::Index j = 0; j < grid.values.cols(); ++j) {
            text += u;
            text += std::to_string(grid.d_axis(j));
            text += ',';
            append_g12(text, grid.values(i, j));
            text += '\n';
        }
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void write_csv_file(const ScoreGrid& grid, const std::filesystem::path& path) {
    {
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (file) {
            emit_csv(grid, file);
            file.flush();
        }
        if (file) return;
    }
    std::error_code ignored;
    std::filesystem::remove(path, ignored);
    throw GridError(GridError::Code::WriteFailed, "cannot write " + path.string());
}

ParsedCsv parse_csv(std::istream& in) {
    ParsedCsv out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            out.metadata[key] = line.substr(eq + 1);
            continue;
        }
        if (!header_seen) {
            if (line != "u,d,score") throw std::runtime_error("expected header 'u,d,score'");
            header_seen = true;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        CsvRow row;
        const std::string_view view(line);
        if (c1 == std::string::npos || c2 == std::string::npos ||
            !parse_number(view.substr(0, c1), row.u) ||
            !parse_number(view.substr(c1 + 1, c2 - c1 - 1), row.d) ||
            !parse_number(view.substr(c2 + 1), row.score))
            throw std::runtime_error("malformed CSV row: " + line);
        out.rows.push_back(row);
    }
    return out;
}

std::string grid_file_stem(const Scorer& scorer) {
    const ScoringConfig& c = scorer.config;
    std::string stem{to_string(scorer.kind)};
    stem += "_z" + format_short(c.z) + "_p" + format_short(c.p_weight) + "_" +
            std::string(to_string(c.si_kind)) + "_" + transform_name(c.si_transform);
    if (c.bound == Bound::Upper) stem += "_upper";
    return stem;
}

}  // namespace spotrank
