#pragma once

#include <cctype>
#include <cmath>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "dbm/error.hpp"
#include "dbm/geometry.hpp"
#include "dbm/util.hpp"

namespace dbm::morphing {

using geometry::CollocatedAirfoil;
using geometry::CollocationGrid;

enum class MorphMode {
    blend,       // weights in [-1,1], negative entries extrapolate
    interp_only, // weights in [0,1], reachable set is the normalized hull
};

inline const char* morph_mode_name(MorphMode m) {
    return m == MorphMode::blend ? "dbm" : "dbm-i";
}

inline MorphMode morph_mode_from_name(const std::string& s) {
    if (s == "dbm") return MorphMode::blend;
    if (s == "dbm-i" || s == "dbm_i") return MorphMode::interp_only;
    throw ConfigError("unknown morph mode '" + s + "' (expected dbm or dbm-i)");
}

// Weight sums closer to zero than this are rejected: dividing by them would
// amplify the baselines beyond anything geometric.
inline constexpr double k_weight_sum_epsilon = 1e-6;

// ---------------------------------------------------------------------------
// Baseline set: the committed design shapes, all collocated on one grid.
// ---------------------------------------------------------------------------

struct BaselineSet {
    CollocationGrid grid;
    std::vector<CollocatedAirfoil> shapes;

    std::size_t size() const { return shapes.size(); }

    const CollocatedAirfoil& at(std::size_t i) const { return shapes.at(i); }

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < shapes.size(); ++i)
            if (shapes[i].name == name) return static_cast<int>(i);
        return -1;
    }

    void add(CollocatedAirfoil foil) {
        foil.check_consistent();
        if (!shapes.empty() && foil.grid != grid)
            throw GridMismatchError("baseline '" + foil.name + "' is on F=" +
                                    std::to_string(foil.grid.f()) + ", set uses F=" +
                                    std::to_string(grid.f()));
        if (shapes.empty()) grid = foil.grid;
        shapes.push_back(std::move(foil));
    }
};

// Manifest format: JSON array of {"name": ..., "path": ...}, paths relative to
// the manifest file. Every entry is loaded, chord-normalized, collocated and
// checked to be free of self-intersections; a dirty baseline is a data bug,
// not something to repair silently.
inline BaselineSet load_baseline_manifest(const std::filesystem::path& manifest_path,
                                          const CollocationGrid& grid) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("baseline manifest " + manifest_path.string() + ": " + e.what());
    }
    if (!j.is_array() || j.empty())
        throw ParseError("baseline manifest " + manifest_path.string() +
                         ": expected a non-empty array");
    BaselineSet set;
    set.grid = grid;
    auto base_dir = manifest_path.parent_path();
    for (const auto& entry : j) {
        std::string name, rel;
        try {
            name = entry.at("name").get<std::string>();
            rel = entry.at("path").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("baseline manifest entry: " + std::string(e.what()));
        }
        auto raw = geometry::load_airfoil(base_dir / rel);
        auto shape = geometry::collocate(geometry::normalize_chord(raw), grid);
        shape.name = name;
        if (!geometry::find_intersections(shape).empty())
            throw DegenerateInputError("baseline '" + name + "' self-intersects after collocation");
        set.add(std::move(shape));
    }
    return set;
}

// ---------------------------------------------------------------------------
// Weight vectors.
// ---------------------------------------------------------------------------

// Returns human-readable violations; empty means valid.
inline std::vector<std::string> validate_weights(const std::vector<double>& w,
                                                 std::size_t n_baselines, MorphMode mode,
                                                 double sum_epsilon = k_weight_sum_epsilon) {
    std::vector<std::string> out;
    if (w.size() != n_baselines) {
        out.push_back("expected " + std::to_string(n_baselines) + " weights, got " +
                      std::to_string(w.size()));
        return out;
    }
    double lo = mode == MorphMode::blend ? -1.0 : 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i])) {
            out.push_back("w[" + std::to_string(i) + "] is not finite");
            continue;
        }
        if (w[i] < lo || w[i] > 1.0)
            out.push_back("w[" + std::to_string(i) + "]=" + fmt_double(w[i]) +
                          " outside [" + fmt_double(lo) + ",1]");
        sum += w[i];
    }
    if (std::abs(sum) <= sum_epsilon)
        out.push_back("weight sum " + fmt_double(sum) + " within " +
                      fmt_double(sum_epsilon) + " of zero");
    return out;
}

inline std::vector<double> random_weights(Rng& rng, std::size_t n, MorphMode mode,
                                          double sum_epsilon = k_weight_sum_epsilon) {
    double lo = mode == MorphMode::blend ? -1.0 : 0.0;
    for (;;) {
        std::vector<double> w(n);
        for (auto& v : w) v = rng.uniform(lo, 1.0);
        if (validate_weights(w, n, mode, sum_epsilon).empty()) return w;
    }
}

// ---------------------------------------------------------------------------
// The morph itself: P = (1/sum_m w_m) * sum_n w_n S_n, evaluated pointwise on
// the shared grid. Weights are folded into normalized coefficients first so a
// one-hot weight vector reproduces its baseline bit for bit (the coefficient
// is exactly 1.0 and zero terms are skipped).
// ---------------------------------------------------------------------------

inline CollocatedAirfoil morph_unrepaired(const BaselineSet& baselines,
                                          const std::vector<double>& w, MorphMode mode,
                                          double sum_epsilon = k_weight_sum_epsilon) {
    if (baselines.size() == 0) throw ContractError("morph: empty baseline set");
    auto violations = validate_weights(w, baselines.size(), mode, sum_epsilon);
    if (!violations.empty()) {
        std::string msg = "invalid weights:";
        for (const auto& v : violations) msg += " " + v + ";";
        if (violations.size() == 1 && violations[0].find("weight sum") == 0)
            throw DegenerateWeightsError(msg);
        throw ContractError(msg);
    }
    double sum = 0.0;
    for (double v : w) sum += v;

    CollocatedAirfoil out;
    out.name = "morph";
    out.grid = baselines.grid;
    out.y.assign(baselines.grid.size(), 0.0);
    for (std::size_t n = 0; n < baselines.size(); ++n) {
        double u = w[n] / sum;
        if (u == 0.0) continue;
        const auto& s = baselines.at(n).y;
        for (std::size_t i = 0; i < out.y.size(); ++i) out.y[i] += u * s[i];
    }
    return out;
}

inline CollocatedAirfoil morph(const BaselineSet& baselines, const std::vector<double>& w,
                               MorphMode mode, const geometry::RepairOptions& repair = {},
                               double sum_epsilon = k_weight_sum_epsilon,
                               geometry::RepairReport* report = nullptr) {
    auto shape = morph_unrepaired(baselines, w, mode, sum_epsilon);
    if (!repair.enabled) return shape;
    return geometry::remove_intersections(shape, repair, report);
}

// ---------------------------------------------------------------------------
// Weight vector CSV: one row per design, columns w0..w{N-1}. Used both for
// morph batches and for the optimizer archives' genome side.
// ---------------------------------------------------------------------------

inline std::string weights_to_csv(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return "";
    std::string out;
    for (std::size_t c = 0; c < rows[0].size(); ++c)
        out += (c ? "," : "") + ("w" + std::to_string(c));
    out += "\n";
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c)
            out += (c ? "," : "") + fmt_double(r[c]);
        out += "\n";
    }
    return out;
}

inline std::vector<std::vector<double>> weights_from_csv(const std::string& text,
                                                         const std::string& origin = "weights") {
    std::vector<std::vector<double>> rows;
    auto lines = split_char(text, '\n');
    std::size_t width = 0;
    bool seen_content = false;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        auto line = trim(lines[ln]);
        if (line.empty()) continue;
        auto toks = split_char(line, ',');
        bool first = !seen_content;
        seen_content = true;
        std::string head = trim(toks[0]);
        if (first && !head.empty() && !std::isdigit(static_cast<unsigned char>(head[0])) &&
            head[0] != '-' && head[0] != '+' && head[0] != '.')
            continue; // header row
        std::vector<double> row;
        row.reserve(toks.size());
        for (const auto& t : toks)
            row.push_back(parse_double(trim(t), origin + ":" + std::to_string(ln + 1)));
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw ParseError(origin + ":" + std::to_string(ln + 1) + ": expected " +
                             std::to_string(width) + " columns, got " +
                             std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(origin + ": no weight rows found");
    return rows;
}

} // namespace dbm::morphing
