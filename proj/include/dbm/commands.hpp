#pragma once

#include <cstdio>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dbm/aero.hpp"
#include "dbm/analysis.hpp"
#include "dbm/config.hpp"
#include "dbm/error.hpp"
#include "dbm/evo.hpp"
#include "dbm/geometry.hpp"
#include "dbm/morph.hpp"
#include "dbm/param.hpp"
#include "dbm/util.hpp"
#include "dbm/xfoil.hpp"

// The seven commands behind the CLI verbs. Each one validates its config up
// front, creates the run directory with a resolved config copy, does the work,
// writes its artifacts, and returns a small report struct so tests can check
// outcomes without re-parsing the files. Progress goes to the caller's stream;
// nothing here prints timestamps, so reruns stay byte-identical.

namespace dbm::cli {

namespace fs = std::filesystem;

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string padded_index(std::size_t i, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*zu", width, i);
    return buf;
}

inline std::unique_ptr<aero::PolarEvaluator> make_evaluator(const config::RunConfig& cfg) {
    if (cfg.evaluator == "xfoil")
        return std::make_unique<xfoil::XfoilEvaluator>(cfg.xfoil);
    return std::make_unique<aero::SyntheticEvaluator>();
}

inline morphing::BaselineSet load_baselines(const config::RunConfig& cfg, const char* command) {
    return morphing::load_baseline_manifest(cfg.require_baselines(command),
                                            geometry::CollocationGrid::make(cfg.grid_f));
}

// Writes both serializations of a shape: the collocated CSV that downstream
// tooling reads back exactly, and a Selig outline for external solvers.
inline fs::path write_shape(const fs::path& dir, const std::string& stem,
                            geometry::CollocatedAirfoil shape) {
    shape.name = stem;
    fs::create_directories(dir);
    auto csv_path = dir / (stem + ".csv");
    write_text_file(csv_path, geometry::to_csv(shape));
    write_text_file(dir / (stem + ".dat"), geometry::to_selig(geometry::to_raw(shape)));
    return csv_path;
}

} // namespace detail

// ---------------------------------------------------------------------------
// ingest: normalize, collocate and intersection-check a batch of coordinate
// files. Bad files are reported and skipped, the run keeps going.
// ---------------------------------------------------------------------------

struct IngestEntry {
    std::string file;
    std::string name;
    bool ok = false;
    std::string message;
};

struct IngestReport {
    std::vector<IngestEntry> entries;
    int n_ok = 0;
    int n_failed = 0;
    fs::path manifest;
};

inline IngestReport cmd_ingest(const config::RunConfig& cfg, const std::vector<fs::path>& inputs,
                               std::ostream& log) {
    cfg.validate();
    auto dir = cfg.prepare_run_dir();
    auto grid = geometry::CollocationGrid::make(cfg.grid_f);

    IngestReport report;
    nlohmann::json manifest = nlohmann::json::array();
    std::map<std::string, int> used_names;

    for (const auto& input : inputs) {
        IngestEntry entry;
        entry.file = input.string();
        try {
            auto raw = geometry::load_airfoil(input);
            auto shape = geometry::collocate(geometry::normalize_chord(raw), grid);
            std::string name = raw.name.empty() ? input.stem().string() : raw.name;
            // collapse whitespace so names survive manifests and CSV columns
            for (char& c : name)
                if (c == ' ' || c == '\t') c = '_';
            int& uses = used_names[name];
            if (++uses > 1) name += "-" + std::to_string(uses);
            shape.name = name;
            auto crossings = geometry::find_intersections(shape);
            if (!crossings.empty())
                throw DegenerateInputError("self-intersects after collocation (" +
                                           std::to_string(crossings.size()) + " crossings)");
            entry.name = name;
            entry.ok = true;
            detail::write_shape(dir / "shapes", name, shape);
            write_text_file(dir / "shapes" / (name + ".json"),
                            geometry::to_json(shape).dump(2) + "\n");
            manifest.push_back({{"name", name}, {"path", fs::absolute(input).string()}});
            ++report.n_ok;
            log << "ingest ok     " << input.string() << " -> " << name << "\n";
        } catch (const Error& e) {
            entry.message = e.what();
            ++report.n_failed;
            log << "ingest FAILED " << input.string() << ": " << e.what() << "\n";
        }
        report.entries.push_back(std::move(entry));
    }

    report.manifest = dir / "manifest.json";
    write_text_file(report.manifest, manifest.dump(2) + "\n");

    std::string rep = "file,status,name,message\n";
    for (const auto& e : report.entries)
        rep += detail::csv_field(e.file) + "," + (e.ok ? "ok" : "failed") + "," + e.name + "," +
               detail::csv_field(e.message) + "\n";
    write_text_file(dir / "ingest_report.csv", rep);

    log << "ingest: " << report.n_ok << " ok, " << report.n_failed << " failed\n";
    return report;
}

// ---------------------------------------------------------------------------
// morph: one output shape per weight row. Rows that violate the mode's bounds
// or degenerate the weight sum are flagged, never silently dropped; repair
// activity is recorded per row.
// ---------------------------------------------------------------------------

struct MorphRow {
    std::size_t row = 0;
    bool ok = false;
    geometry::RepairReport repair;
    bool repairable = true;
    std::string message;
    fs::path output;
};

struct MorphReport {
    std::vector<MorphRow> rows;
    int n_ok = 0;
    int n_rejected = 0;
};

inline MorphReport cmd_morph(const config::RunConfig& cfg, const fs::path& weights_path,
                             std::ostream& log) {
    cfg.validate();
    auto baselines = detail::load_baselines(cfg, "morph");
    auto rows = morphing::weights_from_csv(read_text_file(weights_path), weights_path.string());
    auto dir = cfg.prepare_run_dir();

    MorphReport report;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        MorphRow r;
        r.row = i;
        auto violations =
            morphing::validate_weights(rows[i], baselines.size(), cfg.morph_mode);
        if (!violations.empty()) {
            for (const auto& v : violations) r.message += (r.message.empty() ? "" : "; ") + v;
            ++report.n_rejected;
            log << "row " << i << " rejected: " << r.message << "\n";
            report.rows.push_back(std::move(r));
            continue;
        }
        try {
            auto shape = morphing::morph(baselines, rows[i], cfg.morph_mode, cfg.repair,
                                         morphing::k_weight_sum_epsilon, &r.repair);
            r.ok = true;
            r.output = detail::write_shape(dir / "shapes",
                                           "shape_" + detail::padded_index(i, 4), shape);
            ++report.n_ok;
        } catch (const NonRepairableError& e) {
            r.repairable = false;
            r.message = e.what();
            ++report.n_rejected;
            log << "row " << i << " not repairable: " << e.what() << "\n";
        } catch (const ShapeError& e) {
            r.message = e.what();
            ++report.n_rejected;
            log << "row " << i << " rejected: " << e.what() << "\n";
        }
        report.rows.push_back(std::move(r));
    }

    std::string rep = "row,status,crossings_found,repair_passes,smoothed,output,message\n";
    int repaired = 0;
    for (const auto& r : report.rows) {
        const char* status = r.ok ? "ok" : (r.repairable ? "rejected" : "non_repairable");
        if (r.ok && r.repair.crossings_found > 0) ++repaired;
        rep += std::to_string(r.row) + "," + status + "," +
               std::to_string(r.repair.crossings_found) + "," +
               std::to_string(r.repair.passes) + "," + (r.repair.smoothed ? "1" : "0") + "," +
               detail::csv_field(r.output.filename().string()) + "," +
               detail::csv_field(r.message) + "\n";
    }
    write_text_file(dir / "morph_report.csv", rep);

    log << "morph: " << report.n_ok << " ok (" << repaired << " repaired), "
        << report.n_rejected << " rejected of " << rows.size() << " rows\n";
    return report;
}

// ---------------------------------------------------------------------------
// reconstruct: fit each target with each configured parameterization and
// report the best MAE trace, plus the percent-within-tolerance curve that the
// benchmark figures are drawn from.
// ---------------------------------------------------------------------------

struct ReconstructRun {
    std::string airfoil;
    std::string method;
    double best_mae = 0.0;
    int generations_run = 0;
    bool early_stopped = false;
    bool within_tolerance = false;
};

struct ReconstructReport {
    std::vector<ReconstructRun> runs;
    std::map<std::string, double> final_percent; // method -> percent within
};

inline ReconstructReport cmd_reconstruct(const config::RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    auto seed = cfg.require_seed("reconstruct");
    if (cfg.targets.empty())
        throw ConfigError("reconstruct needs a target manifest (\"targets\")");

    auto grid = geometry::CollocationGrid::make(cfg.grid_f);
    auto targets = morphing::load_baseline_manifest(cfg.targets, grid);

    // the morph methods need the baseline set; analytic ones run without it
    bool needs_baselines = false;
    for (const auto& m : cfg.methods)
        if (m == "dbm" || m == "dbm-i" || m == "dbm_i") needs_baselines = true;
    morphing::BaselineSet baselines;
    if (needs_baselines) baselines = detail::load_baselines(cfg, "reconstruct");

    std::vector<std::unique_ptr<param::ShapeGenerator>> gens;
    for (const auto& m : cfg.methods)
        gens.push_back(param::make_generator(m, needs_baselines ? &baselines : nullptr,
                                             cfg.repair));

    auto dir = cfg.prepare_run_dir();
    ReconstructReport report;
    std::string trace_csv = "airfoil,method,generation,best_mae\n";
    // best-so-far per run, extended to the generation cap for the summary curve
    std::map<std::string, std::vector<std::vector<double>>> curves;

    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        const auto& target = targets.at(ti);
        for (std::size_t mi = 0; mi < gens.size(); ++mi) {
            auto ga = cfg.ga;
            ga.seed = mix_seed(mix_seed(seed, ti + 1), mi + 1);
            auto res = param::reconstruct(target, *gens[mi], ga);

            ReconstructRun run;
            run.airfoil = target.name;
            run.method = res.method;
            run.best_mae = res.best_mae;
            run.generations_run = res.generations_run;
            run.early_stopped = res.early_stopped;
            run.within_tolerance = res.best_mae <= cfg.tolerance_mae;
            report.runs.push_back(run);

            std::vector<double> best_at(static_cast<std::size_t>(cfg.ga.max_generations) + 1,
                                        res.best_mae);
            for (const auto& tp : res.trace) {
                trace_csv += target.name + "," + res.method + "," +
                             std::to_string(tp.generation) + "," + fmt_double(tp.best) + "\n";
                best_at[static_cast<std::size_t>(tp.generation)] = tp.best;
            }
            // a stopped run holds its floor for the remaining checkpoints
            for (std::size_t g = 1; g < best_at.size(); ++g)
                best_at[g] = std::min(best_at[g], best_at[g - 1]);
            curves[res.method].push_back(std::move(best_at));

            log << target.name << " " << res.method << " best_mae=" << fmt_double(res.best_mae)
                << " generations=" << res.generations_run
                << (res.early_stopped ? " (early stop)" : "") << "\n";
        }
    }
    write_text_file(dir / "report.csv", trace_csv);

    std::string final_csv = "airfoil,method,best_mae,generations,early_stopped,within_tolerance\n";
    for (const auto& r : report.runs)
        final_csv += r.airfoil + "," + r.method + "," + fmt_double(r.best_mae) + "," +
                     std::to_string(r.generations_run) + "," + (r.early_stopped ? "1" : "0") +
                     "," + (r.within_tolerance ? "1" : "0") + "\n";
    write_text_file(dir / "final.csv", final_csv);

    nlohmann::json summary;
    summary["tolerance_mae"] = cfg.tolerance_mae;
    summary["n_targets"] = targets.size();
    for (const auto& [method, runs] : curves) {
        nlohmann::json curve = nlohmann::json::array();
        for (std::size_t g = 0; g <= static_cast<std::size_t>(cfg.ga.max_generations); ++g) {
            int within = 0;
            for (const auto& best_at : runs)
                if (best_at[g] <= cfg.tolerance_mae) ++within;
            double pct = 100.0 * within / static_cast<double>(runs.size());
            curve.push_back({{"generation", g}, {"percent_within", pct}});
            if (g == static_cast<std::size_t>(cfg.ga.max_generations))
                report.final_percent[method] = pct;
        }
        summary["methods"][method] = {{"final_percent_within", report.final_percent[method]},
                                      {"curve", std::move(curve)}};
    }
    write_text_file(dir / "summary.json", summary.dump(2) + "\n");

    for (const auto& [method, pct] : report.final_percent)
        log << method << ": " << fmt_double(pct) << "% within " << fmt_double(cfg.tolerance_mae)
            << "\n";
    return report;
}

// ---------------------------------------------------------------------------
// optimize: bi-objective search over the weight space. The initial population
// mixes single-objective champions (two slots each) with random samples, the
// way the full-scale runs are seeded.
// ---------------------------------------------------------------------------

struct OptimizeReport {
    std::size_t archive_size = 0;
    double best_cld_max = 0.0;
    double best_delta_alpha = 0.0;
    int shapes_written = 0;
};

inline OptimizeReport cmd_optimize(const config::RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    auto seed = cfg.require_seed("optimize");
    // evaluator problems (missing solver binary, bad flow numbers) must
    // surface before any generation runs
    auto evaluator = detail::make_evaluator(cfg);
    auto baselines = detail::load_baselines(cfg, "optimize");
    auto dir = cfg.prepare_run_dir();

    auto pair_for = [&](const std::vector<double>& w) {
        return aero::objectives_for_weights(baselines, w, cfg.morph_mode, cfg.repair, cfg.flow,
                                            cfg.scan, *evaluator);
    };
    evo::Bounds bounds = evo::Bounds::uniform(
        baselines.size(), cfg.morph_mode == morphing::MorphMode::blend ? -1.0 : 0.0, 1.0);

    // champions of each single objective, two seats each
    std::vector<std::vector<double>> seeds;
    const char* champion_names[] = {"cld_max", "delta_alpha"};
    for (std::size_t k = 0; k < 2; ++k) {
        auto scfg = cfg.ga;
        scfg.seed = mix_seed(seed, k + 1);
        scfg.early_stop.reset();
        auto champ = evo::ga_minimize(
            [&](const std::vector<double>& w) {
                auto obj = pair_for(w);
                return -(k == 0 ? obj.cld_max : obj.delta_alpha);
            },
            bounds, scfg);
        log << "champion " << champion_names[k] << " = " << fmt_double(-champ.best_value)
            << "\n";
        seeds.push_back(champ.best_genome);
        seeds.push_back(std::move(champ.best_genome));
    }

    auto ga = cfg.ga;
    ga.seed = seed;
    auto result = evo::nsga2(
        [&](const std::vector<double>& w) {
            auto obj = pair_for(w);
            return std::vector<double>{obj.cld_max, obj.delta_alpha};
        },
        bounds, ga, evo::Sense::maximize, seeds);

    std::string metrics = "generation,front_size,best_f1,best_f2,hypervolume\n";
    for (const auto& st : result.stats)
        metrics += std::to_string(st.generation) + "," + std::to_string(st.front_size) + "," +
                   fmt_double(st.best_f1) + "," + fmt_double(st.best_f2) + "," +
                   fmt_double(st.hypervolume) + "\n";
    write_text_file(dir / "metrics.csv", metrics);

    OptimizeReport report;
    report.archive_size = result.archive.size();

    std::string archive_csv;
    for (std::size_t c = 0; c < baselines.size(); ++c)
        archive_csv += "w" + std::to_string(c) + ",";
    archive_csv += "cld_max,delta_alpha\n";
    nlohmann::json archive_json = nlohmann::json::array();
    for (std::size_t m = 0; m < result.archive.size(); ++m) {
        const auto& ind = result.archive[m];
        for (double w : ind.genome) archive_csv += fmt_double(w) + ",";
        archive_csv += fmt_double(ind.objectives[0]) + "," + fmt_double(ind.objectives[1]) + "\n";
        archive_json.push_back({{"id", m},
                                {"genome", ind.genome},
                                {"cld_max", ind.objectives[0]},
                                {"delta_alpha", ind.objectives[1]}});
        report.best_cld_max = std::max(report.best_cld_max, ind.objectives[0]);
        report.best_delta_alpha = std::max(report.best_delta_alpha, ind.objectives[1]);
        try {
            auto shape = morphing::morph(baselines, ind.genome, cfg.morph_mode, cfg.repair);
            detail::write_shape(dir / "shapes", "member_" + detail::padded_index(m, 3), shape);
            ++report.shapes_written;
        } catch (const ShapeError& e) {
            log << "member " << m << " shape export failed: " << e.what() << "\n";
        }
    }
    write_text_file(dir / "archive.csv", archive_csv);
    write_text_file(dir / "archive.json", archive_json.dump(2) + "\n");

    log << "optimize: archive " << report.archive_size << " members, best cld_max "
        << fmt_double(report.best_cld_max) << ", best delta_alpha "
        << fmt_double(report.best_delta_alpha) << "\n";
    return report;
}

// ---------------------------------------------------------------------------
// benchmark-zdt: run the four ZDT problems at the configured budget and score
// the mean vertical deviation of each final front from its analytic optimum.
// ---------------------------------------------------------------------------

struct ZdtRun {
    std::string problem;
    double deviation = 0.0;
    std::size_t front_points = 0;
};

struct ZdtReport {
    std::vector<ZdtRun> runs;
};

inline ZdtReport cmd_benchmark_zdt(const config::RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    auto seed = cfg.require_seed("benchmark-zdt");
    auto dir = cfg.prepare_run_dir();
    const auto n = static_cast<std::size_t>(cfg.zdt_dim);

    ZdtReport report;
    nlohmann::json deviations;
    for (auto p : {evo::ZdtProblem::zdt1, evo::ZdtProblem::zdt2, evo::ZdtProblem::zdt4,
                   evo::ZdtProblem::zdt6}) {
        auto bounds = evo::zdt_bounds(p, n);
        auto f = [p](const std::vector<double>& w) { return evo::zdt_eval(p, w); };

        // same initialization policy as the design runs: per-objective
        // champions take two seats, the rest of the population is random
        std::vector<std::vector<double>> seeds;
        for (std::size_t k = 0; k < 2; ++k) {
            auto scfg = cfg.ga;
            scfg.seed = mix_seed(seed, k + 1);
            scfg.early_stop.reset();
            auto champ = evo::ga_minimize(
                [&](const std::vector<double>& w) { return f(w)[k]; }, bounds, scfg);
            seeds.push_back(champ.best_genome);
            seeds.push_back(std::move(champ.best_genome));
        }

        auto ga = cfg.ga;
        ga.seed = seed;
        auto result = evo::nsga2(f, bounds, ga, evo::Sense::minimize, seeds);

        std::string front_csv;
        for (std::size_t c = 0; c < n; ++c) front_csv += "w" + std::to_string(c) + ",";
        front_csv += "f1,f2\n";
        std::vector<std::vector<double>> objs;
        for (const auto& ind : result.archive) {
            for (double w : ind.genome) front_csv += fmt_double(w) + ",";
            front_csv += fmt_double(ind.objectives[0]) + "," + fmt_double(ind.objectives[1]) +
                         "\n";
            objs.push_back(ind.objectives);
        }
        std::string name = evo::zdt_name(p);
        write_text_file(dir / (name + "_front.csv"), front_csv);

        std::string metrics = "generation,front_size,best_f1,best_f2,hypervolume\n";
        for (const auto& st : result.stats)
            metrics += std::to_string(st.generation) + "," + std::to_string(st.front_size) +
                       "," + fmt_double(st.best_f1) + "," + fmt_double(st.best_f2) + "," +
                       fmt_double(st.hypervolume) + "\n";
        write_text_file(dir / (name + "_metrics.csv"), metrics);

        ZdtRun run;
        run.problem = name;
        run.deviation = evo::zdt_front_deviation(p, objs);
        run.front_points = objs.size();
        deviations[name] = {{"deviation", run.deviation}, {"front_points", run.front_points}};
        log << name << " deviation=" << fmt_double(run.deviation) << " front="
            << run.front_points << "\n";
        report.runs.push_back(std::move(run));
    }
    write_text_file(dir / "deviations.json", deviations.dump(2) + "\n");
    return report;
}

// ---------------------------------------------------------------------------
// cluster: PCA and k-means over an optimization archive's genomes, plus the
// axis morphs that show what the principal directions look like as shapes.
// ---------------------------------------------------------------------------

struct ClusterReport {
    std::vector<double> ratios;
    std::vector<std::size_t> counts;
    double inertia = 0.0;
    bool degenerate = false;
};

inline ClusterReport cmd_cluster(const config::RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    auto seed = cfg.require_seed("cluster");
    if (cfg.archive.empty())
        throw ConfigError("cluster needs an optimization archive (\"archive\")");
    auto baselines = detail::load_baselines(cfg, "cluster");

    auto rows = morphing::weights_from_csv(read_text_file(cfg.archive), cfg.archive.string());
    const std::size_t n_weights = baselines.size();
    if (rows.front().size() < n_weights)
        throw ParseError("archive rows have " + std::to_string(rows.front().size()) +
                         " columns, need at least " + std::to_string(n_weights) +
                         " weight columns");
    std::vector<std::vector<double>> genomes;
    genomes.reserve(rows.size());
    for (auto& r : rows)
        genomes.emplace_back(r.begin(), r.begin() + static_cast<long>(n_weights));

    auto dir = cfg.prepare_run_dir();
    auto p = analysis::pca(genomes);
    auto km = analysis::kmeans(genomes, static_cast<std::size_t>(cfg.kmeans_k), seed);
    auto means = analysis::cluster_mean_weights(genomes, km.assignments,
                                                static_cast<std::size_t>(cfg.kmeans_k));

    nlohmann::json pca_json = {{"mean", p.mean},
                               {"axes", p.components},
                               {"explained_variance_ratio", p.ratios},
                               {"degenerate", p.degenerate}};
    write_text_file(dir / "pca.json", pca_json.dump(2) + "\n");

    std::string assignments = "id,cluster\n";
    for (std::size_t i = 0; i < km.assignments.size(); ++i)
        assignments += std::to_string(i) + "," + std::to_string(km.assignments[i]) + "\n";
    write_text_file(dir / "assignments.csv", assignments);

    std::string scatter = "pc1,pc2,cluster\n";
    for (std::size_t i = 0; i < genomes.size(); ++i) {
        auto coords = analysis::pca_project(p, genomes[i]);
        double pc1 = coords.empty() ? 0.0 : coords[0];
        double pc2 = coords.size() > 1 ? coords[1] : 0.0;
        scatter += fmt_double(pc1) + "," + fmt_double(pc2) + "," +
                   std::to_string(km.assignments[i]) + "\n";
    }
    write_text_file(dir / "scatter.csv", scatter);

    std::string mw = "cluster,count";
    for (std::size_t c = 0; c < n_weights; ++c) mw += ",w" + std::to_string(c);
    mw += "\n";
    for (std::size_t k = 0; k < means.means.size(); ++k) {
        mw += std::to_string(k) + "," + std::to_string(means.counts[k]);
        for (double v : means.means[k]) mw += "," + fmt_double(v);
        mw += "\n";
    }
    mw += "total," + std::to_string(genomes.size());
    for (double v : means.total_mean) mw += "," + fmt_double(v);
    mw += "\n";
    write_text_file(dir / "cluster_means.csv", mw);

    // The mean design and the first two principal directions as actual shapes.
    // These are best-effort illustrations: an axis sweep may leave the valid
    // weight box or cross the degenerate-sum plane, so any morph failure only
    // skips that one export.
    auto export_axis = [&](const std::string& stem, std::size_t component, double scale) {
        try {
            auto shape = analysis::axis_shape(baselines, p, component, scale, cfg.morph_mode,
                                              cfg.repair);
            detail::write_shape(dir / "shapes", stem, shape);
        } catch (const Error& e) {
            log << stem << " export skipped: " << e.what() << "\n";
        }
    };
    try {
        auto mean_shape = morphing::morph(baselines, p.mean, cfg.morph_mode, cfg.repair);
        detail::write_shape(dir / "shapes", "mean", mean_shape);
    } catch (const Error& e) {
        log << "mean shape export skipped: " << e.what() << "\n";
    }
    for (std::size_t a = 0; a < std::min<std::size_t>(2, p.components.size()); ++a) {
        export_axis("axis" + std::to_string(a + 1) + "_plus", a, cfg.pca_axis_scale);
        export_axis("axis" + std::to_string(a + 1) + "_minus", a, -cfg.pca_axis_scale);
    }

    ClusterReport report;
    report.ratios = p.ratios;
    report.counts = km.counts;
    report.inertia = km.inertia;
    report.degenerate = p.degenerate;

    log << "cluster: " << genomes.size() << " genomes, k=" << cfg.kmeans_k << ", inertia "
        << fmt_double(km.inertia) << "\n";
    for (std::size_t k = 0; k < km.counts.size(); ++k)
        log << "  cluster " << k << ": " << km.counts[k] << " members\n";
    if (!p.ratios.empty()) {
        log << "  variance ratios:";
        for (std::size_t k = 0; k < std::min<std::size_t>(4, p.ratios.size()); ++k)
            log << " " << fmt_double(p.ratios[k]);
        log << "\n";
    }
    return report;
}

// ---------------------------------------------------------------------------
// evaluate: one shape through the configured evaluator, polar and objectives
// to disk. Evaluation failures are reported in the artifacts, not thrown.
// ---------------------------------------------------------------------------

struct EvaluateReport {
    aero::ObjectivePair objectives;
    std::size_t polar_rows = 0;
    std::string message;
};

inline EvaluateReport cmd_evaluate(const config::RunConfig& cfg, const fs::path& shape_path,
                                   std::ostream& log) {
    cfg.validate();
    auto evaluator = detail::make_evaluator(cfg);

    geometry::CollocatedAirfoil shape;
    if (shape_path.extension() == ".json") {
        shape = geometry::from_json(nlohmann::json::parse(read_text_file(shape_path)));
    } else {
        auto raw = geometry::load_airfoil(shape_path);
        shape = geometry::collocate(geometry::normalize_chord(raw),
                                    geometry::CollocationGrid::make(cfg.grid_f));
        shape.name = raw.name.empty() ? shape_path.stem().string() : raw.name;
    }

    auto dir = cfg.prepare_run_dir();
    EvaluateReport report;
    aero::Polar polar;
    try {
        polar = aero::evaluate_polar(shape, cfg.flow, cfg.scan, *evaluator);
        report.objectives = aero::objectives_from_polar(polar);
    } catch (const EvaluationError& e) {
        report.objectives.failed = true;
        report.message = e.what();
        log << "evaluation failed: " << e.what() << "\n";
    }
    report.polar_rows = polar.rows.size();

    std::string polar_csv = "alpha,cl,cd,converged\n";
    for (const auto& r : polar.rows)
        polar_csv += fmt_double(r.alpha) + "," + fmt_double(r.cl) + "," + fmt_double(r.cd) +
                     "," + (r.converged ? "1" : "0") + "\n";
    write_text_file(dir / "polar.csv", polar_csv);

    nlohmann::json obj = {{"evaluator", cfg.evaluator},
                          {"shape", shape.name},
                          {"failed", report.objectives.failed},
                          {"cld_max", report.objectives.cld_max},
                          {"delta_alpha", report.objectives.delta_alpha},
                          {"alpha_at_cld_max", report.objectives.alpha_at_cld_max},
                          {"alpha_stall", report.objectives.alpha_stall},
                          {"stall_censored", report.objectives.stall_censored}};
    if (!report.message.empty()) obj["message"] = report.message;
    write_text_file(dir / "objectives.json", obj.dump(2) + "\n");

    if (!report.objectives.failed)
        log << shape.name << ": cld_max " << fmt_double(report.objectives.cld_max)
            << " at alpha " << fmt_double(report.objectives.alpha_at_cld_max)
            << ", delta_alpha " << fmt_double(report.objectives.delta_alpha)
            << (report.objectives.stall_censored ? " (stall censored)" : "") << "\n";
    return report;
}

} // namespace dbm::cli
