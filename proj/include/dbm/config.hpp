#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "dbm/aero.hpp"
#include "dbm/error.hpp"
#include "dbm/evo.hpp"
#include "dbm/geometry.hpp"
#include "dbm/morph.hpp"
#include "dbm/param.hpp"
#include "dbm/util.hpp"
#include "dbm/xfoil.hpp"

namespace dbm::config {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// RunConfig: one declarative tree that every command consumes. JSON in, with
// strict key checking (a typo in a knob name is an error, not a silently
// ignored setting), relative paths resolved against the config file, and the
// fully resolved tree written back into the run directory so a finished run
// documents exactly what it ran with.
// ---------------------------------------------------------------------------

namespace detail {

// Tracks which keys of a JSON object were consumed so load() can reject the
// leftovers by name.
class KeyReader {
public:
    KeyReader(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + ": expected a JSON object");
    }

    bool has(const char* key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    template <typename T>
    T get(const char* key, T fallback) {
        seen_.insert(key);
        if (!j_.contains(key)) return fallback;
        try {
            return j_.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(where_ + "." + key + ": " + e.what());
        }
    }

    const nlohmann::json& raw(const char* key) {
        seen_.insert(key);
        return j_.at(key);
    }

    void finish() const {
        std::string unknown;
        for (const auto& item : j_.items())
            if (!seen_.count(item.key())) unknown += (unknown.empty() ? "" : ", ") + item.key();
        if (!unknown.empty())
            throw ConfigError(where_ + ": unknown keys: " + unknown);
    }

private:
    const nlohmann::json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

inline fs::path resolve_path(const std::string& p, const fs::path& base) {
    fs::path path(p);
    if (path.is_absolute()) return path.lexically_normal();
    return (base / path).lexically_normal();
}

} // namespace detail

struct RunConfig {
    // data inputs; empty path means "not set", commands that need one complain
    fs::path baselines;
    fs::path targets;
    fs::path archive;

    int grid_f = 400;

    morphing::MorphMode morph_mode = morphing::MorphMode::blend;
    geometry::RepairOptions repair;

    std::string evaluator = "synthetic"; // or "xfoil"
    aero::FlowCondition flow;
    aero::ScanSchedule scan;
    xfoil::XfoilOptions xfoil;

    evo::GaConfig ga;
    std::optional<std::uint64_t> seed; // explicit by policy, never wall-clock

    fs::path output_dir = "run";

    // reconstruction
    std::vector<std::string> methods = {"dbm", "dbm-i"};
    double tolerance_mae = 5e-3;

    // clustering
    int kmeans_k = 3;
    double pca_axis_scale = 0.5;

    // zdt benchmark
    int zdt_dim = 25;

    void validate() const {
        if (grid_f < 2 || grid_f % 2 != 0)
            throw ConfigError("grid_f must be even and >= 2");
        repair.validate();
        if (evaluator != "synthetic" && evaluator != "xfoil")
            throw ConfigError("evaluator must be 'synthetic' or 'xfoil', got '" + evaluator +
                              "'");
        flow.validate();
        scan.validate();
        ga.validate();
        if (xfoil.panels < 10 || xfoil.retry_panels < 10)
            throw ConfigError("xfoil panel counts must be >= 10");
        if (xfoil.seconds_per_alpha <= 0.0)
            throw ConfigError("xfoil.seconds_per_alpha must be positive");
        if (xfoil.curvature_weight < 0.0)
            throw ConfigError("xfoil.curvature_weight must be >= 0");
        if (tolerance_mae <= 0.0) throw ConfigError("tolerance_mae must be positive");
        if (methods.empty()) throw ConfigError("methods must not be empty");
        for (const auto& m : methods) {
            const auto& kinds = param::generator_kinds();
            bool known = false;
            for (const auto& k : kinds)
                if (k == m) known = true;
            if (!known) throw ConfigError("unknown reconstruction method '" + m + "'");
        }
        if (kmeans_k < 1) throw ConfigError("kmeans_k must be >= 1");
        if (zdt_dim < 2) throw ConfigError("zdt_dim must be >= 2");
        const std::pair<const char*, const fs::path*> path_checks[] = {
            {"baselines", &baselines}, {"targets", &targets}, {"archive", &archive}};
        for (const auto& [label, p] : path_checks)
            if (!p->empty() && !fs::exists(*p))
                throw ConfigError(std::string(label) + " path does not exist: " + p->string());
    }

    std::uint64_t require_seed(const char* command) const {
        if (!seed)
            throw ConfigError(std::string(command) +
                              " needs an explicit seed (config key \"seed\" or --seed)");
        return *seed;
    }

    const fs::path& require_baselines(const char* command) const {
        if (baselines.empty())
            throw ConfigError(std::string(command) + " needs a baselines manifest (\"baselines\")");
        return baselines;
    }

    static RunConfig from_json(const nlohmann::json& j, const fs::path& base_dir) {
        detail::KeyReader top(j, "config");
        RunConfig c;
        if (top.has("baselines"))
            c.baselines = detail::resolve_path(top.get<std::string>("baselines", ""), base_dir);
        if (top.has("targets"))
            c.targets = detail::resolve_path(top.get<std::string>("targets", ""), base_dir);
        if (top.has("archive"))
            c.archive = detail::resolve_path(top.get<std::string>("archive", ""), base_dir);
        c.grid_f = top.get("grid_f", c.grid_f);
        c.morph_mode = morphing::morph_mode_from_name(
            top.get<std::string>("morph_mode", morphing::morph_mode_name(c.morph_mode)));
        if (top.has("repair")) {
            detail::KeyReader r(top.raw("repair"), "config.repair");
            c.repair.enabled = r.get("enabled", c.repair.enabled);
            c.repair.neighborhood = r.get("neighborhood", c.repair.neighborhood);
            c.repair.smooth_window = r.get("smooth_window", c.repair.smooth_window);
            c.repair.max_passes = r.get("max_passes", c.repair.max_passes);
            r.finish();
        }
        c.evaluator = top.get("evaluator", c.evaluator);
        if (top.has("flow")) {
            detail::KeyReader r(top.raw("flow"), "config.flow");
            c.flow.reynolds = r.get("reynolds", c.flow.reynolds);
            c.flow.mach = r.get("mach", c.flow.mach);
            c.flow.n_crit = r.get("n_crit", c.flow.n_crit);
            r.finish();
        }
        if (top.has("scan")) {
            detail::KeyReader r(top.raw("scan"), "config.scan");
            c.scan.alpha_lo = r.get("alpha_lo", c.scan.alpha_lo);
            c.scan.alpha_hi = r.get("alpha_hi", c.scan.alpha_hi);
            c.scan.rough_step = r.get("rough_step", c.scan.rough_step);
            c.scan.fine_step = r.get("fine_step", c.scan.fine_step);
            c.scan.fine_margin = r.get("fine_margin", c.scan.fine_margin);
            r.finish();
        }
        if (top.has("xfoil")) {
            detail::KeyReader r(top.raw("xfoil"), "config.xfoil");
            c.xfoil.panels = r.get<std::size_t>("panels", c.xfoil.panels);
            c.xfoil.retry_panels = r.get<std::size_t>("retry_panels", c.xfoil.retry_panels);
            c.xfoil.seconds_per_alpha = r.get("seconds_per_alpha", c.xfoil.seconds_per_alpha);
            c.xfoil.curvature_weight = r.get("curvature_weight", c.xfoil.curvature_weight);
            r.finish();
        }
        if (top.has("ga")) {
            detail::KeyReader r(top.raw("ga"), "config.ga");
            c.ga.population = r.get("population", c.ga.population);
            c.ga.max_generations = r.get("max_generations", c.ga.max_generations);
            c.ga.crossover_rate = r.get("crossover_rate", c.ga.crossover_rate);
            c.ga.mutation_rate = r.get("mutation_rate", c.ga.mutation_rate);
            c.ga.mutation_scale = r.get("mutation_scale", c.ga.mutation_scale);
            c.ga.eta_crossover = r.get("eta_crossover", c.ga.eta_crossover);
            c.ga.eta_mutation = r.get("eta_mutation", c.ga.eta_mutation);
            c.ga.elitism_fraction = r.get("elitism_fraction", c.ga.elitism_fraction);
            c.ga.workers = r.get("workers", c.ga.workers);
            if (r.has("early_stop") && !r.raw("early_stop").is_null())
                c.ga.early_stop = r.get<double>("early_stop", 0.0);
            if (r.has("hv_reference") && !r.raw("hv_reference").is_null()) {
                auto ref = r.get<std::vector<double>>("hv_reference", {});
                if (ref.size() != 2)
                    throw ConfigError("config.ga.hv_reference: expected [f1, f2]");
                c.ga.hv_reference = {ref[0], ref[1]};
            }
            r.finish();
        }
        if (top.has("seed")) {
            const auto& s = top.raw("seed");
            if (!s.is_number_unsigned())
                throw ConfigError("config.seed: expected a non-negative integer");
            c.seed = s.get<std::uint64_t>();
        }
        if (top.has("output_dir"))
            c.output_dir = detail::resolve_path(top.get<std::string>("output_dir", "run"),
                                                base_dir);
        c.methods = top.get("methods", c.methods);
        c.tolerance_mae = top.get("tolerance_mae", c.tolerance_mae);
        c.kmeans_k = top.get("kmeans_k", c.kmeans_k);
        c.pca_axis_scale = top.get("pca_axis_scale", c.pca_axis_scale);
        c.zdt_dim = top.get("zdt_dim", c.zdt_dim);
        top.finish();
        // value checks wait for validate(): command-line overrides are applied
        // after loading, so a file-supplied path may legitimately be replaced
        return c;
    }

    static RunConfig load(const fs::path& path) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_text_file(path));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("config " + path.string() + ": " + e.what());
        }
        return from_json(j, fs::absolute(path).parent_path());
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        if (!baselines.empty()) j["baselines"] = baselines.string();
        if (!targets.empty()) j["targets"] = targets.string();
        if (!archive.empty()) j["archive"] = archive.string();
        j["grid_f"] = grid_f;
        j["morph_mode"] = morphing::morph_mode_name(morph_mode);
        j["repair"] = {{"enabled", repair.enabled},
                       {"neighborhood", repair.neighborhood},
                       {"smooth_window", repair.smooth_window},
                       {"max_passes", repair.max_passes}};
        j["evaluator"] = evaluator;
        j["flow"] = {{"reynolds", flow.reynolds}, {"mach", flow.mach}, {"n_crit", flow.n_crit}};
        j["scan"] = {{"alpha_lo", scan.alpha_lo},
                     {"alpha_hi", scan.alpha_hi},
                     {"rough_step", scan.rough_step},
                     {"fine_step", scan.fine_step},
                     {"fine_margin", scan.fine_margin}};
        j["xfoil"] = {{"panels", xfoil.panels},
                      {"retry_panels", xfoil.retry_panels},
                      {"seconds_per_alpha", xfoil.seconds_per_alpha},
                      {"curvature_weight", xfoil.curvature_weight}};
        nlohmann::json g = {{"population", ga.population},
                            {"max_generations", ga.max_generations},
                            {"crossover_rate", ga.crossover_rate},
                            {"mutation_rate", ga.mutation_rate},
                            {"mutation_scale", ga.mutation_scale},
                            {"eta_crossover", ga.eta_crossover},
                            {"eta_mutation", ga.eta_mutation},
                            {"elitism_fraction", ga.elitism_fraction},
                            {"workers", ga.workers}};
        if (ga.early_stop) g["early_stop"] = *ga.early_stop;
        if (ga.hv_reference)
            g["hv_reference"] = {ga.hv_reference->first, ga.hv_reference->second};
        j["ga"] = std::move(g);
        if (seed) j["seed"] = *seed;
        j["output_dir"] = output_dir.string();
        j["methods"] = methods;
        j["tolerance_mae"] = tolerance_mae;
        j["kmeans_k"] = kmeans_k;
        j["pca_axis_scale"] = pca_axis_scale;
        j["zdt_dim"] = zdt_dim;
        return j;
    }

    // Every command calls this first: create the run directory and drop the
    // resolved config copy so the artifacts are self-describing.
    fs::path prepare_run_dir() const {
        fs::create_directories(output_dir);
        write_text_file(output_dir / "config.json", to_json().dump(2) + "\n");
        return output_dir;
    }
};

} // namespace dbm::config
