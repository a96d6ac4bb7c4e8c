// Acceptance gate. Runs the ten release criteria end to end and prints one
// PASS/FAIL line per criterion with the measured quantity next to its bound.
// The external-solver polar check reports SKIP when no solver is configured;
// everything else must pass for the binary to exit zero.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "dbm/dbm.hpp"
#include "oracles.hpp"

using namespace dbm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    bool skip = false;
    std::string detail;
};

Outcome fail(std::string detail) { return {false, false, std::move(detail)}; }
Outcome pass(std::string detail) { return {true, false, std::move(detail)}; }
Outcome skip(std::string detail) { return {true, true, std::move(detail)}; }

fs::path data_dir() { return DBM_DATA_DIR; }
fs::path config_dir() { return DBM_CONFIG_DIR; }

fs::path work_root() {
    static fs::path root = [] {
        auto p = fs::temp_directory_path() /
                 ("dbm-acceptance-" + std::to_string(::getpid()));
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

// Run the shipped executable; stdout/stderr land next to the run artifacts.
int run_cli(const std::string& args, const fs::path& log_path) {
    std::string cmd = std::string(DBM_CLI_PATH) + " " + args + " > " +
                      log_path.string() + " 2>&1";
    return std::system(cmd.c_str());
}

std::string fmt(double v) { return fmt_double(v); }

morphing::BaselineSet load_full_baseline_set() {
    return morphing::load_baseline_manifest(data_dir() / "baselines" / "manifest.json",
                                            geometry::CollocationGrid::make(400));
}

double mae_vs(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

// --------------------------------------------------------------------------
// 1. one-hot weight vectors reproduce every baseline
// --------------------------------------------------------------------------
Outcome criterion_morph_identity() {
    auto set = load_full_baseline_set();
    if (set.size() != 25)
        return fail("expected 25 baselines, manifest has " + std::to_string(set.size()));
    double worst = 0.0;
    for (std::size_t k = 0; k < set.size(); ++k) {
        std::vector<double> w(set.size(), 0.0);
        w[k] = 1.0;
        auto m = morphing::morph(set, w, morphing::MorphMode::blend);
        worst = std::max(worst, mae_vs(m.y, set.at(k).y));
    }
    if (worst > 1e-12) return fail("worst MAE " + fmt(worst) + " exceeds 1e-12");
    return pass("25/25 baselines, worst MAE " + fmt(worst) + " (bound 1e-12)");
}

// --------------------------------------------------------------------------
// 2. weight-vector scaling leaves the morph unchanged
// --------------------------------------------------------------------------
Outcome criterion_scale_invariance() {
    auto set = load_full_baseline_set();
    Rng rng(7);
    int exact = 0;
    double worst_free = 0.0;
    for (int t = 0; t < 100; ++t) {
        auto w = morphing::random_weights(rng, set.size(), morphing::MorphMode::blend);
        auto a = morphing::morph_unrepaired(set, w, morphing::MorphMode::blend);

        // power-of-two scales shift exponents only, so the normalized
        // coefficients round identically and equality is bitwise
        double c2 = std::ldexp(1.0, -(1 + static_cast<int>(rng.index(3))));
        auto w2 = w;
        for (auto& v : w2) v *= c2;
        auto b = morphing::morph_unrepaired(set, w2, morphing::MorphMode::blend);
        if (a.y == b.y) ++exact;

        // arbitrary scales re-round each coefficient once
        double c3 = rng.uniform(0.05, 1.0);
        auto w3 = w;
        for (auto& v : w3) v *= c3;
        auto c = morphing::morph_unrepaired(set, w3, morphing::MorphMode::blend);
        worst_free = std::max(worst_free, mae_vs(a.y, c.y));
    }
    if (exact != 100)
        return fail("only " + std::to_string(exact) + "/100 power-of-two scalings bitwise");
    if (worst_free > 1e-13)
        return fail("arbitrary-scale worst MAE " + fmt(worst_free) + " exceeds 1e-13");
    return pass("100/100 power-of-two scalings bitwise; arbitrary scales worst MAE " +
                fmt(worst_free) + " (bound 1e-13)");
}

// --------------------------------------------------------------------------
// 3. repaired morphs are intersection-free under the brute-force oracle
// --------------------------------------------------------------------------
Outcome criterion_repair() {
    auto set = load_full_baseline_set();
    Rng rng(99);
    const int n_trials = 1000;
    int non_repairable = 0, repaired = 0, leaked = 0;
    for (int t = 0; t < n_trials; ++t) {
        auto w = morphing::random_weights(rng, set.size(), morphing::MorphMode::blend);
        geometry::RepairReport rep;
        try {
            auto m = morphing::morph(set, w, morphing::MorphMode::blend, {},
                                     morphing::k_weight_sum_epsilon, &rep);
            if (rep.crossings_found > 0) ++repaired;
            if (!oracle::outline_crossings(m).empty()) ++leaked;
        } catch (const NonRepairableError&) {
            ++non_repairable;
        }
    }
    double rate = 100.0 * non_repairable / n_trials;
    if (leaked > 0)
        return fail(std::to_string(leaked) + " repaired outputs still self-intersect");
    if (rate >= 5.0)
        return fail("non-repairable rate " + fmt(rate) + "% is not below 5%");
    return pass(std::to_string(n_trials) + " random morphs: " + std::to_string(repaired) +
                " repaired, all intersection-free by oracle; " +
                std::to_string(non_repairable) + " non-repairable (" + fmt(rate) +
                "%, bound 5%)");
}

// --------------------------------------------------------------------------
// 4. desk-scale reconstruction benchmark through the shipped binary
// --------------------------------------------------------------------------
Outcome criterion_reconstruction() {
    auto out = work_root() / "recon";
    int rc = run_cli("reconstruct -c " + (config_dir() / "desk.json").string() + " -o " +
                         out.string(),
                     work_root() / "recon.log");
    if (rc != 0) return fail("reconstruct exited " + std::to_string(rc));
    auto summary = nlohmann::json::parse(read_text_file(out / "summary.json"));
    double dbm_pct = summary.at("methods").at("dbm").at("final_percent_within");
    double dbmi_pct = summary.at("methods").at("dbm-i").at("final_percent_within");
    if (dbm_pct < 80.0)
        return fail("dbm reconstructed " + fmt(dbm_pct) + "% within 0.005, need >= 80%");
    if (!(dbm_pct > dbmi_pct))
        return fail("dbm " + fmt(dbm_pct) + "% not strictly above dbm-i " + fmt(dbmi_pct) +
                    "%");
    return pass("dbm " + fmt(dbm_pct) + "% vs dbm-i " + fmt(dbmi_pct) +
                "% within MAE 0.005 (need >= 80% and dbm > dbm-i)");
}

// --------------------------------------------------------------------------
// 5. ZDT validation at population 100 / 500 generations
// --------------------------------------------------------------------------
Outcome criterion_zdt() {
    auto out = work_root() / "zdt";
    int rc = run_cli("benchmark-zdt --seed 1 --population 100 --generations 500 -o " +
                         out.string(),
                     work_root() / "zdt.log");
    if (rc != 0) return fail("benchmark-zdt exited " + std::to_string(rc));
    auto dev = nlohmann::json::parse(read_text_file(out / "deviations.json"));
    const std::pair<const char*, double> bounds[] = {
        {"zdt1", 0.01}, {"zdt2", 0.01}, {"zdt4", 0.02}, {"zdt6", 0.05}};
    std::string detail;
    for (const auto& [name, bound] : bounds) {
        double d = dev.at(name).at("deviation");
        if (!(d <= bound))
            return fail(std::string(name) + " deviation " + fmt(d) + " exceeds " +
                        fmt(bound));
        if (!detail.empty()) detail += ", ";
        detail += std::string(name) + " " + fmt(d) + " (<= " + fmt(bound) + ")";
    }
    return pass(detail);
}

// --------------------------------------------------------------------------
// 6. Pareto machinery against the cubic oracle plus partial-order properties
// --------------------------------------------------------------------------
Outcome criterion_pareto_oracle() {
    Rng rng(2026);
    for (int inst = 0; inst < 200; ++inst) {
        std::size_t n = 1 + rng.index(100);
        std::vector<std::vector<double>> objs(n, std::vector<double>(2));
        for (auto& row : objs)
            for (auto& v : row) v = rng.uniform(0.0, 1.0);
        // duplicated coordinates exercise the tie handling
        for (std::size_t i = 1; i < n; ++i)
            if (rng.uniform(0.0, 1.0) < 0.2) objs[i][rng.index(2)] = objs[i - 1][0];

        auto fronts = evo::non_dominated_sort(objs, evo::Sense::minimize);
        std::vector<int> got(n, -1);
        for (std::size_t f = 0; f < fronts.size(); ++f)
            for (auto i : fronts[f]) got[i] = static_cast<int>(f);
        auto want = oracle::nds_peel(objs);
        if (got != want) return fail("rank mismatch on instance " + std::to_string(inst));
    }

    for (int t = 0; t < 100000; ++t) {
        std::vector<double> a = {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
        std::vector<double> b = {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
        std::vector<double> c = {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
        // force coordinate ties into a third of the triples
        if (t % 3 == 0) {
            b[0] = a[0];
            c[1] = b[1];
        }
        auto dom = [](const std::vector<double>& x, const std::vector<double>& y) {
            return evo::dominates(x, y, evo::Sense::minimize);
        };
        if (dom(a, a)) return fail("dominates is not irreflexive");
        if (dom(a, b) && dom(b, a)) return fail("dominates is not antisymmetric");
        if (dom(a, b) && dom(b, c) && !dom(a, c)) return fail("dominates is not transitive");
        if (dom(a, b) != oracle::dominates_min(a, b))
            return fail("dominates disagrees with the oracle");
        if (dom(b, a) != oracle::dominates_min(b, a))
            return fail("dominates disagrees with the oracle (swapped)");
    }
    return pass("200 sort instances match the cubic oracle; partial-order properties hold "
                "on 100000 random triples");
}

// --------------------------------------------------------------------------
// 7. polar objective extraction on hand-built tables
// --------------------------------------------------------------------------
Outcome criterion_objectives() {
    auto row = [](double alpha, double cl, double cd, bool conv = true) {
        aero::PolarRow r;
        r.alpha = alpha;
        r.cl = cl;
        r.cd = cd;
        r.converged = conv;
        return r;
    };

    // efficiency peaks at 4 deg (drag parabola centered there outruns the
    // linear lift growth), lift keeps rising to its local max at 8 deg
    aero::Polar separated;
    for (int a = 0; a <= 10; ++a) {
        double cl = a <= 8 ? 0.2 + 0.1 * a : 1.0 - 0.2 * (a - 8);
        double cd = 0.01 + 0.002 * (a - 4) * (a - 4);
        separated.rows.push_back(row(a, cl, cd));
    }
    auto obj = aero::objectives_from_polar(separated);
    if (obj.alpha_at_cld_max != 4.0 || obj.alpha_stall != 8.0 || obj.delta_alpha != 4.0 ||
        obj.stall_censored)
        return fail("separated peaks: got alpha_cld " + fmt(obj.alpha_at_cld_max) +
                    ", stall " + fmt(obj.alpha_stall) + ", delta " + fmt(obj.delta_alpha));

    // first local lift max sits before the efficiency peak: margin clamps to 0
    aero::Polar clamped;
    clamped.rows = {row(0, 0.50, 0.020), row(1, 0.60, 0.018), row(2, 0.55, 0.016),
                    row(3, 0.70, 0.010), row(4, 0.80, 0.008), row(5, 0.75, 0.009)};
    obj = aero::objectives_from_polar(clamped);
    if (obj.alpha_stall != 1.0 || obj.alpha_at_cld_max != 4.0 || obj.delta_alpha != 0.0)
        return fail("clamp case: got stall " + fmt(obj.alpha_stall) + ", alpha_cld " +
                    fmt(obj.alpha_at_cld_max) + ", delta " + fmt(obj.delta_alpha));

    // lift still rising at the scan edge: censored stall at the edge angle
    aero::Polar rising;
    for (int a = 0; a <= 6; ++a) rising.rows.push_back(row(a, 0.2 + 0.1 * a, 0.01));
    obj = aero::objectives_from_polar(rising);
    if (!obj.stall_censored || obj.alpha_stall != 6.0)
        return fail("censored case: stall " + fmt(obj.alpha_stall) +
                    (obj.stall_censored ? " (censored)" : " (not censored)"));

    // identical efficiency at two angles resolves to the smaller angle
    aero::Polar tie;
    tie.rows = {row(0, 0.4, 0.010), row(1, 0.8, 0.010), row(2, 0.8, 0.010),
                row(3, 0.5, 0.010)};
    obj = aero::objectives_from_polar(tie);
    if (obj.alpha_at_cld_max != 1.0)
        return fail("tie case: alpha_at_cld_max " + fmt(obj.alpha_at_cld_max) +
                    ", expected 1");

    // unconverged rows are invisible; a fully unconverged polar is an error
    aero::Polar holes;
    holes.rows = {row(0, 0.4, 0.010), row(1, 9.0, 0.001, false), row(2, 0.6, 0.010),
                  row(3, 0.5, 0.011)};
    obj = aero::objectives_from_polar(holes);
    if (obj.alpha_at_cld_max != 2.0 || obj.alpha_stall != 2.0)
        return fail("unconverged row leaked into the extraction");
    aero::Polar dead;
    dead.rows = {row(0, 0.4, 0.010, false), row(1, 0.5, 0.010, false)};
    try {
        aero::objectives_from_polar(dead);
        return fail("fully unconverged polar did not raise an evaluation error");
    } catch (const EvaluationError&) {
    }

    return pass("separated peaks, margin clamp, censored edge, efficiency tie and "
                "convergence filtering all extract as specified");
}

// --------------------------------------------------------------------------
// 8. synthetic end-to-end optimization through the shipped binary
// --------------------------------------------------------------------------
Outcome criterion_optimize() {
    auto out_a = work_root() / "opt-a";
    auto out_b = work_root() / "opt-b";
    std::string base = "optimize -c " + (config_dir() / "desk.json").string();
    int rc = run_cli(base + " -o " + out_a.string(), work_root() / "opt-a.log");
    if (rc != 0) return fail("first optimize run exited " + std::to_string(rc));
    rc = run_cli(base + " -o " + out_b.string(), work_root() / "opt-b.log");
    if (rc != 0) return fail("second optimize run exited " + std::to_string(rc));

    auto text_a = read_text_file(out_a / "archive.csv");
    if (text_a != read_text_file(out_b / "archive.csv"))
        return fail("same-seed archives differ byte for byte");

    // parse the objective columns (last two) off the archive
    std::vector<std::pair<double, double>> points;
    std::istringstream in(text_a);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        auto last = line.rfind(',');
        auto prev = line.rfind(',', last - 1);
        points.push_back({std::stod(line.substr(prev + 1, last - prev - 1)),
                          std::stod(line.substr(last + 1))});
    }

    std::set<std::pair<double, double>> distinct(points.begin(), points.end());
    if (distinct.size() < 10)
        return fail("archive spans only " + std::to_string(distinct.size()) +
                    " distinct objective points, need >= 10");

    for (auto it = distinct.begin(); it != distinct.end(); ++it)
        for (auto jt = std::next(it); jt != distinct.end(); ++jt) {
            bool ge1 = it->first >= jt->first && it->second >= jt->second;
            bool ge2 = jt->first >= it->first && jt->second >= it->second;
            if (ge1 || ge2) // distinct points, so >= in both means domination
                return fail("archive contains a dominated pair");
        }

    // sorted by rising peak efficiency, the stall margin must fall strictly
    double prev_margin = std::numeric_limits<double>::infinity();
    for (const auto& [cld, margin] : distinct) {
        if (!(margin < prev_margin)) return fail("trade-off is not strictly monotone");
        prev_margin = margin;
    }
    return pass("archive byte-identical across same-seed runs; " +
                std::to_string(distinct.size()) +
                " distinct points, pairwise non-dominated, strictly monotone trade-off");
}

// --------------------------------------------------------------------------
// 9. external-solver polars for two catalogued sections (skipped without it)
// --------------------------------------------------------------------------
Outcome criterion_xfoil() {
    const char* bin = std::getenv("DBM_XFOIL_BIN");
    if (bin == nullptr || !fs::exists(bin))
        return skip("DBM_XFOIL_BIN not set; paper-scale front needs ~1.1M solver calls "
                    "and is excluded by design");

    xfoil::XfoilEvaluator eval{xfoil::XfoilOptions{}};
    aero::FlowCondition flow;
    aero::ScanSchedule sched;
    auto grid = geometry::CollocationGrid::make(400);
    struct Expect {
        const char* file;
        double cld, cld_tol, da, da_tol;
    };
    const Expect cases[] = {{"naca0012", 69.3, 6.93, 6.75, 1.5},
                            {"naca2412", 99.5, 9.95, 12.0, 1.5}};
    std::string detail;
    for (const auto& c : cases) {
        auto raw = geometry::load_airfoil(data_dir() / "baselines" / (std::string(c.file) + ".dat"));
        auto shape = geometry::collocate(geometry::normalize_chord(raw), grid);
        auto obj = aero::objectives(shape, flow, sched, eval);
        if (obj.failed) return fail(std::string(c.file) + ": evaluation failed");
        if (std::abs(obj.cld_max - c.cld) > c.cld_tol)
            return fail(std::string(c.file) + ": cld_max " + fmt(obj.cld_max) +
                        " outside " + fmt(c.cld) + " +- " + fmt(c.cld_tol));
        if (std::abs(obj.delta_alpha - c.da) > c.da_tol)
            return fail(std::string(c.file) + ": delta_alpha " + fmt(obj.delta_alpha) +
                        " outside " + fmt(c.da) + " +- " + fmt(c.da_tol));
        if (!detail.empty()) detail += "; ";
        detail += std::string(c.file) + " cld " + fmt(obj.cld_max) + ", da " +
                  fmt(obj.delta_alpha);
    }
    return pass(detail);
}

// --------------------------------------------------------------------------
// 10. analysis invariants: PCA structure, cluster recovery, mean identity
// --------------------------------------------------------------------------
Outcome criterion_analysis() {
    Rng rng(5);

    std::vector<std::vector<double>> cloud(120, std::vector<double>(10));
    for (auto& r : cloud)
        for (auto& v : r) v = rng.uniform(-1.0, 1.0);
    auto p = analysis::pca(cloud);
    double sum = 0.0;
    for (double r : p.ratios) sum += r;
    if (std::abs(sum - 1.0) > 1e-10)
        return fail("PCA ratios sum to " + fmt(sum) + ", off by more than 1e-10");
    for (std::size_t i = 1; i < p.ratios.size(); ++i)
        if (p.ratios[i] > p.ratios[i - 1] + 1e-15) return fail("PCA ratios not descending");
    for (std::size_t i = 0; i < p.components.size(); ++i)
        for (std::size_t j = i; j < p.components.size(); ++j) {
            double d = 0.0;
            for (std::size_t t = 0; t < p.components[i].size(); ++t)
                d += p.components[i][t] * p.components[j][t];
            double want = i == j ? 1.0 : 0.0;
            if (std::abs(d - want) > 1e-10)
                return fail("PCA axes " + std::to_string(i) + "," + std::to_string(j) +
                            " inner product off by " + fmt(std::abs(d - want)));
        }

    const double centers[3][4] = {
        {0, 0, 0, 0}, {10, 10, 10, 10}, {-10, 10, -10, 10}};
    std::vector<std::vector<double>> blobs;
    std::vector<std::size_t> planted;
    for (std::size_t c = 0; c < 3; ++c)
        for (int i = 0; i < 30; ++i) {
            std::vector<double> r(4);
            for (std::size_t j = 0; j < 4; ++j) r[j] = centers[c][j] + rng.uniform(-0.5, 0.5);
            blobs.push_back(std::move(r));
            planted.push_back(c);
        }
    auto km = analysis::kmeans(blobs, 3, 17);
    std::map<std::size_t, std::size_t> relabel;
    for (std::size_t i = 0; i < blobs.size(); ++i) {
        auto [it, fresh] = relabel.try_emplace(planted[i], km.assignments[i]);
        if (!fresh && it->second != km.assignments[i])
            return fail("k-means split a planted cluster at row " + std::to_string(i));
    }
    if (relabel.size() != 3) return fail("k-means merged planted clusters");

    std::vector<std::size_t> assign;
    for (std::size_t i = 0; i < cloud.size(); ++i) assign.push_back(rng.index(4));
    auto rep = analysis::cluster_mean_weights(cloud, assign, 4);
    double worst = 0.0;
    for (std::size_t j = 0; j < rep.total_mean.size(); ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 4; ++k)
            if (rep.counts[k] > 0)
                acc += static_cast<double>(rep.counts[k]) * rep.means[k][j];
        acc /= static_cast<double>(cloud.size());
        worst = std::max(worst, std::abs(acc - rep.total_mean[j]));
    }
    if (worst > 1e-12)
        return fail("size-weighted mean identity off by " + fmt(worst));

    return pass("PCA ratios sum to 1 and axes orthonormal within 1e-10; 3 planted "
                "clusters recovered exactly; mean identity within 1e-12 (worst " +
                fmt(worst) + ")");
}

} // namespace

int main() {
    struct Criterion {
        const char* label;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"morph identity", criterion_morph_identity},
        {"scale invariance", criterion_scale_invariance},
        {"intersection repair", criterion_repair},
        {"desk-scale reconstruction", criterion_reconstruction},
        {"ZDT optimizer validation", criterion_zdt},
        {"Pareto machinery oracle", criterion_pareto_oracle},
        {"objective extraction", criterion_objectives},
        {"synthetic end-to-end optimization", criterion_optimize},
        {"external-solver polar check", criterion_xfoil},
        {"analysis invariants", criterion_analysis},
    };

    int failed = 0, skipped = 0;
    int idx = 0;
    for (const auto& c : criteria) {
        ++idx;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = fail(std::string("unexpected error: ") + e.what());
        }
        const char* tag = o.skip ? "SKIP" : (o.pass ? "PASS" : "FAIL");
        if (o.skip) ++skipped;
        else if (!o.pass) ++failed;
        std::printf("[%2d/10] %s  %s: %s\n", idx, tag, c.label, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %d passed, %d skipped, %d failed\n", 10 - failed - skipped,
                skipped, failed);
    return failed == 0 ? 0 : 1;
}
