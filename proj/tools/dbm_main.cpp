// Command-line front end. Every verb reads the same declarative config; flags
// given on the command line override the file. Randomized verbs insist on an
// explicit seed so published runs replay exactly.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dbm/commands.hpp"
#include "dbm/config.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"design-by-morphing pipeline: build a shape space from baseline "
                 "airfoils, benchmark it, optimize in it, analyze the result"};
    app.require_subcommand(1);

    // shared knobs live on the parent; subcommands fall through to them
    std::string config_path, output_dir, mode, evaluator, baselines, targets, archive;
    std::uint64_t seed = 0;
    int grid_f = 0, population = 0, generations = 0, workers = 0, kmeans_k = 0;
    double tolerance = 0.0;
    std::vector<std::string> methods;

    auto* o_config = app.add_option("-c,--config", config_path, "JSON run configuration file")
                         ->check(CLI::ExistingFile);
    auto* o_seed = app.add_option("--seed", seed, "seed for randomized commands");
    auto* o_out = app.add_option("-o,--output-dir", output_dir, "directory for run artifacts");
    auto* o_grid = app.add_option("--grid-f", grid_f, "collocation resolution F (even)");
    auto* o_mode = app.add_option("--mode", mode, "morph mode: dbm or dbm-i");
    auto* o_eval = app.add_option("--evaluator", evaluator, "polar evaluator: synthetic or xfoil");
    auto* o_base = app.add_option("--baselines", baselines, "baseline manifest JSON");
    auto* o_targets = app.add_option("--targets", targets, "reconstruction target manifest");
    auto* o_archive = app.add_option("--archive", archive, "optimization archive CSV");
    auto* o_pop = app.add_option("--population", population, "GA population size");
    auto* o_gens = app.add_option("--generations", generations, "GA generation cap");
    auto* o_workers = app.add_option("--workers", workers, "evaluation threads (0 = hardware)");
    auto* o_k = app.add_option("--k", kmeans_k, "cluster count for the cluster verb");
    auto* o_tol = app.add_option("--tolerance", tolerance, "reconstruction MAE tolerance");
    auto* o_methods = app.add_option("--methods", methods, "reconstruction methods")
                          ->delimiter(',');

    std::vector<std::string> ingest_inputs;
    std::string morph_weights, eval_shape;

    auto* c_ingest = app.add_subcommand("ingest", "normalize and collocate coordinate files");
    c_ingest->add_option("inputs", ingest_inputs, "Selig .dat files");
    auto* c_morph = app.add_subcommand("morph", "blend baselines per weight-vector rows");
    c_morph->add_option("weights", morph_weights, "CSV of weight rows")
        ->required()
        ->check(CLI::ExistingFile);
    auto* c_recon = app.add_subcommand("reconstruct", "fit targets with each parameterization");
    auto* c_opt = app.add_subcommand("optimize", "bi-objective search over the weight space");
    auto* c_zdt = app.add_subcommand("benchmark-zdt", "validate the optimizer on ZDT1/2/4/6");
    auto* c_cluster = app.add_subcommand("cluster", "PCA and k-means over an archive");
    auto* c_eval = app.add_subcommand("evaluate", "polar and objectives for one shape");
    c_eval->add_option("shape", eval_shape, "airfoil file (.dat or collocated .json)")
        ->required()
        ->check(CLI::ExistingFile);
    for (auto* sub : {c_ingest, c_morph, c_recon, c_opt, c_zdt, c_cluster, c_eval})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        dbm::config::RunConfig cfg = o_config->count()
                                         ? dbm::config::RunConfig::load(config_path)
                                         : dbm::config::RunConfig{};
        if (o_seed->count()) cfg.seed = seed;
        if (o_out->count()) cfg.output_dir = output_dir;
        if (o_grid->count()) cfg.grid_f = grid_f;
        if (o_mode->count()) cfg.morph_mode = dbm::morphing::morph_mode_from_name(mode);
        if (o_eval->count()) cfg.evaluator = evaluator;
        if (o_base->count()) cfg.baselines = baselines;
        if (o_targets->count()) cfg.targets = targets;
        if (o_archive->count()) cfg.archive = archive;
        if (o_pop->count()) cfg.ga.population = population;
        if (o_gens->count()) cfg.ga.max_generations = generations;
        if (o_workers->count()) cfg.ga.workers = workers;
        if (o_k->count()) cfg.kmeans_k = kmeans_k;
        if (o_tol->count()) cfg.tolerance_mae = tolerance;
        if (o_methods->count()) cfg.methods = methods;

        if (c_ingest->parsed()) {
            std::vector<fs::path> inputs(ingest_inputs.begin(), ingest_inputs.end());
            dbm::cli::cmd_ingest(cfg, inputs, std::cout);
        } else if (c_morph->parsed()) {
            dbm::cli::cmd_morph(cfg, morph_weights, std::cout);
        } else if (c_recon->parsed()) {
            dbm::cli::cmd_reconstruct(cfg, std::cout);
        } else if (c_opt->parsed()) {
            dbm::cli::cmd_optimize(cfg, std::cout);
        } else if (c_zdt->parsed()) {
            dbm::cli::cmd_benchmark_zdt(cfg, std::cout);
        } else if (c_cluster->parsed()) {
            dbm::cli::cmd_cluster(cfg, std::cout);
        } else if (c_eval->parsed()) {
            dbm::cli::cmd_evaluate(cfg, eval_shape, std::cout);
        }
        std::cout << "artifacts in " << cfg.output_dir.string() << "\n";
    } catch (const dbm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
