#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "lbsqa/commands.hpp"
#include "lbsqa/errors.hpp"
#include "lbsqa/version.hpp"

namespace {

struct GlobalFlags {
    std::string config_path;
    std::string out_dir;
    std::string pings;
    std::string zones;
    std::string zone_lookup;
    std::string bias;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

lbsqa::PipelineConfig resolve(const GlobalFlags& g) {
    lbsqa::PipelineConfig cfg =
        g.config_path.empty() ? lbsqa::default_config() : lbsqa::load_config_file(g.config_path);
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    if (!g.pings.empty()) cfg.pings_path = g.pings;
    if (!g.zones.empty()) cfg.zones_path = g.zones;
    if (!g.zone_lookup.empty()) cfg.zone_lookup_path = g.zone_lookup;
    if (!g.bias.empty()) cfg.bias_path = g.bias;
    if (g.seed_set) cfg.master_seed = g.seed;
    if (g.threads > 0) cfg.threads = g.threads;
    cfg.sync_derived();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Location-ping data quality metrics and resampling-based bias assessment"};
    app.set_version_flag("--version", lbsqa::kVersion);
    app.require_subcommand(1);
    app.fallthrough(true);  // global flags may follow the subcommand

    GlobalFlags g;
    app.add_option("--config", g.config_path, "JSON config file (or a pipeline run manifest)");
    app.add_option("--out-dir", g.out_dir, "Output directory (overrides config)");
    auto* seed_opt = app.add_option("--seed", g.seed, "Master seed (overrides config)");
    app.add_option("--threads", g.threads, "Worker threads (overrides config)");
    app.add_option("--pings", g.pings, "Input ping file (overrides config input.pings)");
    app.add_option("--zones", g.zones, "Zone profile file");
    app.add_option("--zone-lookup", g.zone_lookup, "Cell-to-zone lookup file");
    app.add_option("--bias", g.bias, "Bias table input for regress");

    app.add_subcommand("synth", "Generate a synthetic corpus with known stay counts");
    app.add_subcommand("quality", "Per-user-day quality metrics table");
    app.add_subcommand("qualify", "Evaluate quality criteria per day and report rates");
    app.add_subcommand("segment", "Demographic segment summaries with rank-test significance");
    app.add_subcommand("bias", "Resample ground-truth days and tabulate stay-count bias");
    app.add_subcommand("regress", "Fit bias models with cluster-robust standard errors");
    app.add_subcommand("pipeline", "Run every stage end to end and write a run manifest");

    CLI11_PARSE(app, argc, argv);
    g.seed_set = seed_opt->count() > 0;

    lbsqa::PipelineConfig cfg;
    try {
        cfg = resolve(g);
    } catch (const lbsqa::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return lbsqa::kExitConfigError;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "synth") return lbsqa::cli::cmd_synth(cfg);
    if (sub == "quality") return lbsqa::cli::cmd_quality(cfg);
    if (sub == "qualify") return lbsqa::cli::cmd_qualify(cfg);
    if (sub == "segment") return lbsqa::cli::cmd_segment(cfg);
    if (sub == "bias") return lbsqa::cli::cmd_bias(cfg);
    if (sub == "regress") return lbsqa::cli::cmd_regress(cfg);
    if (sub == "pipeline") return lbsqa::cli::cmd_pipeline(cfg);
    return lbsqa::kExitConfigError;
}
