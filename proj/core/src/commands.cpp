#include "lbsqa/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include <json.hpp>

#include "lbsqa/csv.hpp"
#include "lbsqa/errors.hpp"
#include "lbsqa/parallel.hpp"
#include "lbsqa/rng.hpp"
#include "lbsqa/version.hpp"

namespace lbsqa::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string out_path(const PipelineConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

void ensure_out_dir(const PipelineConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir + ": " + ec.message());
}

Corpus load_corpus(const PipelineConfig& cfg, std::size_t* skipped = nullptr) {
    if (cfg.pings_path.empty()) throw ConfigError("no input ping file configured (input.pings)");
    IngestResult res = read_pings_csv(cfg.pings_path, cfg.columns, cfg.on_bad_record);
    if (skipped) *skipped = res.skipped_records;
    if (res.skipped_records > 0)
        std::cerr << "warning: skipped " << res.skipped_records << " of " << res.total_records
                  << " records\n";
    return build_corpus(std::move(res.pings), cfg.tz_offset_minutes, {cfg.pings_path});
}

struct QualifySummary {
    std::uint64_t total_days = 0;
    std::map<std::string, std::uint64_t> passing;  // criterion label -> days

    json to_json(const std::vector<Criterion>& criteria) const {
        json j;
        j["total_days"] = total_days;
        for (const auto& c : criteria) {
            const std::uint64_t pass = passing.count(c.label) ? passing.at(c.label) : 0;
            j[c.label] = {{"days_passing", pass},
                          {"qualified_rate_pct",
                           total_days ? 100.0 * static_cast<double>(pass) / static_cast<double>(total_days)
                                      : 0.0}};
        }
        return j;
    }
};

QualifySummary write_qualification(const PipelineConfig& cfg,
                                   const std::vector<DayMetricsRow>& rows,
                                   const std::string& path) {
    QualifySummary summary;
    csv::Writer w(path);
    std::vector<std::string> header = {"user_id", "day_id"};
    for (const auto& c : cfg.criteria) header.push_back("pass_" + c.label);
    w.header(header);
    for (const auto& r : rows) {
        ++summary.total_days;
        w.field(r.user_id);
        w.field(r.day_id.iso());
        for (const auto& c : cfg.criteria) {
            const bool pass = evaluate_criterion(r.metrics, c);
            if (pass) ++summary.passing[c.label];
            w.field(std::string_view(pass ? "1" : "0"));
        }
        w.end_row();
    }
    return summary;
}

void print_qualify_summary(const PipelineConfig& cfg, const QualifySummary& s) {
    std::printf("user-days: %llu\n", static_cast<unsigned long long>(s.total_days));
    for (const auto& c : cfg.criteria) {
        const std::uint64_t pass = s.passing.count(c.label) ? s.passing.at(c.label) : 0;
        const double rate =
            s.total_days ? 100.0 * static_cast<double>(pass) / static_cast<double>(s.total_days) : 0.0;
        std::printf("%s: %llu days, qualified rate %.4f%%\n", c.label.c_str(),
                    static_cast<unsigned long long>(pass), rate);
    }
}

struct BiasStage {
    std::vector<StayRow> truth_stays;
    std::vector<BiasRecord> records;
    std::size_t n_selected = 0;
};

/// Selection -> resampling grid -> per-variant bias records, ordered by
/// (parent key, rate, repetition).
BiasStage run_bias_stage(const PipelineConfig& cfg, const Corpus& corpus) {
    BiasStage stage;
    SelectionResult sel = select_ground_truth_days(corpus, cfg.selection);
    stage.n_selected = sel.days.size();
    if (sel.days.empty()) return stage;

    std::vector<std::int64_t> truth_counts(sel.days.size());
    stage.truth_stays.resize(sel.days.size());
    parallel_for(sel.days.size(), cfg.threads, [&](std::size_t i) {
        auto stays = detect_stays(sel.days[i], cfg.stay);
        truth_counts[i] = static_cast<std::int64_t>(stays.size());
        stage.truth_stays[i] = StayRow{sel.days[i].user_id, sel.days[i].day_id, std::move(stays)};
    });

    struct Variant {
        std::size_t day_idx;
        double rate;
        int rep;
    };
    std::vector<Variant> variants;
    variants.reserve(sel.days.size() * cfg.rates.size() * static_cast<std::size_t>(cfg.reps));
    for (std::size_t d = 0; d < sel.days.size(); ++d)
        for (double rate : cfg.rates)
            for (int rep = 0; rep < cfg.reps; ++rep) variants.push_back({d, rate, rep});

    stage.records.resize(variants.size());
    parallel_for(variants.size(), cfg.threads, [&](std::size_t i) {
        const Variant& v = variants[i];
        const UserDay& day = sel.days[v.day_idx];
        const std::uint64_t seed =
            derive_variant_seed(cfg.master_seed, day.user_id, day.day_id.days_since_epoch, v.rate, v.rep);
        ResampledDay rd = resample_day(day, v.rate, seed);
        rd.repetition = v.rep;
        stage.records[i] = compute_bias(truth_counts[v.day_idx], rd, cfg.stay);
    });
    return stage;
}

void write_regression_reports(const PipelineConfig& cfg, const std::vector<BiasRecord>& records,
                              const std::string& csv_path, const std::string& json_path,
                              json* stats_out = nullptr) {
    csv::Writer w(csv_path);
    w.header({"model", "term", "coefficient", "clustered_se", "t", "p"});
    json all = json::array();

    for (const auto& model_id : cfg.models) {
        const DesignSpec spec = DesignSpec::by_id(model_id);
        const RegressionResult res = fit_bias_model(records, spec, cfg.correction);

        for (std::size_t i = 0; i < res.terms.size(); ++i) {
            w.field(res.model_id);
            w.field(res.terms[i]);
            w.field_g(res.beta[i]);
            w.field_g(res.se[i]);
            w.field_g(res.t_stats[i]);
            w.field_g(res.p_values[i]);
            w.end_row();
        }
        auto footer = [&](const std::string& term, const std::string& value) {
            w.field(res.model_id);
            w.field(term);
            w.field(value);
            w.field(std::string_view{});
            w.field(std::string_view{});
            w.field(std::string_view{});
            w.end_row();
        };
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", res.r_squared);
        footer("r_squared", buf);
        footer("n", std::to_string(res.n));
        footer("n_clusters", std::to_string(res.n_clusters));
        footer("dropped_rows", std::to_string(res.dropped_rows));
        footer("correction", correction_name(res.correction));

        json jm;
        jm["model"] = res.model_id;
        jm["terms"] = json::array();
        for (std::size_t i = 0; i < res.terms.size(); ++i)
            jm["terms"].push_back({{"term", res.terms[i]},
                                   {"coefficient", res.beta[i]},
                                   {"clustered_se", res.se[i]},
                                   {"t", res.t_stats[i]},
                                   {"p", res.p_values[i]}});
        jm["r_squared"] = res.r_squared;
        jm["n"] = res.n;
        jm["n_clusters"] = res.n_clusters;
        jm["dropped_rows"] = res.dropped_rows;
        jm["correction"] = correction_name(res.correction);
        if (!res.vif.empty()) {
            jm["vif"] = json::object();
            for (std::size_t i = 0; i + 1 < res.terms.size() && i < res.vif.size(); ++i) {
                const double v = res.vif[i];
                jm["vif"][res.terms[i + 1]] = std::isfinite(v) ? json(v) : json("inf");
                if (!std::isfinite(v) || v > 10.0)
                    std::cerr << "warning: " << res.model_id << " regressor " << res.terms[i + 1]
                              << " has VIF "
                              << (std::isfinite(v) ? std::to_string(v) : std::string("inf"))
                              << " (collinearity)\n";
            }
        }
        all.push_back(std::move(jm));

        std::printf("%s: R^2 = %.4f, n = %zu, clusters = %zu, dropped = %zu\n", res.model_id.c_str(),
                    res.r_squared, res.n, res.n_clusters, res.dropped_rows);
    }

    std::ofstream jf(json_path);
    jf << all.dump(2) << "\n";
    if (stats_out) *stats_out = std::move(all);
}

int guard(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const ParseError& e) {
        std::cerr << "ingestion error: " << e.what() << "\n";
        return kExitIngestError;
    } catch (const RankError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const InsufficientDataError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIngestError;
    }
}

}  // namespace

int cmd_synth(const PipelineConfig& cfg) {
    return guard([&] {
        ensure_out_dir(cfg);
        const SynthOutput out = generate_corpus(cfg.synth);
        write_pings_csv(out.corpus, out_path(cfg, "pings.csv"));
        write_truth_csv(out.truth, out_path(cfg, "truth.csv"));
        if (cfg.synth.with_zones) {
            write_zone_profiles_csv(out.zones, out_path(cfg, "zones.csv"));
            write_zone_lookup_csv(out.lookup, out_path(cfg, "zone_lookup.csv"));
        }
        std::size_t pings = 0;
        for (const auto& d : out.corpus.user_days) pings += d.pings.size();
        std::printf("synth: %zu user-days, %zu pings\n", out.corpus.user_days.size(), pings);
        return kExitOk;
    });
}

int cmd_quality(const PipelineConfig& cfg) {
    return guard([&] {
        ensure_out_dir(cfg);
        const Corpus corpus = load_corpus(cfg);
        const auto rows = corpus_metrics(corpus, cfg.threads);
        write_metrics_csv(rows, out_path(cfg, "metrics.csv"));
        if (rows.empty()) std::cerr << "warning: empty corpus, metrics table has no rows\n";
        std::printf("quality: %zu user-day rows\n", rows.size());
        return kExitOk;
    });
}

int cmd_qualify(const PipelineConfig& cfg) {
    return guard([&] {
        ensure_out_dir(cfg);
        const Corpus corpus = load_corpus(cfg);
        const auto rows = corpus_metrics(corpus, cfg.threads);
        const QualifySummary summary =
            write_qualification(cfg, rows, out_path(cfg, "qualification.csv"));
        print_qualify_summary(cfg, summary);
        return kExitOk;
    });
}

int cmd_segment(const PipelineConfig& cfg) {
    return guard([&] {
        ensure_out_dir(cfg);
        if (cfg.zones_path.empty() || cfg.zone_lookup_path.empty())
            throw ConfigError("segment needs input.zones and input.zone_lookup");
        const Corpus corpus = load_corpus(cfg);
        const auto zones = read_zone_profiles_csv(cfg.zones_path);
        const ZoneLookup lookup = read_zone_lookup_csv(cfg.zone_lookup_path);
        const auto metrics = corpus_metrics(corpus, cfg.threads);

        // home zone per user over all of the user's pings
        std::map<std::string, std::vector<Ping>> pings_by_user;
        for (const auto& d : corpus.user_days)
            for (const auto& p : d.pings) pings_by_user[d.user_id].push_back(p);
        std::map<std::string, std::string> home_by_user;
        std::size_t unresolved = 0;
        for (const auto& [user, pings] : pings_by_user) {
            const auto zone =
                infer_home_zone(pings, cfg.tz_offset_minutes, cfg.cell_deg, lookup);
            if (zone) home_by_user[user] = *zone;
            else ++unresolved;
        }
        if (unresolved)
            std::cerr << "warning: " << unresolved << " users without a resolvable home zone\n";

        std::map<std::string, ZoneProfile> profiles;
        for (const auto& z : zones) profiles[z.zone_id] = z;

        struct Scheme {
            std::string name;
            std::map<std::string, std::string> label_by_zone;
            std::string base_label;
        };
        std::vector<Scheme> schemes;
        schemes.push_back({"income", quintile_segments(zones, ZoneAttribute::kMedianIncome), "Q5"});
        schemes.push_back(
            {"education", quintile_segments(zones, ZoneAttribute::kPctBachelorPlus), "Q5"});
        auto race = majority_race_segments(zones);
        if (!race.excluded_zones.empty())
            std::cerr << "warning: " << race.excluded_zones.size()
                      << " zones excluded from race segmentation (missing shares)\n";
        schemes.push_back({"race", std::move(race.label_by_zone), "White"});

        csv::Writer w(out_path(cfg, "segments.csv"));
        std::vector<std::string> header = {"scheme",          "segment",
                                           "n_zones",         "total_population",
                                           "sampling_rate_pct"};
        for (const auto& c : cfg.criteria) header.push_back("qualified_rate_" + c.label + "_pct");
        header.push_back("u_sampling");
        header.push_back("p_sampling");
        for (const auto& c : cfg.criteria) {
            header.push_back("u_" + c.label);
            header.push_back("p_" + c.label);
        }
        w.header(header);

        for (const auto& scheme : schemes) {
            std::map<std::string, std::set<std::string>> zones_by_label;
            for (const auto& [zone, label] : scheme.label_by_zone) zones_by_label[label].insert(zone);
            if (zones_by_label.empty()) continue;
            const bool have_base = zones_by_label.count(scheme.base_label) > 0;

            // per-zone samples for the base group, one vector per statistic
            std::map<std::string, std::vector<double>> base_samples;
            if (have_base && zones_by_label.size() > 1) {
                const auto& base_zones = zones_by_label.at(scheme.base_label);
                for (const auto& [zone, rate] :
                     per_zone_sampling_rates(base_zones, home_by_user, profiles))
                    base_samples["sampling"].push_back(rate);
                for (const auto& c : cfg.criteria)
                    for (const auto& [zone, rate] :
                         per_zone_qualified_rates(base_zones, home_by_user, metrics, c))
                        base_samples[c.label].push_back(rate);
            }

            for (const auto& [label, seg_zones] : zones_by_label) {
                SegmentSummary s = group_summary(label, seg_zones, home_by_user, metrics, profiles,
                                                 cfg.criteria);
                w.field(scheme.name);
                w.field(label);
                w.field(s.n_zones);
                w.field(s.total_population);
                w.field(s.sampling_rate_pct, 4);
                for (const auto& c : cfg.criteria) w.field(s.qualified_rate_pct.at(c.label), 4);

                const bool compare = have_base && label != scheme.base_label &&
                                     zones_by_label.size() > 1 && !base_samples.empty();
                auto emit_comparison = [&](const std::string& key,
                                           const std::vector<double>& other) {
                    const auto it = base_samples.find(key);
                    if (!compare || it == base_samples.end() || it->second.empty() ||
                        other.empty()) {
                        w.field(std::string_view{});
                        w.field(std::string_view{});
                        return;
                    }
                    const GroupComparison c = compare_groups(it->second, other);
                    w.field(c.u_base, 2);
                    w.field_g(c.p_two_sided);
                };

                std::vector<double> other_sampling;
                for (const auto& [zone, rate] :
                     per_zone_sampling_rates(seg_zones, home_by_user, profiles))
                    other_sampling.push_back(rate);
                emit_comparison("sampling", other_sampling);
                for (const auto& c : cfg.criteria) {
                    std::vector<double> other;
                    for (const auto& [zone, rate] :
                         per_zone_qualified_rates(seg_zones, home_by_user, metrics, c))
                        other.push_back(rate);
                    emit_comparison(c.label, other);
                }
                w.end_row();
            }
        }
        std::printf("segment: report written for %zu schemes\n", schemes.size());
        return kExitOk;
    });
}

int cmd_bias(const PipelineConfig& cfg) {
    return guard([&] {
        ensure_out_dir(cfg);
        const Corpus corpus = load_corpus(cfg);
        const BiasStage stage = run_bias_stage(cfg, corpus);
        if (stage.n_selected == 0) {
            std::cerr << "error: no day passes the ground-truth selection criterion\n";
            return kExitEmptySelection;
        }
        write_bias_csv(stage.records, out_path(cfg, "bias.csv"));
        std::printf("bias: %zu ground-truth days, %zu variants\n", stage.n_selected,
                    stage.records.size());
        return kExitOk;
    });
}

int cmd_regress(const PipelineConfig& cfg) {
    return guard([&] {
        ensure_out_dir(cfg);
        const std::string bias_path =
            cfg.bias_path.empty() ? out_path(cfg, "bias.csv") : cfg.bias_path;
        const auto records = read_bias_csv(bias_path);
        write_regression_reports(cfg, records, out_path(cfg, "regression_report.csv"),
                                 out_path(cfg, "regression_report.json"));
        return kExitOk;
    });
}

int cmd_pipeline(const PipelineConfig& cfg) {
    return guard([&] {
        ensure_out_dir(cfg);
        json stats;

        // stage 1: corpus (ingest when a ping file is configured, else synth)
        std::printf("pipeline stage: corpus\n");
        Corpus corpus;
        std::vector<TruthRow> truth;
        if (cfg.pings_path.empty()) {
            SynthOutput synth = generate_corpus(cfg.synth);
            corpus = std::move(synth.corpus);
            truth = std::move(synth.truth);
            write_pings_csv(corpus, out_path(cfg, "pings.csv"));
            write_truth_csv(truth, out_path(cfg, "truth.csv"));
            if (cfg.synth.with_zones) {
                write_zone_profiles_csv(synth.zones, out_path(cfg, "zones.csv"));
                write_zone_lookup_csv(synth.lookup, out_path(cfg, "zone_lookup.csv"));
            }
            stats["synth"] = {{"user_days", corpus.user_days.size()}};
        } else {
            std::size_t skipped = 0;
            corpus = load_corpus(cfg, &skipped);
            write_pings_csv(corpus, out_path(cfg, "pings.csv"));
            stats["ingest"] = {{"user_days", corpus.user_days.size()}, {"skipped_records", skipped}};
            if (!cfg.truth_path.empty()) truth = read_truth_csv(cfg.truth_path);
            write_truth_csv(truth, out_path(cfg, "truth.csv"));
        }

        // stage 2: quality metrics
        std::printf("pipeline stage: quality\n");
        const auto metrics = corpus_metrics(corpus, cfg.threads);
        write_metrics_csv(metrics, out_path(cfg, "metrics.csv"));

        // stage 3: qualification
        std::printf("pipeline stage: qualification\n");
        const QualifySummary qsum =
            write_qualification(cfg, metrics, out_path(cfg, "qualification.csv"));
        print_qualify_summary(cfg, qsum);
        stats["qualification"] = qsum.to_json(cfg.criteria);

        // stages 4-6: selection, truth stays, resampling grid + bias records
        std::printf("pipeline stage: selection+resampling\n");
        const BiasStage stage = run_bias_stage(cfg, corpus);
        if (stage.n_selected == 0) {
            std::cerr << "pipeline stage selection failed: no day passes the ground-truth "
                         "selection criterion\n";
            return kExitEmptySelection;
        }
        write_stays_csv(stage.truth_stays, out_path(cfg, "stays.csv"));
        write_bias_csv(stage.records, out_path(cfg, "bias.csv"));
        stats["selection"] = {{"ground_truth_days", stage.n_selected}};
        stats["bias"] = {{"variants", stage.records.size()}};

        // stage 7: regression runs from the written table, so a staged
        // `regress` over this bias.csv reproduces the same report
        std::printf("pipeline stage: regression\n");
        json regression_stats;
        const auto records = read_bias_csv(out_path(cfg, "bias.csv"));
        write_regression_reports(cfg, records, out_path(cfg, "regression_report.csv"),
                                 out_path(cfg, "regression_report.json"), &regression_stats);
        stats["regression"] = std::move(regression_stats);

        // run manifest: everything needed to reproduce this run
        json manifest;
        manifest["tool"] = "lbsqa";
        manifest["version"] = kVersion;
        manifest["command"] = "pipeline";
        manifest["master_seed"] = cfg.master_seed;
        manifest["config"] = json::parse(config_to_json_string(cfg));
        manifest["artifacts"] = {"pings.csv",  "truth.csv", "metrics.csv",
                                 "qualification.csv", "stays.csv", "bias.csv",
                                 "regression_report.csv"};
        manifest["stats"] = std::move(stats);
        std::ofstream mf(out_path(cfg, "manifest.json"));
        mf << manifest.dump(2) << "\n";

        std::printf("pipeline: complete, artifacts in %s\n", cfg.out_dir.c_str());
        return kExitOk;
    });
}

}  // namespace lbsqa::cli
