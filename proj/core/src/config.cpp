#include "lbsqa/config.hpp"

#include <fstream>

#include <json.hpp>

#include "lbsqa/errors.hpp"

namespace lbsqa {

using nlohmann::json;

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

Criterion criterion_from_json(const json& j) {
    Criterion c;
    maybe(j, "label", c.label);
    maybe(j, "min_temporal_occupancy", c.min_temporal_occupancy);
    maybe(j, "max_gap_min", c.max_gap_min);
    maybe(j, "min_records", c.min_records);
    if (c.min_temporal_occupancy < 0 || c.min_temporal_occupancy > 48 || c.max_gap_min < 0 ||
        c.min_records < 0)
        throw ConfigError("criterion '" + c.label + "' has out-of-range thresholds");
    return c;
}

json criterion_to_json(const Criterion& c) {
    return json{{"label", c.label},
                {"min_temporal_occupancy", c.min_temporal_occupancy},
                {"max_gap_min", c.max_gap_min},
                {"min_records", c.min_records}};
}

void apply_json(PipelineConfig& cfg, const json& j) {
    if (j.contains("input")) {
        const json& in = j.at("input");
        maybe(in, "pings", cfg.pings_path);
        maybe(in, "zones", cfg.zones_path);
        maybe(in, "zone_lookup", cfg.zone_lookup_path);
        maybe(in, "truth", cfg.truth_path);
        maybe(in, "bias", cfg.bias_path);
    }
    maybe(j, "tz_offset_minutes", cfg.tz_offset_minutes);
    if (j.contains("columns")) {
        const json& c = j.at("columns");
        maybe(c, "user_id", cfg.columns.user_id);
        maybe(c, "timestamp", cfg.columns.timestamp);
        maybe(c, "lat", cfg.columns.lat);
        maybe(c, "lon", cfg.columns.lon);
        maybe(c, "accuracy_m", cfg.columns.accuracy_m);
    }
    if (j.contains("on_bad_record")) {
        const std::string v = j.at("on_bad_record").get<std::string>();
        if (v == "skip") cfg.on_bad_record = OnBadRecord::kSkip;
        else if (v == "abort") cfg.on_bad_record = OnBadRecord::kAbort;
        else throw ConfigError("on_bad_record must be 'skip' or 'abort', got '" + v + "'");
    }
    if (j.contains("criteria")) {
        cfg.criteria.clear();
        for (const auto& c : j.at("criteria")) cfg.criteria.push_back(criterion_from_json(c));
        if (cfg.criteria.empty()) throw ConfigError("criteria list is empty");
    }
    if (j.contains("selection")) {
        const json& s = j.at("selection");
        maybe(s, "min_temporal_occupancy", cfg.selection.thresholds.min_temporal_occupancy);
        maybe(s, "max_gap_min", cfg.selection.thresholds.max_gap_min);
        maybe(s, "min_records", cfg.selection.thresholds.min_records);
        maybe(s, "one_day_per_user", cfg.selection.one_day_per_user);
    }
    if (j.contains("stay")) {
        const json& s = j.at("stay");
        maybe(s, "roaming_radius_m", cfg.stay.roaming_radius_m);
        maybe(s, "min_stay_min", cfg.stay.min_stay_min);
        maybe(s, "gap_split_min", cfg.stay.gap_split_min);
        if (cfg.stay.roaming_radius_m <= 0 || cfg.stay.min_stay_min <= 0 ||
            cfg.stay.gap_split_min <= 0)
            throw ConfigError("stay parameters must be strictly positive");
    }
    if (j.contains("resample")) {
        const json& r = j.at("resample");
        maybe(r, "rates", cfg.rates);
        maybe(r, "reps", cfg.reps);
        maybe(r, "master_seed", cfg.master_seed);
        if (cfg.reps < 1) throw ConfigError("resample.reps must be >= 1");
        for (double rate : cfg.rates)
            if (rate <= 0.0 || rate > 100.0)
                throw ConfigError("resample rate out of (0, 100]: " + std::to_string(rate));
    }
    maybe(j, "models", cfg.models);
    for (const auto& m : cfg.models) DesignSpec::by_id(m);  // validate
    if (j.contains("correction")) {
        const std::string v = j.at("correction").get<std::string>();
        if (v == "CR0") cfg.correction = Correction::kCR0;
        else if (v == "CR1") cfg.correction = Correction::kCR1;
        else throw ConfigError("correction must be 'CR0' or 'CR1', got '" + v + "'");
    }
    if (j.contains("synth")) {
        const json& s = j.at("synth");
        maybe(s, "n_users", cfg.synth.n_users);
        maybe(s, "n_degraded_users", cfg.synth.n_degraded_users);
        maybe(s, "with_zones", cfg.synth.with_zones);
        maybe(s, "n_zones", cfg.synth.n_zones);
        maybe(s, "day_spread", cfg.synth.day_spread);
        if (s.contains("first_day"))
            cfg.synth.first_day = LocalDate::parse(s.at("first_day").get<std::string>());
        maybe(s, "min_stays", cfg.synth.schedule.min_stays);
        maybe(s, "max_stays", cfg.synth.schedule.max_stays);
        maybe(s, "min_dwell_min", cfg.synth.schedule.min_dwell_min);
        maybe(s, "center_lat", cfg.synth.schedule.center_lat);
        maybe(s, "center_lon", cfg.synth.schedule.center_lon);
        maybe(s, "extent_deg", cfg.synth.schedule.extent_deg);
        maybe(s, "separation_m", cfg.synth.schedule.separation_m);
        maybe(s, "speed_mps", cfg.synth.schedule.speed_mps);
        maybe(s, "cadence_s", cfg.synth.emission.cadence_s);
        maybe(s, "hq_cadence_min_s", cfg.synth.hq_cadence_min_s);
        maybe(s, "hq_cadence_max_s", cfg.synth.hq_cadence_max_s);
        maybe(s, "cadence_jitter_pct", cfg.synth.emission.cadence_jitter_pct);
        maybe(s, "accuracy_median_m", cfg.synth.emission.accuracy_median_m);
        maybe(s, "high_accuracy_share", cfg.synth.emission.high_accuracy_share);
        maybe(s, "noise_sigma_m", cfg.synth.emission.noise_sigma_m);
        if (cfg.synth.n_users < 1) throw ConfigError("synth.n_users must be >= 1");
    }
    if (j.contains("segmentation")) {
        maybe(j.at("segmentation"), "cell_deg", cfg.cell_deg);
        if (cfg.cell_deg <= 0.0) throw ConfigError("segmentation.cell_deg must be positive");
    }
    maybe(j, "out_dir", cfg.out_dir);
    maybe(j, "threads", cfg.threads);
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
}

}  // namespace

void PipelineConfig::sync_derived() {
    synth.master_seed = master_seed;
    synth.tz_offset_minutes = tz_offset_minutes;
    synth.schedule.truth_min_stay_min = stay.min_stay_min;
    synth.cell_deg = cell_deg;
}

PipelineConfig default_config() {
    PipelineConfig cfg;
    cfg.sync_derived();
    return cfg;
}

PipelineConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    if (j.contains("config") && j.contains("tool")) j = j.at("config");  // run manifest

    PipelineConfig cfg;
    try {
        apply_json(cfg, j);
    } catch (const json::exception& e) {
        throw ConfigError("config error in " + path + ": " + e.what());
    }
    cfg.sync_derived();
    return cfg;
}

std::string config_to_json_string(const PipelineConfig& cfg) {
    json j;
    j["input"] = {{"pings", cfg.pings_path},
                  {"zones", cfg.zones_path},
                  {"zone_lookup", cfg.zone_lookup_path},
                  {"truth", cfg.truth_path},
                  {"bias", cfg.bias_path}};
    j["tz_offset_minutes"] = cfg.tz_offset_minutes;
    j["columns"] = {{"user_id", cfg.columns.user_id},
                    {"timestamp", cfg.columns.timestamp},
                    {"lat", cfg.columns.lat},
                    {"lon", cfg.columns.lon},
                    {"accuracy_m", cfg.columns.accuracy_m}};
    j["on_bad_record"] = cfg.on_bad_record == OnBadRecord::kSkip ? "skip" : "abort";
    j["criteria"] = json::array();
    for (const auto& c : cfg.criteria) j["criteria"].push_back(criterion_to_json(c));
    j["selection"] = {{"min_temporal_occupancy", cfg.selection.thresholds.min_temporal_occupancy},
                      {"max_gap_min", cfg.selection.thresholds.max_gap_min},
                      {"min_records", cfg.selection.thresholds.min_records},
                      {"one_day_per_user", cfg.selection.one_day_per_user}};
    j["stay"] = {{"roaming_radius_m", cfg.stay.roaming_radius_m},
                 {"min_stay_min", cfg.stay.min_stay_min},
                 {"gap_split_min", cfg.stay.gap_split_min}};
    j["resample"] = {{"rates", cfg.rates}, {"reps", cfg.reps}, {"master_seed", cfg.master_seed}};
    j["models"] = cfg.models;
    j["correction"] = correction_name(cfg.correction);
    j["synth"] = {{"n_users", cfg.synth.n_users},
                  {"n_degraded_users", cfg.synth.n_degraded_users},
                  {"with_zones", cfg.synth.with_zones},
                  {"n_zones", cfg.synth.n_zones},
                  {"first_day", cfg.synth.first_day.iso()},
                  {"day_spread", cfg.synth.day_spread},
                  {"min_stays", cfg.synth.schedule.min_stays},
                  {"max_stays", cfg.synth.schedule.max_stays},
                  {"min_dwell_min", cfg.synth.schedule.min_dwell_min},
                  {"center_lat", cfg.synth.schedule.center_lat},
                  {"center_lon", cfg.synth.schedule.center_lon},
                  {"extent_deg", cfg.synth.schedule.extent_deg},
                  {"separation_m", cfg.synth.schedule.separation_m},
                  {"speed_mps", cfg.synth.schedule.speed_mps},
                  {"cadence_s", cfg.synth.emission.cadence_s},
                  {"hq_cadence_min_s", cfg.synth.hq_cadence_min_s},
                  {"hq_cadence_max_s", cfg.synth.hq_cadence_max_s},
                  {"cadence_jitter_pct", cfg.synth.emission.cadence_jitter_pct},
                  {"accuracy_median_m", cfg.synth.emission.accuracy_median_m},
                  {"high_accuracy_share", cfg.synth.emission.high_accuracy_share},
                  {"noise_sigma_m", cfg.synth.emission.noise_sigma_m}};
    j["segmentation"] = {{"cell_deg", cfg.cell_deg}};
    j["out_dir"] = cfg.out_dir;
    j["threads"] = cfg.threads;
    return j.dump(2);
}

}  // namespace lbsqa
