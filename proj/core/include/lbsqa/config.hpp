#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lbsqa/ingest.hpp"
#include "lbsqa/qualify.hpp"
#include "lbsqa/regress.hpp"
#include "lbsqa/resample.hpp"
#include "lbsqa/staypoints.hpp"
#include "lbsqa/synthgen.hpp"

namespace lbsqa {

/// Fully resolved run configuration. A config file (JSON) overrides the
/// defaults; CLI flags override the file.
struct PipelineConfig {
    // input files; empty string = not provided
    std::string pings_path;
    std::string zones_path;
    std::string zone_lookup_path;
    std::string truth_path;
    std::string bias_path;

    int tz_offset_minutes = 0;
    ColumnMap columns;
    OnBadRecord on_bad_record = OnBadRecord::kSkip;

    std::vector<Criterion> criteria = Criterion::standard();
    SelectionCriterion selection;
    StayParams stay;

    std::vector<double> rates = default_rate_grid();
    int reps = 10;
    std::uint64_t master_seed = 20200101;

    std::vector<std::string> models = {"M1", "M2", "M3"};
    Correction correction = Correction::kCR1;

    CorpusConfig synth;  // master_seed / tz mirrored from the top-level keys
    double cell_deg = 0.001;

    std::string out_dir = "out";
    int threads = 1;

    /// Keeps the synth block consistent with the top-level seed/offset.
    void sync_derived();
};

PipelineConfig default_config();

/// Loads a JSON config file. A pipeline manifest (object with a "config"
/// key written by this tool) is accepted too and unwrapped.
PipelineConfig load_config_file(const std::string& path);

/// Serialized form used in config echoes and run manifests.
std::string config_to_json_string(const PipelineConfig& cfg);

}  // namespace lbsqa
