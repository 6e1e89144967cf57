#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lbsqa/qualify.hpp"
#include "lbsqa/quality.hpp"
#include "lbsqa/staypoints.hpp"
#include "lbsqa/types.hpp"

namespace lbsqa {

/// Ground-truth day selection thresholds. Occupancy 48 with a 48-slot day
/// makes the occupancy requirement exact.
struct SelectionCriterion {
    Criterion thresholds{48, 20.0, 500, "selection"};
    bool one_day_per_user = true;
};

/// One downsampled variant of a parent day.
struct ResampledDay {
    std::string parent_user_id;
    LocalDate parent_day_id;
    double rate_pct = 0.0;
    int repetition = 0;
    std::uint64_t seed = 0;
    UserDay day;  // pings are a time-ordered subset of the parent's

    std::string parent_key() const { return parent_user_id + ":" + parent_day_id.iso(); }
};

/// Quality metrics of a variant plus its stay-count deviation from truth.
struct BiasRecord {
    std::string parent_day_key;
    double rate_pct = 0.0;
    int repetition = 0;
    QualityMetrics metrics;
    std::int64_t stays_truth = 0;
    std::int64_t stays_resampled = 0;
    std::int64_t bias = 0;  // stays_resampled - stays_truth
};

struct SelectionResult {
    std::vector<UserDay> days;
    bool empty_warning = false;
};

/// Days passing the selection criterion; with one_day_per_user the day with
/// the most pings wins (ties: earliest day_id). Deterministic.
SelectionResult select_ground_truth_days(const Corpus& corpus, const SelectionCriterion& sel);

/// Exact-cardinality uniform sample without replacement:
/// floor(rate_pct / 100 * n) pings, time order preserved, fully determined
/// by the seed. Rates are quantized to 0.001 percentage points.
ResampledDay resample_day(const UserDay& day, double rate_pct, std::uint64_t seed);

std::int64_t resample_count(std::int64_t n, double rate_pct);

/// One variant per (day, rate, repetition), seeded per variant from the
/// master seed so output is independent of iteration order.
std::vector<ResampledDay> generate_resample_grid(const std::vector<UserDay>& days,
                                                 const std::vector<double>& rates_pct, int reps,
                                                 std::uint64_t master_seed);

inline std::vector<double> default_rate_grid() {
    return {1, 5, 10, 20, 30, 40, 50, 60, 70, 80, 90};
}

/// Runs detection on both sides and assembles the record. The variant must
/// descend from `truth`.
BiasRecord compute_bias(const UserDay& truth, const ResampledDay& variant, const StayParams& params);

/// Same, with the truth-side stay count precomputed.
BiasRecord compute_bias(std::int64_t stays_truth, const ResampledDay& variant,
                        const StayParams& params);

/// Columns: parent_day_key, rate_pct, repetition, n_obs, temporal_occupancy,
/// max_gap_min, pct_high_acc, burstiness, stays_truth, stays_resampled, bias.
void write_bias_csv(const std::vector<BiasRecord>& records, const std::string& path);

std::vector<BiasRecord> read_bias_csv(const std::string& path);

}  // namespace lbsqa
