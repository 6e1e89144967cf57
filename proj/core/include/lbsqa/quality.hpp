#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lbsqa/types.hpp"

namespace lbsqa {

/// The five per-day data quality metrics.
struct QualityMetrics {
    std::int64_t n_observations = 0;
    int temporal_occupancy = 0;        // distinct 30-min slots, 0..48
    double max_record_gap_min = 1440.0;
    double pct_high_accuracy = 0.0;    // share of records with accuracy < 100 m
    std::optional<double> burstiness;  // in [-1, 1]; missing when undefined
    bool empty_day = false;            // pct_high_accuracy reported as 0 for a 0-ping day
};

std::int64_t n_observations(const UserDay& day);

/// Count of distinct half-open 30-minute local slots containing a ping.
int temporal_occupancy(const UserDay& day);

/// Largest gap between consecutive records, minutes. Days with fewer than
/// two pings report the full day (1440).
double max_record_gap(const UserDay& day);

/// 100 * |{accuracy present and strictly < 100 m}| / n. Missing accuracy
/// counts as not-high-accuracy. Throws InsufficientDataError on an empty day.
double pct_high_accuracy(const UserDay& day);

/// (sigma - mu) / (sigma + mu) over inter-record intervals in minutes, with
/// population sigma. Missing when there are fewer than 2 intervals or mu = 0.
/// Constant intervals give exactly -1.
std::optional<double> burstiness(const UserDay& day);

/// Bundles all five metrics. An empty day reports pct_high_accuracy = 0 with
/// empty_day set instead of failing, so corpus-level aggregation stays total.
QualityMetrics metrics_vector(const UserDay& day);

/// One metrics row keyed by its user-day, as exported to delimited text.
struct DayMetricsRow {
    std::string user_id;
    LocalDate day_id;
    QualityMetrics metrics;
};

std::vector<DayMetricsRow> corpus_metrics(const Corpus& corpus, int threads = 1);

/// Columns: user_id, day_id, n_obs, temporal_occupancy, max_gap_min,
/// pct_high_acc, burstiness (blank when missing).
void write_metrics_csv(const std::vector<DayMetricsRow>& rows, const std::string& path);

std::vector<DayMetricsRow> read_metrics_csv(const std::string& path);

}  // namespace lbsqa
