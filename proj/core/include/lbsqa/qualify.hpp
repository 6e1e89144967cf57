#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lbsqa/quality.hpp"
#include "lbsqa/types.hpp"

namespace lbsqa {

/// A day-quality threshold triple. The three stock criteria are nested
/// strict -> lenient.
struct Criterion {
    int min_temporal_occupancy = 0;
    double max_gap_min = 1440.0;
    std::int64_t min_records = 0;
    std::string label = "custom";

    static Criterion c1_strict() { return {40, 40.0, 300, "C1_strict"}; }
    static Criterion c2_medium() { return {20, 120.0, 100, "C2_medium"}; }
    static Criterion c3_lenient() { return {10, 480.0, 20, "C3_lenient"}; }
    static std::vector<Criterion> standard() {
        return {c1_strict(), c2_medium(), c3_lenient()};
    }
};

/// All thresholds inclusive.
bool evaluate_criterion(const QualityMetrics& m, const Criterion& c);

/// Demographic attributes of one spatial zone.
struct ZoneProfile {
    std::string zone_id;
    std::int64_t population = 0;
    std::optional<double> median_income;
    std::optional<double> pct_bachelor_plus;
    std::optional<std::map<std::string, double>> race_shares;  // label -> percent
};

/// Grid cell key at a fixed cell size; lexicographic order on (lat, lon).
struct CellKey {
    std::int64_t lat_idx = 0;
    std::int64_t lon_idx = 0;
    auto operator<=>(const CellKey&) const = default;
};

using ZoneLookup = std::map<CellKey, std::string>;

CellKey cell_of(double lat, double lon, double cell_deg);

/// Modal nighttime (local 22:00-07:00) grid cell mapped through the zone
/// lookup. Ties go to the lexicographically smallest cell key. Missing when
/// the user has no nighttime pings or the modal cell maps to no zone.
std::optional<std::string> infer_home_zone(std::span<const Ping> user_pings, int tz_offset_minutes,
                                           double cell_deg, const ZoneLookup& lookup);

enum class ZoneAttribute { kMedianIncome, kPctBachelorPlus };

/// Ascending quintiles Q1..Q5 over the chosen attribute. Zones missing the
/// attribute are excluded; remainder r gives the first r groups one extra
/// zone; equal values tie-break by zone_id. Throws InsufficientDataError
/// when fewer than 5 zones are eligible.
std::map<std::string, std::string> quintile_segments(const std::vector<ZoneProfile>& zones,
                                                     ZoneAttribute attribute);

struct RaceSegmentation {
    std::map<std::string, std::string> label_by_zone;  // White/Black/Asian/Hispanic/Mixed
    std::vector<std::string> excluded_zones;           // missing race_shares
};

/// A zone gets a race label iff that share strictly exceeds 50%; else Mixed.
RaceSegmentation majority_race_segments(const std::vector<ZoneProfile>& zones);

struct SegmentSummary {
    std::string segment_label;
    std::size_t n_zones = 0;
    std::int64_t total_population = 0;
    double sampling_rate_pct = 0.0;
    std::map<std::string, double> qualified_rate_pct;                    // criterion label -> pct
    std::map<std::string, std::pair<double, double>> significance_vs_base;  // label -> (U, p)
    bool no_users = false;
};

/// Percentage helper shared by all rate computations: 100 * num / den.
double rate_pct(std::uint64_t numerator, std::uint64_t denominator);

SegmentSummary group_summary(const std::string& segment_label,
                             const std::set<std::string>& segment_zones,
                             const std::map<std::string, std::string>& home_zone_by_user,
                             const std::vector<DayMetricsRow>& day_metrics,
                             const std::map<std::string, ZoneProfile>& profiles,
                             const std::vector<Criterion>& criteria);

/// Per-zone qualified rates (for zones with at least one user-day), the
/// within-segment samples the rank test runs on.
std::map<std::string, double> per_zone_qualified_rates(
    const std::set<std::string>& segment_zones,
    const std::map<std::string, std::string>& home_zone_by_user,
    const std::vector<DayMetricsRow>& day_metrics, const Criterion& criterion);

/// Per-zone sampling rates (users homed in zone / zone population) for zones
/// with nonzero population.
std::map<std::string, double> per_zone_sampling_rates(
    const std::set<std::string>& segment_zones,
    const std::map<std::string, std::string>& home_zone_by_user,
    const std::map<std::string, ZoneProfile>& profiles);

struct GroupComparison {
    double u_base = 0.0;
    double z = 0.0;
    double p_two_sided = 1.0;
};

/// Mann-Whitney U of base vs other per-zone values; U reported for the base
/// sample.
GroupComparison compare_groups(std::span<const double> base_values,
                               std::span<const double> other_values);

// --- zone fixture file I/O ---

/// Columns: zone_id, population, median_income, pct_bachelor_plus,
/// pct_white, pct_black, pct_asian, pct_hispanic (optionals blank).
std::vector<ZoneProfile> read_zone_profiles_csv(const std::string& path);
void write_zone_profiles_csv(const std::vector<ZoneProfile>& zones, const std::string& path);

/// Columns: cell_lat_idx, cell_lon_idx, zone_id.
ZoneLookup read_zone_lookup_csv(const std::string& path);
void write_zone_lookup_csv(const ZoneLookup& lookup, const std::string& path);

}  // namespace lbsqa
