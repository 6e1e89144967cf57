#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lbsqa/qualify.hpp"
#include "lbsqa/types.hpp"

namespace lbsqa {

enum class EpisodeKind { kStay, kTravel };

/// One scheduled episode. Episodes tile [0, 1440) minutes. A stay holds one
/// location (lat0 == lat1); a travel interpolates linearly from 0 to 1.
struct Episode {
    EpisodeKind kind = EpisodeKind::kStay;
    double start_min = 0.0;
    double end_min = 0.0;
    double lat0 = 0.0, lon0 = 0.0;
    double lat1 = 0.0, lon1 = 0.0;
};

struct DaySchedule {
    std::string user_id;
    LocalDate day_id;
    std::vector<Episode> episodes;
    int true_stay_count = 0;  // stay episodes with duration >= truth_min_stay_min
};

struct ScheduleConfig {
    int min_stays = 3;
    int max_stays = 10;
    double min_dwell_min = 30.0;
    double center_lat = 42.36;
    double center_lon = -71.06;
    double extent_deg = 0.05;      // side of the square the day roams in
    double separation_m = 250.0;   // consecutive stays; keep > 2x roaming radius
    double speed_mps = 1.4;
    double truth_min_stay_min = 20.0;  // StayParams.min_stay_min used for truth accounting
    /// When set, the first and last stays sit at this location, the first
    /// extending past 07:00 and the last starting before 22:00, so every
    /// nighttime ping is at home. Needs at least 3 stays.
    std::optional<std::pair<double, double>> home;
};

/// Deterministic in the seed. Throws ConfigError if the configuration cannot
/// tile a day (minimum dwell budget exceeds 1440 minutes, or location
/// sampling repeatedly fails the separation/travel-time budget).
DaySchedule generate_schedule(std::uint64_t seed, const ScheduleConfig& config,
                              const std::string& user_id = "u0", LocalDate day_id = {});

struct DropoutWindow {
    double start_min = 0.0;
    double duration_min = 0.0;
};

struct EmissionConfig {
    double cadence_s = 60.0;
    double cadence_jitter_pct = 10.0;
    double accuracy_median_m = 10.0;     // median of the high-accuracy draw
    double high_accuracy_share = 0.95;   // fraction of records with accuracy < 100 m
    double noise_sigma_m = 16.0;         // position noise, truncated at 3 sigma on the norm
    std::vector<DropoutWindow> dropout;  // silent windows, minutes
};

/// Samples pings along the schedule at jittered cadence. Position noise is a
/// 2-D Gaussian truncated at 3 sigma on the norm, so with the default sigma
/// every ping lies within half the default roaming radius of its scheduled
/// location. Coordinates are quantized to 1e-6 degrees, accuracy to 0.1 m.
UserDay emit_pings(const DaySchedule& schedule, const EmissionConfig& emission, std::uint64_t seed,
                   int tz_offset_minutes = 0);

struct TruthRow {
    std::string user_id;
    LocalDate day_id;
    int true_stay_count = 0;
};

struct CorpusConfig {
    int n_users = 132;           // high-quality cohort, one day each
    int n_degraded_users = 0;    // extra cohort with randomized dropout/cadence
    std::uint64_t master_seed = 42;
    int tz_offset_minutes = 0;
    LocalDate first_day = LocalDate::from_civil(2020, 1, 1);
    int day_spread = 59;         // user days staggered over this many dates
    /// Corpus-level default keeps individual dwells bounded (many stays,
    /// long travel legs) so sparse resampling loses stays far more often
    /// than it splits one across a silent gap.
    ScheduleConfig schedule = [] {
        ScheduleConfig s;
        s.min_stays = 9;
        s.max_stays = 13;
        s.extent_deg = 0.12;
        return s;
    }();
    EmissionConfig emission;
    /// Per-user cadence draw for the high-quality cohort; devices report at
    /// different densities while still clearing the selection criterion.
    double hq_cadence_min_s = 40.0;
    double hq_cadence_max_s = 90.0;
    bool with_zones = false;     // also synthesize zone profiles + lookup fixtures
    int n_zones = 25;
    double cell_deg = 0.001;
};

struct SynthOutput {
    Corpus corpus;
    std::vector<TruthRow> truth;
    std::vector<ZoneProfile> zones;  // empty unless with_zones
    ZoneLookup lookup;
    double cell_deg = 0.001;
};

/// Pure function of the config (master_seed included). With zones enabled,
/// schedules are home-anchored inside the user's zone so nighttime home
/// inference is exact by construction.
SynthOutput generate_corpus(const CorpusConfig& config);

void write_truth_csv(const std::vector<TruthRow>& rows, const std::string& path);
std::vector<TruthRow> read_truth_csv(const std::string& path);

}  // namespace lbsqa
