#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lbsqa/types.hpp"

namespace lbsqa {

/// Detection parameters. gap_split_min is the silence threshold: a stay may
/// not span an inter-ping gap longer than this.
struct StayParams {
    double roaming_radius_m = 100.0;
    double min_stay_min = 20.0;
    double gap_split_min = 30.0;
};

struct StayPoint {
    double centroid_lat = 0.0;
    double centroid_lon = 0.0;
    std::int64_t start_ts = 0;  // first member ping
    std::int64_t end_ts = 0;    // last member ping
    std::int64_t n_pings = 0;

    double dwell_min() const { return static_cast<double>(end_ts - start_ts) / 60.0; }
};

/// Great-circle distance in meters (Earth radius 6,371,000 m).
double haversine_m(double lat_a, double lon_a, double lat_b, double lon_b);

/// Gap-aware sequential detection: anchor at a ping, extend while subsequent
/// pings stay within roaming_radius_m of the anchor and no consecutive gap
/// exceeds gap_split_min; emit when the first-to-last dwell reaches
/// min_stay_min. Scanning resumes at the first ping outside the candidate,
/// emitted or not. Output is ordered by start_ts and time-disjoint.
std::vector<StayPoint> detect_stays(const UserDay& day, const StayParams& params);

std::int64_t count_stays(const UserDay& day, const StayParams& params);

struct StayRow {
    std::string user_id;
    LocalDate day_id;
    std::vector<StayPoint> stays;
};

/// Columns: user_id, day_id, stay_idx, centroid_lat, centroid_lon,
/// start_ts, end_ts, n_pings.
void write_stays_csv(const std::vector<StayRow>& rows, const std::string& path);

}  // namespace lbsqa
