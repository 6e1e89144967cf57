#include "lbsqa/staypoints.hpp"

#include <cmath>

#include "lbsqa/csv.hpp"

namespace lbsqa {

namespace {
constexpr double kEarthRadiusM = 6371000.0;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}  // namespace

double haversine_m(double lat_a, double lon_a, double lat_b, double lon_b) {
    const double phi_a = lat_a * kDegToRad;
    const double phi_b = lat_b * kDegToRad;
    const double dphi = (lat_b - lat_a) * kDegToRad;
    const double dlambda = (lon_b - lon_a) * kDegToRad;
    const double sin_dphi = std::sin(dphi / 2.0);
    const double sin_dlambda = std::sin(dlambda / 2.0);
    double a = sin_dphi * sin_dphi + std::cos(phi_a) * std::cos(phi_b) * sin_dlambda * sin_dlambda;
    if (a < 0.0) a = 0.0;
    if (a > 1.0) a = 1.0;
    return kEarthRadiusM * 2.0 * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
}

std::vector<StayPoint> detect_stays(const UserDay& day, const StayParams& params) {
    std::vector<StayPoint> stays;
    const auto& pings = day.pings;
    const std::size_t n = pings.size();
    const std::int64_t gap_limit_s = static_cast<std::int64_t>(params.gap_split_min * 60.0);

    std::size_t i = 0;
    while (i < n) {
        const Ping& anchor = pings[i];
        std::size_t j = i + 1;
        while (j < n) {
            if (pings[j].timestamp - pings[j - 1].timestamp > gap_limit_s) break;
            if (haversine_m(anchor.lat, anchor.lon, pings[j].lat, pings[j].lon) >
                params.roaming_radius_m)
                break;
            ++j;
        }
        // candidate is pings[i, j)
        const std::size_t last = j - 1;
        const double dwell_min =
            static_cast<double>(pings[last].timestamp - anchor.timestamp) / 60.0;
        if (dwell_min >= params.min_stay_min) {
            StayPoint s;
            s.start_ts = anchor.timestamp;
            s.end_ts = pings[last].timestamp;
            s.n_pings = static_cast<std::int64_t>(j - i);
            double lat_sum = 0.0, lon_sum = 0.0;
            for (std::size_t k = i; k < j; ++k) {
                lat_sum += pings[k].lat;
                lon_sum += pings[k].lon;
            }
            s.centroid_lat = lat_sum / static_cast<double>(s.n_pings);
            s.centroid_lon = lon_sum / static_cast<double>(s.n_pings);
            stays.push_back(s);
        }
        i = j;
    }
    return stays;
}

std::int64_t count_stays(const UserDay& day, const StayParams& params) {
    return static_cast<std::int64_t>(detect_stays(day, params).size());
}

void write_stays_csv(const std::vector<StayRow>& rows, const std::string& path) {
    csv::Writer w(path);
    w.header({"user_id", "day_id", "stay_idx", "centroid_lat", "centroid_lon", "start_ts", "end_ts",
              "n_pings"});
    for (const auto& r : rows) {
        for (std::size_t idx = 0; idx < r.stays.size(); ++idx) {
            const auto& s = r.stays[idx];
            w.field(r.user_id);
            w.field(r.day_id.iso());
            w.field(idx);
            w.field(s.centroid_lat, 7);
            w.field(s.centroid_lon, 7);
            w.field(s.start_ts);
            w.field(s.end_ts);
            w.field(s.n_pings);
            w.end_row();
        }
    }
}

}  // namespace lbsqa
