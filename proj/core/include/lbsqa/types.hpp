#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lbsqa/date.hpp"

namespace lbsqa {

/// One timestamped location record.
struct Ping {
    std::string user_id;
    std::int64_t timestamp = 0;  // UTC epoch seconds
    double lat = 0.0;            // degrees, [-90, 90]
    double lon = 0.0;            // degrees, [-180, 180]
    std::optional<double> accuracy_m;  // radius, >= 0 when present

    bool operator==(const Ping&) const = default;
};

/// All pings from one user within one local calendar day, sorted strictly
/// ascending by timestamp with exact duplicate timestamps collapsed.
struct UserDay {
    std::string user_id;
    LocalDate day_id;
    std::int64_t day_start_utc = 0;  // UTC epoch seconds of local midnight
    std::vector<Ping> pings;

    double minutes_since_midnight(const Ping& p) const {
        return static_cast<double>(p.timestamp - day_start_utc) / 60.0;
    }

    /// Key used as the regression cluster identifier and in bias exports.
    std::string key() const { return user_id + ":" + day_id.iso(); }
};

/// A validated set of user-days under one fixed UTC offset.
/// (user_id, day_id) pairs are unique; user_days sorted by (user_id, day_id).
struct Corpus {
    std::vector<UserDay> user_days;
    int tz_offset_minutes = 0;
    std::vector<std::string> provenance;
};

}  // namespace lbsqa
