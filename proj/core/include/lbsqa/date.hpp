#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace lbsqa {

/// A local calendar date, stored as days since 1970-01-01 in the local
/// (fixed-offset) calendar. Proleptic Gregorian.
struct LocalDate {
    std::int64_t days_since_epoch = 0;

    auto operator<=>(const LocalDate&) const = default;

    std::string iso() const;  // "YYYY-MM-DD"
    static LocalDate from_civil(int year, unsigned month, unsigned day);
    static LocalDate parse(const std::string& iso);  // throws ParseError-free std::invalid_argument
};

/// days since epoch -> (year, month, day)
void civil_from_days(std::int64_t z, int& year, unsigned& month, unsigned& day);

/// (year, month, day) -> days since epoch
std::int64_t days_from_civil(int year, unsigned month, unsigned day);

/// Floor division (toward negative infinity) for day-boundary arithmetic.
inline constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
    return a - floor_div(a, b) * b;
}

constexpr std::int64_t kSecondsPerDay = 86400;

/// Local day index of a UTC timestamp under a fixed offset.
inline constexpr std::int64_t local_day_index(std::int64_t utc_ts, int tz_offset_minutes) {
    return floor_div(utc_ts + static_cast<std::int64_t>(tz_offset_minutes) * 60, kSecondsPerDay);
}

/// UTC timestamp of local midnight for a given local day index.
inline constexpr std::int64_t day_start_utc(std::int64_t day_index, int tz_offset_minutes) {
    return day_index * kSecondsPerDay - static_cast<std::int64_t>(tz_offset_minutes) * 60;
}

}  // namespace lbsqa
