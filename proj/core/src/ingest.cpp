#include "lbsqa/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_map>
#include <utility>

#include "lbsqa/csv.hpp"
#include "lbsqa/errors.hpp"

namespace lbsqa {

namespace {

bool parse_double(std::string_view s, double& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

bool parse_int64(std::string_view s, std::int64_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

// YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|+HH:MM|-HH:MM|+HHMM]; zone defaults to UTC.
bool parse_iso8601(std::string_view s, std::int64_t& out) {
    int y, h, mi, sec;
    unsigned mo, d;
    int n = 0;
    std::string buf(s);
    if (std::sscanf(buf.c_str(), "%d-%u-%uT%d:%d:%d%n", &y, &mo, &d, &h, &mi, &sec, &n) != 6 &&
        std::sscanf(buf.c_str(), "%d-%u-%u %d:%d:%d%n", &y, &mo, &d, &h, &mi, &sec, &n) != 6)
        return false;
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec > 60)
        return false;
    std::string_view rest = s.substr(static_cast<std::size_t>(n));
    if (!rest.empty() && rest.front() == '.') {  // fractional seconds: truncate
        rest.remove_prefix(1);
        while (!rest.empty() && std::isdigit(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
    }
    std::int64_t zone_s = 0;
    if (!rest.empty()) {
        if (rest == "Z") {
            zone_s = 0;
        } else if (rest.front() == '+' || rest.front() == '-') {
            int zh = 0, zm = 0;
            std::string zbuf(rest.substr(1));
            if (std::sscanf(zbuf.c_str(), "%d:%d", &zh, &zm) == 2 ||
                (zbuf.size() == 4 && std::sscanf(zbuf.c_str(), "%2d%2d", &zh, &zm) == 2)) {
                zone_s = (static_cast<std::int64_t>(zh) * 60 + zm) * 60;
                if (rest.front() == '-') zone_s = -zone_s;
            } else {
                return false;
            }
        } else {
            return false;
        }
    }
    out = days_from_civil(y, mo, d) * kSecondsPerDay + h * 3600 + mi * 60 + sec - zone_s;
    return true;
}

}  // namespace

int ColumnMap::max_required() const {
    return std::max({user_id, timestamp, lat, lon});
}

Ping parse_ping_record(std::string_view line, const ColumnMap& schema, std::size_t line_no) {
    auto fields = csv::split(csv::trim(line));
    const int needed = schema.max_required();
    if (static_cast<int>(fields.size()) <= needed)
        throw ParseError("record has " + std::to_string(fields.size()) + " fields, need at least " +
                             std::to_string(needed + 1),
                         line_no);

    Ping p;
    p.user_id = std::string(csv::trim(fields[static_cast<std::size_t>(schema.user_id)]));
    if (p.user_id.empty()) throw ParseError("empty user_id", line_no);

    const auto ts_field = csv::trim(fields[static_cast<std::size_t>(schema.timestamp)]);
    if (!parse_int64(ts_field, p.timestamp) && !parse_iso8601(ts_field, p.timestamp))
        throw ParseError("unparseable timestamp '" + std::string(ts_field) + "'", line_no);

    if (!parse_double(csv::trim(fields[static_cast<std::size_t>(schema.lat)]), p.lat))
        throw ParseError("malformed latitude", line_no);
    if (!parse_double(csv::trim(fields[static_cast<std::size_t>(schema.lon)]), p.lon))
        throw ParseError("malformed longitude", line_no);
    if (p.lat < -90.0 || p.lat > 90.0) throw ParseError("latitude out of range", line_no);
    if (p.lon < -180.0 || p.lon > 180.0) throw ParseError("longitude out of range", line_no);

    if (schema.accuracy_m >= 0 && static_cast<std::size_t>(schema.accuracy_m) < fields.size()) {
        const auto acc = csv::trim(fields[static_cast<std::size_t>(schema.accuracy_m)]);
        if (!acc.empty()) {
            double a;
            if (!parse_double(acc, a)) throw ParseError("malformed accuracy", line_no);
            if (a < 0.0) throw ParseError("negative accuracy", line_no);
            p.accuracy_m = a;
        }
    }
    return p;
}

std::string serialize_ping(const Ping& p) {
    char buf[160];
    if (p.accuracy_m) {
        std::snprintf(buf, sizeof(buf), "%s,%lld,%.6f,%.6f,%.1f", p.user_id.c_str(),
                      static_cast<long long>(p.timestamp), p.lat, p.lon, *p.accuracy_m);
    } else {
        std::snprintf(buf, sizeof(buf), "%s,%lld,%.6f,%.6f,", p.user_id.c_str(),
                      static_cast<long long>(p.timestamp), p.lat, p.lon);
    }
    return buf;
}

IngestResult read_pings_csv(const std::string& path, const ColumnMap& schema, OnBadRecord on_bad) {
    IngestResult result;
    csv::for_each_row(path, [&](const std::vector<std::string_view>& fields, std::size_t line_no) {
        ++result.total_records;
        std::string joined;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) joined += ',';
            joined += fields[i];
        }
        try {
            result.pings.push_back(parse_ping_record(joined, schema, line_no));
        } catch (const ParseError&) {
            if (on_bad == OnBadRecord::kAbort) throw;
            ++result.skipped_records;
        }
    });
    return result;
}

std::vector<UserDay> partition_user_days(std::span<const Ping> pings, int tz_offset_minutes) {
    // first-seen wins for duplicate (user, timestamp)
    std::map<std::pair<std::string, std::int64_t>, std::map<std::int64_t, Ping>> by_user_day;
    for (const Ping& p : pings) {
        const std::int64_t day = local_day_index(p.timestamp, tz_offset_minutes);
        auto& slot = by_user_day[{p.user_id, day}];
        slot.emplace(p.timestamp, p);
    }

    std::vector<UserDay> out;
    out.reserve(by_user_day.size());
    for (auto& [key, ts_map] : by_user_day) {
        UserDay d;
        d.user_id = key.first;
        d.day_id = LocalDate{key.second};
        d.day_start_utc = day_start_utc(key.second, tz_offset_minutes);
        d.pings.reserve(ts_map.size());
        for (auto& [ts, p] : ts_map) d.pings.push_back(std::move(p));
        out.push_back(std::move(d));
    }
    return out;  // map iteration order is already (user_id, day_id)
}

const UserDay& validate_user_day(const UserDay& day) {
    const std::int64_t day_end = day.day_start_utc + kSecondsPerDay;
    for (std::size_t i = 0; i < day.pings.size(); ++i) {
        const auto& p = day.pings[i];
        if (p.timestamp < day.day_start_utc || p.timestamp >= day_end)
            throw ValidationError("user-day " + day.key() + ": ping outside the local day window");
        if (i > 0) {
            if (p.timestamp == day.pings[i - 1].timestamp)
                throw ValidationError("user-day " + day.key() + ": duplicate timestamp " +
                                      std::to_string(p.timestamp));
            if (p.timestamp < day.pings[i - 1].timestamp)
                throw ValidationError("user-day " + day.key() + ": pings not sorted ascending");
        }
    }
    return day;
}

Corpus build_corpus(std::vector<Ping> pings, int tz_offset_minutes, std::vector<std::string> provenance) {
    Corpus c;
    c.tz_offset_minutes = tz_offset_minutes;
    c.provenance = std::move(provenance);
    c.user_days = partition_user_days(pings, tz_offset_minutes);
    for (const auto& d : c.user_days) validate_user_day(d);
    return c;
}

void write_pings_csv(const Corpus& corpus, const std::string& path) {
    csv::Writer w(path);
    w.header({"user_id", "timestamp", "lat", "lon", "accuracy_m"});
    for (const auto& day : corpus.user_days)
        for (const auto& p : day.pings) {
            w.raw(serialize_ping(p));
            w.raw("\n");
        }
}

}  // namespace lbsqa
