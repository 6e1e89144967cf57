#include "lbsqa/qualify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "lbsqa/csv.hpp"
#include "lbsqa/errors.hpp"
#include "lbsqa/regress.hpp"

namespace lbsqa {

bool evaluate_criterion(const QualityMetrics& m, const Criterion& c) {
    return m.temporal_occupancy >= c.min_temporal_occupancy &&
           m.max_record_gap_min <= c.max_gap_min && m.n_observations >= c.min_records;
}

CellKey cell_of(double lat, double lon, double cell_deg) {
    return CellKey{static_cast<std::int64_t>(std::floor(lat / cell_deg)),
                   static_cast<std::int64_t>(std::floor(lon / cell_deg))};
}

std::optional<std::string> infer_home_zone(std::span<const Ping> user_pings, int tz_offset_minutes,
                                           double cell_deg, const ZoneLookup& lookup) {
    if (cell_deg <= 0.0) throw ConfigError("cell_deg must be positive");
    std::map<CellKey, std::int64_t> counts;
    for (const auto& p : user_pings) {
        const std::int64_t local_s = p.timestamp + static_cast<std::int64_t>(tz_offset_minutes) * 60;
        const std::int64_t hour = floor_mod(local_s, kSecondsPerDay) / 3600;
        if (hour >= 22 || hour < 7) ++counts[cell_of(p.lat, p.lon, cell_deg)];
    }
    if (counts.empty()) return std::nullopt;
    // modal cell; ties resolved by map order = smallest cell key
    const CellKey* best = nullptr;
    std::int64_t best_count = 0;
    for (const auto& [cell, count] : counts) {
        if (count > best_count) {
            best = &cell;
            best_count = count;
        }
    }
    const auto it = lookup.find(*best);
    if (it == lookup.end()) return std::nullopt;
    return it->second;
}

std::map<std::string, std::string> quintile_segments(const std::vector<ZoneProfile>& zones,
                                                     ZoneAttribute attribute) {
    std::vector<std::pair<double, std::string>> eligible;
    for (const auto& z : zones) {
        const auto& attr =
            attribute == ZoneAttribute::kMedianIncome ? z.median_income : z.pct_bachelor_plus;
        if (attr) eligible.emplace_back(*attr, z.zone_id);
    }
    if (eligible.size() < 5)
        throw InsufficientDataError("quintile segmentation needs >= 5 zones with the attribute, got " +
                                    std::to_string(eligible.size()));
    std::sort(eligible.begin(), eligible.end());  // (value, zone_id): ties by zone_id

    const std::size_t n = eligible.size();
    const std::size_t base = n / 5;
    const std::size_t remainder = n % 5;
    std::map<std::string, std::string> out;
    std::size_t pos = 0;
    for (std::size_t q = 0; q < 5; ++q) {
        const std::size_t size = base + (q < remainder ? 1 : 0);
        const std::string label = "Q" + std::to_string(q + 1);
        for (std::size_t i = 0; i < size; ++i) out[eligible[pos++].second] = label;
    }
    return out;
}

RaceSegmentation majority_race_segments(const std::vector<ZoneProfile>& zones) {
    RaceSegmentation seg;
    for (const auto& z : zones) {
        if (!z.race_shares) {
            seg.excluded_zones.push_back(z.zone_id);
            continue;
        }
        std::string label = "Mixed";
        for (const auto& [race, share] : *z.race_shares) {
            if (share > 50.0) {  // strict majority
                label = race;
                break;
            }
        }
        seg.label_by_zone[z.zone_id] = label;
    }
    return seg;
}

double rate_pct(std::uint64_t numerator, std::uint64_t denominator) {
    if (denominator == 0) throw InsufficientDataError("rate denominator is zero");
    return 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
}

SegmentSummary group_summary(const std::string& segment_label,
                             const std::set<std::string>& segment_zones,
                             const std::map<std::string, std::string>& home_zone_by_user,
                             const std::vector<DayMetricsRow>& day_metrics,
                             const std::map<std::string, ZoneProfile>& profiles,
                             const std::vector<Criterion>& criteria) {
    if (segment_zones.empty()) throw ContractError("group_summary: empty segment");

    SegmentSummary s;
    s.segment_label = segment_label;
    s.n_zones = segment_zones.size();
    for (const auto& zid : segment_zones) {
        const auto it = profiles.find(zid);
        if (it != profiles.end()) s.total_population += it->second.population;
    }
    if (s.total_population <= 0)
        throw InsufficientDataError("segment " + segment_label + " has zero population");

    std::set<std::string> segment_users;
    for (const auto& [user, zone] : home_zone_by_user)
        if (segment_zones.count(zone)) segment_users.insert(user);

    s.sampling_rate_pct = rate_pct(segment_users.size(),
                                   static_cast<std::uint64_t>(s.total_population));

    std::uint64_t total_days = 0;
    std::vector<std::uint64_t> passing(criteria.size(), 0);
    for (const auto& row : day_metrics) {
        if (!segment_users.count(row.user_id)) continue;
        ++total_days;
        for (std::size_t c = 0; c < criteria.size(); ++c)
            if (evaluate_criterion(row.metrics, criteria[c])) ++passing[c];
    }

    if (total_days == 0) {
        s.no_users = true;
        for (const auto& c : criteria) s.qualified_rate_pct[c.label] = 0.0;
        return s;
    }
    for (std::size_t c = 0; c < criteria.size(); ++c)
        s.qualified_rate_pct[criteria[c].label] = rate_pct(passing[c], total_days);
    return s;
}

std::map<std::string, double> per_zone_qualified_rates(
    const std::set<std::string>& segment_zones,
    const std::map<std::string, std::string>& home_zone_by_user,
    const std::vector<DayMetricsRow>& day_metrics, const Criterion& criterion) {
    std::map<std::string, std::string> zone_of_user;
    for (const auto& [user, zone] : home_zone_by_user)
        if (segment_zones.count(zone)) zone_of_user[user] = zone;

    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> counts;  // zone -> (pass, total)
    for (const auto& row : day_metrics) {
        const auto it = zone_of_user.find(row.user_id);
        if (it == zone_of_user.end()) continue;
        auto& [pass, total] = counts[it->second];
        ++total;
        if (evaluate_criterion(row.metrics, criterion)) ++pass;
    }
    std::map<std::string, double> rates;
    for (const auto& [zone, pt] : counts) rates[zone] = rate_pct(pt.first, pt.second);
    return rates;
}

std::map<std::string, double> per_zone_sampling_rates(
    const std::set<std::string>& segment_zones,
    const std::map<std::string, std::string>& home_zone_by_user,
    const std::map<std::string, ZoneProfile>& profiles) {
    std::map<std::string, std::uint64_t> users_in_zone;
    for (const auto& [user, zone] : home_zone_by_user)
        if (segment_zones.count(zone)) ++users_in_zone[zone];

    std::map<std::string, double> rates;
    for (const auto& zid : segment_zones) {
        const auto it = profiles.find(zid);
        if (it == profiles.end() || it->second.population <= 0) continue;
        const auto uz = users_in_zone.find(zid);
        const std::uint64_t users = uz == users_in_zone.end() ? 0 : uz->second;
        rates[zid] = rate_pct(users, static_cast<std::uint64_t>(it->second.population));
    }
    return rates;
}

GroupComparison compare_groups(std::span<const double> base_values,
                               std::span<const double> other_values) {
    const MwuResult r = mann_whitney_u(base_values, other_values);
    return GroupComparison{r.u_a, r.z, r.p_two_sided};
}

std::vector<ZoneProfile> read_zone_profiles_csv(const std::string& path) {
    std::vector<ZoneProfile> zones;
    csv::for_each_row(path, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
        if (f.size() < 8) throw ParseError("zone profile row needs 8 fields", line_no);
        auto opt_num = [&](std::string_view s) -> std::optional<double> {
            auto t = csv::trim(s);
            if (t.empty()) return std::nullopt;
            double v = 0.0;
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || p != t.data() + t.size())
                throw ParseError("bad numeric field '" + std::string(t) + "'", line_no);
            return v;
        };
        ZoneProfile z;
        z.zone_id = std::string(csv::trim(f[0]));
        z.population = static_cast<std::int64_t>(opt_num(f[1]).value_or(0.0));
        z.median_income = opt_num(f[2]);
        z.pct_bachelor_plus = opt_num(f[3]);
        const auto white = opt_num(f[4]), black = opt_num(f[5]), asian = opt_num(f[6]),
                   hispanic = opt_num(f[7]);
        if (white || black || asian || hispanic) {
            std::map<std::string, double> shares;
            shares["White"] = white.value_or(0.0);
            shares["Black"] = black.value_or(0.0);
            shares["Asian"] = asian.value_or(0.0);
            shares["Hispanic"] = hispanic.value_or(0.0);
            double sum = 0.0;
            for (const auto& [k, v] : shares) sum += v;
            if (sum > 100.5)
                throw ParseError("race shares of zone " + z.zone_id + " sum to " + std::to_string(sum),
                                 line_no);
            z.race_shares = std::move(shares);
        }
        zones.push_back(std::move(z));
    });
    return zones;
}

void write_zone_profiles_csv(const std::vector<ZoneProfile>& zones, const std::string& path) {
    csv::Writer w(path);
    w.header({"zone_id", "population", "median_income", "pct_bachelor_plus", "pct_white",
              "pct_black", "pct_asian", "pct_hispanic"});
    auto opt_field = [&](const std::optional<double>& v, int decimals) {
        if (v)
            w.field(*v, decimals);
        else
            w.field(std::string_view{});
    };
    for (const auto& z : zones) {
        w.field(z.zone_id);
        w.field(z.population);
        opt_field(z.median_income, 0);
        opt_field(z.pct_bachelor_plus, 2);
        if (z.race_shares) {
            auto share = [&](const char* k) {
                const auto it = z.race_shares->find(k);
                return it == z.race_shares->end() ? 0.0 : it->second;
            };
            w.field(share("White"), 2);
            w.field(share("Black"), 2);
            w.field(share("Asian"), 2);
            w.field(share("Hispanic"), 2);
        } else {
            for (int i = 0; i < 4; ++i) w.field(std::string_view{});
        }
        w.end_row();
    }
}

ZoneLookup read_zone_lookup_csv(const std::string& path) {
    ZoneLookup lookup;
    csv::for_each_row(path, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
        if (f.size() < 3) throw ParseError("zone lookup row needs 3 fields", line_no);
        auto idx = [&](std::string_view s) {
            std::int64_t v = 0;
            auto t = csv::trim(s);
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || p != t.data() + t.size())
                throw ParseError("bad cell index '" + std::string(t) + "'", line_no);
            return v;
        };
        lookup[CellKey{idx(f[0]), idx(f[1])}] = std::string(csv::trim(f[2]));
    });
    return lookup;
}

void write_zone_lookup_csv(const ZoneLookup& lookup, const std::string& path) {
    csv::Writer w(path);
    w.header({"cell_lat_idx", "cell_lon_idx", "zone_id"});
    for (const auto& [cell, zone] : lookup) {
        w.field(cell.lat_idx);
        w.field(cell.lon_idx);
        w.field(zone);
        w.end_row();
    }
}

}  // namespace lbsqa
