#include "lbsqa/synthgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "lbsqa/csv.hpp"
#include "lbsqa/errors.hpp"
#include "lbsqa/ingest.hpp"
#include "lbsqa/rng.hpp"
#include "lbsqa/staypoints.hpp"

namespace lbsqa {

namespace {

constexpr double kMetersPerDegLat = 111320.0;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

double quantize(double v, double step) { return std::round(v / step) * step; }

std::pair<double, double> random_point(Rng& rng, double lat_lo, double lon_lo, double extent_deg) {
    return {lat_lo + rng.uniform01() * extent_deg, lon_lo + rng.uniform01() * extent_deg};
}

/// K dwell durations, each >= min_dwell, summing to budget.
std::vector<double> split_budget(Rng& rng, int k, double min_dwell, double budget) {
    std::vector<double> weights(static_cast<std::size_t>(k));
    double sum = 0.0;
    for (auto& w : weights) {
        w = 0.05 + rng.uniform01();
        sum += w;
    }
    const double extra = budget - min_dwell * k;
    std::vector<double> dwells(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) dwells[static_cast<std::size_t>(i)] = min_dwell + extra * weights[static_cast<std::size_t>(i)] / sum;
    return dwells;
}

struct PlannedDay {
    std::vector<std::pair<double, double>> locations;  // K stay locations
    std::vector<double> travel_min;                    // K-1 travel durations
    std::vector<double> dwell_min;                     // K dwell durations
};

}  // namespace

DaySchedule generate_schedule(std::uint64_t seed, const ScheduleConfig& config,
                              const std::string& user_id, LocalDate day_id) {
    if (config.min_stays < 1 || config.max_stays < config.min_stays)
        throw ConfigError("generate_schedule: bad stay-count range");
    if (config.min_dwell_min * config.min_stays > 1440.0)
        throw ConfigError("generate_schedule: minimum dwell budget exceeds the day");
    if (config.home && config.min_stays < 3)
        throw ConfigError("generate_schedule: home-anchored schedules need >= 3 stays");

    Rng rng(seed);
    const int k = static_cast<int>(rng.uniform_int(config.min_stays, config.max_stays));
    const double lat_lo =
        (config.home ? config.home->first : config.center_lat) - config.extent_deg / 2.0;
    const double lon_lo =
        (config.home ? config.home->second : config.center_lon) - config.extent_deg / 2.0;

    // Home-anchored boundary dwells: first stay runs past 07:00, last starts
    // before 22:00, so the night window belongs entirely to home.
    const bool anchored = config.home.has_value();
    PlannedDay plan;
    bool feasible = false;
    for (int attempt = 0; attempt < 200 && !feasible; ++attempt) {
        plan.locations.clear();
        plan.travel_min.clear();

        for (int i = 0; i < k; ++i) {
            if (anchored && (i == 0 || i == k - 1)) {
                plan.locations.push_back(*config.home);
                continue;
            }
            std::pair<double, double> cand;
            for (int tries = 0;; ++tries) {
                if (tries >= 500) throw ConfigError("generate_schedule: cannot satisfy separation");
                cand = random_point(rng, lat_lo, lon_lo, config.extent_deg);
                if (!plan.locations.empty()) {
                    const auto& prev = plan.locations.back();
                    if (haversine_m(prev.first, prev.second, cand.first, cand.second) <=
                        config.separation_m)
                        continue;
                }
                if (anchored && i == k - 2 &&
                    haversine_m(config.home->first, config.home->second, cand.first, cand.second) <=
                        config.separation_m)
                    continue;  // also separated from the trailing home stay
                break;
            }
            plan.locations.push_back(cand);
        }

        double travel_total = 0.0;
        for (int i = 0; i + 1 < k; ++i) {
            const auto& a = plan.locations[static_cast<std::size_t>(i)];
            const auto& b = plan.locations[static_cast<std::size_t>(i + 1)];
            const double mins =
                haversine_m(a.first, a.second, b.first, b.second) / config.speed_mps / 60.0;
            plan.travel_min.push_back(mins);
            travel_total += mins;
        }

        if (anchored) {
            const double first_dwell = rng.uniform(435.0, 465.0);   // ends 07:15-07:45
            const double last_start = rng.uniform(1285.0, 1310.0);  // starts 21:25-21:50
            const double last_dwell = 1440.0 - last_start;
            const double interior_budget = 1440.0 - first_dwell - last_dwell - travel_total;
            const int interior = k - 2;
            if (interior_budget < config.min_dwell_min * interior) continue;  // resample locations
            plan.dwell_min = split_budget(rng, interior, config.min_dwell_min, interior_budget);
            plan.dwell_min.insert(plan.dwell_min.begin(), first_dwell);
            plan.dwell_min.push_back(last_dwell);
        } else {
            const double budget = 1440.0 - travel_total;
            if (budget < config.min_dwell_min * k) continue;
            plan.dwell_min = split_budget(rng, k, config.min_dwell_min, budget);
        }
        feasible = true;
    }
    if (!feasible) throw ConfigError("generate_schedule: no feasible day after 200 attempts");

    DaySchedule sched;
    sched.user_id = user_id;
    sched.day_id = day_id;
    double t = 0.0;
    for (int i = 0; i < k; ++i) {
        Episode stay;
        stay.kind = EpisodeKind::kStay;
        stay.start_min = t;
        t += plan.dwell_min[static_cast<std::size_t>(i)];
        stay.end_min = t;
        stay.lat0 = stay.lat1 = plan.locations[static_cast<std::size_t>(i)].first;
        stay.lon0 = stay.lon1 = plan.locations[static_cast<std::size_t>(i)].second;
        sched.episodes.push_back(stay);
        if (i + 1 < k) {
            Episode travel;
            travel.kind = EpisodeKind::kTravel;
            travel.start_min = t;
            t += plan.travel_min[static_cast<std::size_t>(i)];
            travel.end_min = t;
            travel.lat0 = plan.locations[static_cast<std::size_t>(i)].first;
            travel.lon0 = plan.locations[static_cast<std::size_t>(i)].second;
            travel.lat1 = plan.locations[static_cast<std::size_t>(i + 1)].first;
            travel.lon1 = plan.locations[static_cast<std::size_t>(i + 1)].second;
            sched.episodes.push_back(travel);
        }
    }
    sched.episodes.back().end_min = 1440.0;  // absorb float drift at the day end
    for (const auto& ep : sched.episodes)
        if (ep.kind == EpisodeKind::kStay &&
            ep.end_min - ep.start_min >= config.truth_min_stay_min)
            ++sched.true_stay_count;
    return sched;
}

UserDay emit_pings(const DaySchedule& schedule, const EmissionConfig& emission, std::uint64_t seed,
                   int tz_offset_minutes) {
    if (emission.cadence_s <= 0.0) throw ConfigError("emit_pings: cadence_s must be positive");
    if (emission.cadence_jitter_pct < 0.0 || emission.cadence_jitter_pct >= 100.0)
        throw ConfigError("emit_pings: cadence_jitter_pct must be in [0, 100)");

    Rng rng(seed);
    UserDay day;
    day.user_id = schedule.user_id;
    day.day_id = schedule.day_id;
    day.day_start_utc = day_start_utc(schedule.day_id.days_since_epoch, tz_offset_minutes);

    auto in_dropout = [&](double minute) {
        for (const auto& w : emission.dropout)
            if (minute >= w.start_min && minute < w.start_min + w.duration_min) return true;
        return false;
    };

    std::size_t ep_idx = 0;
    std::int64_t last_ts = -1;
    double t_s = rng.uniform01() * emission.cadence_s;
    for (; t_s < 1440.0 * 60.0; t_s += emission.cadence_s * (1.0 + emission.cadence_jitter_pct /
                                                                       100.0 * rng.uniform(-1.0, 1.0))) {
        const double minute = t_s / 60.0;
        if (in_dropout(minute)) continue;

        while (ep_idx + 1 < schedule.episodes.size() && minute >= schedule.episodes[ep_idx].end_min)
            ++ep_idx;
        const Episode& ep = schedule.episodes[ep_idx];
        double lat, lon;
        if (ep.kind == EpisodeKind::kStay) {
            lat = ep.lat0;
            lon = ep.lon0;
        } else {
            const double span = ep.end_min - ep.start_min;
            const double f = span > 0.0 ? std::clamp((minute - ep.start_min) / span, 0.0, 1.0) : 0.0;
            lat = ep.lat0 + f * (ep.lat1 - ep.lat0);
            lon = ep.lon0 + f * (ep.lon1 - ep.lon0);
            // No fixes in the final 200 m of an approach: an arrival-area
            // travel ping would otherwise anchor a detection candidate that
            // can absorb a >= min_stay prefix of the stay and double-count
            // it. With the annulus empty, every surviving travel ping ends
            // up > 148 m from the stay center after noise, so its candidate
            // breaks on the first stay ping. Subsampling preserves this.
            if (haversine_m(lat, lon, ep.lat1, ep.lon1) <= 200.0) continue;
        }
        // 2-D Gaussian noise truncated at 3 sigma on the norm
        double dx, dy;
        do {
            dx = emission.noise_sigma_m * rng.normal();
            dy = emission.noise_sigma_m * rng.normal();
        } while (std::sqrt(dx * dx + dy * dy) > 3.0 * emission.noise_sigma_m);

        const std::int64_t offset_s = std::llround(t_s);
        if (offset_s >= 1440 * 60) break;  // rounding must not cross the day boundary
        Ping p;
        p.user_id = schedule.user_id;
        p.timestamp = day.day_start_utc + offset_s;
        p.lat = quantize(lat + dy / kMetersPerDegLat, 1e-6);
        p.lon = quantize(lon + dx / (kMetersPerDegLat * std::cos(lat * kDegToRad)), 1e-6);
        double acc;
        if (rng.uniform01() < emission.high_accuracy_share) {
            acc = std::clamp(emission.accuracy_median_m * std::exp(rng.uniform(-0.8, 0.8)), 2.0, 99.0);
        } else {
            acc = rng.uniform(105.0, 400.0);
        }
        p.accuracy_m = quantize(acc, 0.1);
        if (p.timestamp > last_ts) {  // rounding guard; cadence keeps steps > 1 s apart
            last_ts = p.timestamp;
            day.pings.push_back(std::move(p));
        }
    }
    return day;
}

namespace {

struct ZoneFixture {
    std::vector<ZoneProfile> profiles;
    std::vector<std::pair<double, double>> centers;
    std::vector<int> income_rank;  // per zone index
    ZoneLookup lookup;
};

ZoneFixture make_zone_fixture(std::uint64_t seed, const CorpusConfig& cfg) {
    Rng rng(seed);
    ZoneFixture fx;
    const int n = cfg.n_zones;
    const int per_row = 5;
    fx.income_rank.resize(static_cast<std::size_t>(n));
    std::iota(fx.income_rank.begin(), fx.income_rank.end(), 0);
    for (int i = n - 1; i > 0; --i)
        std::swap(fx.income_rank[static_cast<std::size_t>(i)],
                  fx.income_rank[rng.uniform_below(static_cast<std::uint64_t>(i + 1))]);

    for (int z = 0; z < n; ++z) {
        const double lat = cfg.schedule.center_lat + 0.02 * (z / per_row);
        const double lon = cfg.schedule.center_lon + 0.02 * (z % per_row);
        fx.centers.emplace_back(lat, lon);

        char id[16];
        std::snprintf(id, sizeof(id), "Z%03d", z);
        ZoneProfile p;
        p.zone_id = id;
        p.population = rng.uniform_int(800, 2500);
        const int rank = fx.income_rank[static_cast<std::size_t>(z)];
        p.median_income = quantize(40000.0 + 5500.0 * rank + rng.uniform(-2000.0, 2000.0), 1.0);
        p.pct_bachelor_plus =
            quantize(std::clamp(8.0 + 2.3 * rank + rng.uniform(-3.0, 3.0), 1.0, 95.0), 0.01);

        std::map<std::string, double> shares;
        const double u = rng.uniform01();
        std::string majority;
        if (u < 0.55) majority = "White";
        else if (u < 0.70) majority = "Black";
        else if (u < 0.78) majority = "Asian";
        else if (u < 0.86) majority = "Hispanic";
        const std::vector<std::string> races = {"White", "Black", "Asian", "Hispanic"};
        if (!majority.empty()) {
            const double s = rng.uniform(55.0, 85.0);
            shares[majority] = s;
            double rest = rng.uniform(0.85, 0.97) * (100.0 - s);
            std::vector<double> w;
            double wsum = 0.0;
            for (const auto& r : races)
                if (r != majority) {
                    w.push_back(rng.uniform01() + 0.05);
                    wsum += w.back();
                }
            std::size_t wi = 0;
            for (const auto& r : races)
                if (r != majority) shares[r] = rest * w[wi++] / wsum;
        } else {
            // mixed: cap every share below 50
            double remaining = rng.uniform(92.0, 99.0);
            for (std::size_t i = 0; i < races.size(); ++i) {
                const double cap = std::min(48.0, remaining);
                const double s = i + 1 == races.size() ? remaining : rng.uniform(0.1, cap);
                shares[races[i]] = s;
                remaining -= s;
                if (remaining <= 0.0) remaining = 0.0;
            }
        }
        for (auto& [race, s] : shares) s = quantize(s, 0.01);
        p.race_shares = std::move(shares);

        // exercise the missing-attribute paths
        if (z == n - 1) p.median_income.reset();
        if (z == n - 2) p.race_shares.reset();

        const CellKey center_cell = cell_of(lat, lon, cfg.cell_deg);
        for (std::int64_t di = -6; di <= 6; ++di)
            for (std::int64_t dj = -6; dj <= 6; ++dj)
                fx.lookup[CellKey{center_cell.lat_idx + di, center_cell.lon_idx + dj}] = p.zone_id;

        fx.profiles.push_back(std::move(p));
    }
    return fx;
}

int pick_zone(Rng& rng, const ZoneFixture& fx, double income_tilt) {
    // weight = population * (0.6 + tilt * rank / (n-1)); higher-income zones
    // attract more observed users
    const std::size_t n = fx.profiles.size();
    std::vector<double> w(n);
    double sum = 0.0;
    for (std::size_t z = 0; z < n; ++z) {
        const double rank_f =
            n > 1 ? static_cast<double>(fx.income_rank[z]) / static_cast<double>(n - 1) : 0.0;
        w[z] = static_cast<double>(fx.profiles[z].population) * (0.6 + income_tilt * rank_f);
        sum += w[z];
    }
    double x = rng.uniform01() * sum;
    for (std::size_t z = 0; z < n; ++z) {
        x -= w[z];
        if (x <= 0.0) return static_cast<int>(z);
    }
    return static_cast<int>(n - 1);
}

}  // namespace

SynthOutput generate_corpus(const CorpusConfig& config) {
    if (config.n_users < 1) throw ConfigError("generate_corpus: n_users must be >= 1");

    SynthOutput out;
    out.cell_deg = config.cell_deg;
    out.corpus.tz_offset_minutes = config.tz_offset_minutes;
    out.corpus.provenance = {"synthgen"};

    ZoneFixture fx;
    if (config.with_zones) {
        if (config.n_zones < 7) throw ConfigError("generate_corpus: with_zones needs >= 7 zones");
        fx = make_zone_fixture(mix_seed(splitmix64(config.master_seed), fnv1a64("zones")), config);
        out.zones = fx.profiles;
        out.lookup = fx.lookup;
    }

    const std::uint64_t root = splitmix64(config.master_seed);

    auto make_user = [&](const std::string& user_id, int ordinal, bool degraded) {
        const std::uint64_t user_seed =
            mix_seed(mix_seed(root, fnv1a64(degraded ? "degraded" : "hq")), fnv1a64(user_id));
        Rng rng(mix_seed(user_seed, 0));

        ScheduleConfig sched_cfg = config.schedule;
        EmissionConfig emit_cfg = config.emission;

        // Zone fixtures carry an engineered gradient: higher-income zones
        // attract more observed users overall but a smaller clean share and
        // harsher degradation, so sampling rates rise with income while
        // qualified rates fall.
        double income_rank = 0.5;
        if (config.with_zones) {
            const double tilt = degraded ? 2.2 : 0.3;
            const int z = pick_zone(rng, fx, tilt);
            income_rank = fx.profiles.size() > 1
                              ? static_cast<double>(fx.income_rank[static_cast<std::size_t>(z)]) /
                                    static_cast<double>(fx.profiles.size() - 1)
                              : 0.5;
            const auto& c = fx.centers[static_cast<std::size_t>(z)];
            sched_cfg.home = {quantize(c.first + rng.uniform(-0.0015, 0.0015), 1e-6),
                              quantize(c.second + rng.uniform(-0.0015, 0.0015), 1e-6)};
            sched_cfg.extent_deg = std::min(sched_cfg.extent_deg, 0.03);
            sched_cfg.min_stays = std::max(sched_cfg.min_stays, 3);
        }

        if (!degraded) {
            emit_cfg.cadence_s = rng.uniform(config.hq_cadence_min_s, config.hq_cadence_max_s);
        } else {
            const double tier = rng.uniform01();
            if (tier < 0.012 * (1.6 - 1.2 * income_rank)) {
                // borderline: dense enough to clear the strict criterion
                emit_cfg.cadence_s = rng.uniform(60.0, 200.0);
                emit_cfg.accuracy_median_m = 30.0;
                emit_cfg.high_accuracy_share = 0.8;
                const double dur = rng.uniform(10.0, 35.0);
                emit_cfg.dropout = {{rng.uniform(0.0, 1440.0 - dur), dur}};
            } else {
                emit_cfg.cadence_s = rng.uniform(120.0, 300.0 + 1800.0 * income_rank);
                emit_cfg.accuracy_median_m = rng.uniform(20.0, 200.0);
                emit_cfg.high_accuracy_share = rng.uniform(0.2, 0.9);
                const int n_windows =
                    static_cast<int>(rng.uniform_int(1, 2 + static_cast<std::int64_t>(4.0 * income_rank)));
                emit_cfg.dropout.clear();
                for (int g = 0; g < n_windows; ++g) {
                    const double dur = rng.uniform(30.0, 120.0 + 360.0 * income_rank);
                    emit_cfg.dropout.push_back({rng.uniform(0.0, 1440.0 - dur), dur});
                }
            }
        }

        LocalDate day{config.first_day.days_since_epoch + ordinal % std::max(1, config.day_spread)};
        DaySchedule sched = generate_schedule(mix_seed(user_seed, 1), sched_cfg, user_id, day);
        UserDay ud = emit_pings(sched, emit_cfg, mix_seed(user_seed, 2), config.tz_offset_minutes);
        validate_user_day(ud);
        out.corpus.user_days.push_back(std::move(ud));
        out.truth.push_back({user_id, day, sched.true_stay_count});
    };

    for (int u = 0; u < config.n_users; ++u) {
        char id[16];
        std::snprintf(id, sizeof(id), "u%05d", u);
        make_user(id, u, false);
    }
    for (int u = 0; u < config.n_degraded_users; ++u) {
        char id[16];
        std::snprintf(id, sizeof(id), "d%05d", u);
        make_user(id, u, true);
    }

    std::sort(out.corpus.user_days.begin(), out.corpus.user_days.end(),
              [](const UserDay& a, const UserDay& b) {
                  return std::tie(a.user_id, a.day_id) < std::tie(b.user_id, b.day_id);
              });
    std::sort(out.truth.begin(), out.truth.end(), [](const TruthRow& a, const TruthRow& b) {
        return std::tie(a.user_id, a.day_id) < std::tie(b.user_id, b.day_id);
    });
    return out;
}

void write_truth_csv(const std::vector<TruthRow>& rows, const std::string& path) {
    csv::Writer w(path);
    w.header({"user_id", "day_id", "true_stay_count"});
    for (const auto& r : rows) {
        w.field(r.user_id);
        w.field(r.day_id.iso());
        w.field(static_cast<std::int64_t>(r.true_stay_count));
        w.end_row();
    }
}

std::vector<TruthRow> read_truth_csv(const std::string& path) {
    std::vector<TruthRow> rows;
    csv::for_each_row(path, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
        if (f.size() < 3) throw ParseError("truth row needs 3 fields", line_no);
        TruthRow r;
        r.user_id = std::string(csv::trim(f[0]));
        r.day_id = LocalDate::parse(std::string(csv::trim(f[1])));
        auto t = csv::trim(f[2]);
        std::from_chars(t.data(), t.data() + t.size(), r.true_stay_count);
        rows.push_back(std::move(r));
    });
    return rows;
}

}  // namespace lbsqa
