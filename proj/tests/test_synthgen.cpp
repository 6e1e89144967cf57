#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "lbsqa/errors.hpp"
#include "lbsqa/ingest.hpp"
#include "lbsqa/qualify.hpp"
#include "lbsqa/quality.hpp"
#include "lbsqa/resample.hpp"
#include "lbsqa/staypoints.hpp"
#include "lbsqa/synthgen.hpp"

using namespace lbsqa;

TEST_CASE("generate_schedule: episodes tile the day, stays in range") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const DaySchedule s = generate_schedule(seed, ScheduleConfig{});
        CHECK(s.true_stay_count >= 3);
        CHECK(s.true_stay_count <= 10);
        REQUIRE_FALSE(s.episodes.empty());
        CHECK(s.episodes.front().start_min == doctest::Approx(0.0));
        CHECK(s.episodes.back().end_min == doctest::Approx(1440.0));
        for (std::size_t i = 1; i < s.episodes.size(); ++i)
            CHECK(s.episodes[i].start_min == doctest::Approx(s.episodes[i - 1].end_min));
        // dwell floor and separation of consecutive stays
        const Episode* prev_stay = nullptr;
        for (const auto& ep : s.episodes) {
            if (ep.kind != EpisodeKind::kStay) continue;
            CHECK(ep.end_min - ep.start_min >= 30.0 - 1e-9);
            if (prev_stay) {
                CHECK(haversine_m(prev_stay->lat0, prev_stay->lon0, ep.lat0, ep.lon0) >
                      ScheduleConfig{}.separation_m);
            }
            prev_stay = &ep;
        }
    }
}

TEST_CASE("generate_schedule is deterministic in the seed") {
    const DaySchedule a = generate_schedule(99, ScheduleConfig{});
    const DaySchedule b = generate_schedule(99, ScheduleConfig{});
    REQUIRE(a.episodes.size() == b.episodes.size());
    for (std::size_t i = 0; i < a.episodes.size(); ++i) {
        CHECK(a.episodes[i].start_min == b.episodes[i].start_min);
        CHECK(a.episodes[i].lat0 == b.episodes[i].lat0);
    }
}

TEST_CASE("generate_schedule: fixed stay count") {
    ScheduleConfig cfg;
    cfg.min_stays = cfg.max_stays = 8;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        CHECK(generate_schedule(seed, cfg).true_stay_count == 8);
}

TEST_CASE("generate_schedule: infeasible dwell budget") {
    ScheduleConfig cfg;
    cfg.min_stays = cfg.max_stays = 50;  // 50 x 30 min > 1440
    CHECK_THROWS_AS(generate_schedule(1, cfg), ConfigError);
}

TEST_CASE("emit_pings: default emission clears the ground-truth selection bar") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DaySchedule sched = generate_schedule(seed, ScheduleConfig{}, "u", LocalDate{100});
        const UserDay day = emit_pings(sched, EmissionConfig{}, seed * 31 + 1);
        CHECK_NOTHROW(validate_user_day(day));
        const QualityMetrics m = metrics_vector(day);
        CHECK(m.temporal_occupancy == 48);
        CHECK(m.max_record_gap_min <= 20.0);
        CHECK(m.n_observations >= 500);
        CHECK(m.n_observations > 1300);  // 60 s cadence: about 1440
        CHECK(m.n_observations < 1600);
        CHECK(m.pct_high_accuracy > 85.0);
        REQUIRE(m.burstiness.has_value());
        CHECK(*m.burstiness >= -1.0);
        CHECK(*m.burstiness <= 0.0);  // jittered cadence stays on the regular side
    }
}

TEST_CASE("emitted pings stay within half the roaming radius of the schedule") {
    const ScheduleConfig cfg;
    const DaySchedule sched = generate_schedule(5, cfg, "u", LocalDate{0});
    const UserDay day = emit_pings(sched, EmissionConfig{}, 17);
    std::size_t ep_idx = 0;
    for (const auto& p : day.pings) {
        const double minute = day.minutes_since_midnight(p);
        while (ep_idx + 1 < sched.episodes.size() && minute >= sched.episodes[ep_idx].end_min)
            ++ep_idx;
        const Episode& ep = sched.episodes[ep_idx];
        if (ep.kind != EpisodeKind::kStay) continue;
        // default noise sigma 16 m truncated at 3 sigma = 48 m < 50 m
        CHECK(haversine_m(p.lat, p.lon, ep.lat0, ep.lon0) < 50.0 + 0.5);
    }
}

TEST_CASE("detection recovers the scheduled stay count on clean emissions") {
    int mismatches = 0;
    const int n_days = 120;
    for (std::uint64_t seed = 0; seed < n_days; ++seed) {
        const DaySchedule sched = generate_schedule(seed * 7 + 3, ScheduleConfig{}, "u", LocalDate{0});
        const UserDay day = emit_pings(sched, EmissionConfig{}, seed * 13 + 1);
        if (count_stays(day, StayParams{}) != sched.true_stay_count) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("a dropout window inside a stay splits it per the gap rule") {
    // one 120-minute stay; silence for minutes [40, 75) leaves two segments
    // of ~40 and ~45 minutes, both above the 20-minute minimum
    ScheduleConfig sched_cfg;
    sched_cfg.min_stays = sched_cfg.max_stays = 1;
    const DaySchedule sched = generate_schedule(11, sched_cfg, "u", LocalDate{0});
    REQUIRE(sched.true_stay_count == 1);

    EmissionConfig no_gap;
    const UserDay clean = emit_pings(sched, no_gap, 3);
    REQUIRE(count_stays(clean, StayParams{}) == 1);

    EmissionConfig with_gap;
    with_gap.dropout = {{40.0, 35.0}};
    const UserDay gapped = emit_pings(sched, with_gap, 3);
    CHECK(count_stays(gapped, StayParams{}) == 2);

    // silencing [10, 45) instead leaves a 10-minute head: only one stay
    EmissionConfig head_gap;
    head_gap.dropout = {{10.0, 35.0}};
    const UserDay head = emit_pings(sched, head_gap, 3);
    CHECK(count_stays(head, StayParams{}) == 1);
}

TEST_CASE("generate_corpus: engineered qualifying cohort and truth bookkeeping") {
    CorpusConfig cfg;
    cfg.n_users = 132;
    const SynthOutput out = generate_corpus(cfg);
    CHECK(out.corpus.user_days.size() == 132);
    CHECK(out.truth.size() == 132);

    const SelectionResult sel = select_ground_truth_days(out.corpus, SelectionCriterion{});
    CHECK(sel.days.size() == 132);

    std::map<std::pair<std::string, std::int64_t>, int> truth_by_key;
    for (const auto& t : out.truth) truth_by_key[{t.user_id, t.day_id.days_since_epoch}] = t.true_stay_count;
    int matched = 0;
    for (const auto& day : out.corpus.user_days) {
        const auto it = truth_by_key.find({day.user_id, day.day_id.days_since_epoch});
        REQUIRE(it != truth_by_key.end());
        if (count_stays(day, StayParams{}) == it->second) ++matched;
    }
    CHECK(matched == 132);  // oracle exactness with default separation
}

TEST_CASE("generate_corpus is a pure function of seed and config") {
    CorpusConfig cfg;
    cfg.n_users = 6;
    cfg.master_seed = 2020;
    const SynthOutput a = generate_corpus(cfg);
    const SynthOutput b = generate_corpus(cfg);
    REQUIRE(a.corpus.user_days.size() == b.corpus.user_days.size());
    for (std::size_t i = 0; i < a.corpus.user_days.size(); ++i)
        CHECK(a.corpus.user_days[i].pings == b.corpus.user_days[i].pings);

    cfg.master_seed = 2021;
    const SynthOutput c = generate_corpus(cfg);
    CHECK(a.corpus.user_days[0].pings != c.corpus.user_days[0].pings);
}

TEST_CASE("degraded cohort lands near a one-percent strict-pass rate") {
    CorpusConfig cfg;
    cfg.n_users = 1;
    cfg.n_degraded_users = 1000;
    cfg.master_seed = 7;
    const SynthOutput out = generate_corpus(cfg);
    int pass_c1 = 0, pass_c3 = 0, degraded_days = 0;
    for (const auto& day : out.corpus.user_days) {
        if (day.user_id[0] != 'd') continue;
        ++degraded_days;
        const QualityMetrics m = metrics_vector(day);
        if (evaluate_criterion(m, Criterion::c1_strict())) ++pass_c1;
        if (evaluate_criterion(m, Criterion::c3_lenient())) ++pass_c3;
    }
    REQUIRE(degraded_days == 1000);
    const double rate_c1 = 100.0 * pass_c1 / degraded_days;
    CHECK(rate_c1 > 0.1);  // order of one percent, not zero
    CHECK(rate_c1 < 5.0);
    CHECK(pass_c3 > pass_c1);  // lenient criterion admits much more
}

TEST_CASE("zone fixtures: home inference is exact for the anchored cohort") {
    CorpusConfig cfg;
    cfg.n_users = 40;
    cfg.with_zones = true;
    cfg.master_seed = 11;
    const SynthOutput out = generate_corpus(cfg);
    REQUIRE(out.zones.size() == 25);
    REQUIRE_FALSE(out.lookup.empty());

    // zone profiles: one zone lacks income, one lacks race shares
    int missing_income = 0, missing_race = 0;
    for (const auto& z : out.zones) {
        if (!z.median_income) ++missing_income;
        if (!z.race_shares) ++missing_race;
        if (z.race_shares) {
            double sum = 0.0;
            for (const auto& [r, s] : z.race_shares->empty() ? std::map<std::string, double>{} : *z.race_shares)
                sum += s;
            CHECK(sum <= 100.5);
        }
    }
    CHECK(missing_income == 1);
    CHECK(missing_race == 1);

    std::map<std::string, std::vector<Ping>> by_user;
    for (const auto& d : out.corpus.user_days)
        for (const auto& p : d.pings) by_user[d.user_id].push_back(p);
    int resolved = 0;
    std::set<std::string> seen_zones;
    for (const auto& [user, pings] : by_user) {
        const auto zone = infer_home_zone(pings, 0, out.cell_deg, out.lookup);
        if (zone) {
            ++resolved;
            seen_zones.insert(*zone);
        }
    }
    CHECK(resolved == 40);      // every anchored user resolves
    CHECK(seen_zones.size() > 3);  // spread over multiple zones
}

TEST_CASE("truth table round trips through its CSV form") {
    const std::vector<TruthRow> rows = {{"u1", LocalDate::from_civil(2020, 1, 5), 7},
                                        {"u2", LocalDate::from_civil(2020, 2, 28), 3}};
    const std::string path = "test_synthgen_truth_tmp.csv";
    write_truth_csv(rows, path);
    const auto back = read_truth_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].user_id == "u1");
    CHECK(back[0].day_id == rows[0].day_id);
    CHECK(back[0].true_stay_count == 7);
    CHECK(back[1].true_stay_count == 3);
    std::remove(path.c_str());
}
