#include "lbsqa/resample.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include "lbsqa/csv.hpp"
#include "lbsqa/errors.hpp"
#include "lbsqa/rng.hpp"

namespace lbsqa {

SelectionResult select_ground_truth_days(const Corpus& corpus, const SelectionCriterion& sel) {
    std::vector<const UserDay*> qualifying;
    for (const auto& day : corpus.user_days) {
        if (evaluate_criterion(metrics_vector(day), sel.thresholds)) qualifying.push_back(&day);
    }

    SelectionResult result;
    if (sel.one_day_per_user) {
        std::map<std::string, const UserDay*> best;
        for (const UserDay* d : qualifying) {
            auto [it, inserted] = best.try_emplace(d->user_id, d);
            if (inserted) continue;
            const UserDay* cur = it->second;
            if (d->pings.size() > cur->pings.size() ||
                (d->pings.size() == cur->pings.size() && d->day_id < cur->day_id))
                it->second = d;
        }
        for (const auto& [user, d] : best) result.days.push_back(*d);
    } else {
        for (const UserDay* d : qualifying) result.days.push_back(*d);
    }
    result.empty_warning = result.days.empty();
    return result;
}

std::int64_t resample_count(std::int64_t n, double rate_pct) {
    // floor(rate * n / 100) in integer arithmetic on milli-percent, immune to
    // binary rounding of the rate
    const std::int64_t milli = std::llround(rate_pct * 1000.0);
    return (milli * n) / 100000;
}

ResampledDay resample_day(const UserDay& day, double rate_pct, std::uint64_t seed) {
    if (rate_pct <= 0.0 || rate_pct > 100.0)
        throw ContractError("resample_day: rate_pct must be in (0, 100]");

    const std::int64_t n = static_cast<std::int64_t>(day.pings.size());
    const std::int64_t k = resample_count(n, rate_pct);

    ResampledDay out;
    out.parent_user_id = day.user_id;
    out.parent_day_id = day.day_id;
    out.rate_pct = rate_pct;
    out.seed = seed;
    out.day.user_id = day.user_id;
    out.day.day_id = day.day_id;
    out.day.day_start_utc = day.day_start_utc;

    if (k <= 0) return out;  // empty variant is legal; metrics handle it

    // partial Fisher-Yates over the index range, then restore time order
    std::vector<std::int64_t> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    for (std::int64_t i = 0; i < k; ++i) {
        const std::int64_t j =
            i + static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(k));
    std::sort(idx.begin(), idx.end());

    out.day.pings.reserve(idx.size());
    for (std::int64_t i : idx) out.day.pings.push_back(day.pings[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<ResampledDay> generate_resample_grid(const std::vector<UserDay>& days,
                                                 const std::vector<double>& rates_pct, int reps,
                                                 std::uint64_t master_seed) {
    if (reps < 1) throw ConfigError("generate_resample_grid: reps must be >= 1");
    for (double r : rates_pct)
        if (r <= 0.0 || r > 100.0) throw ConfigError("rate out of (0, 100]: " + std::to_string(r));

    std::vector<ResampledDay> grid;
    grid.reserve(days.size() * rates_pct.size() * static_cast<std::size_t>(reps));
    for (const auto& day : days) {
        for (double rate : rates_pct) {
            for (int rep = 0; rep < reps; ++rep) {
                const std::uint64_t seed = derive_variant_seed(master_seed, day.user_id,
                                                               day.day_id.days_since_epoch, rate, rep);
                ResampledDay v = resample_day(day, rate, seed);
                v.repetition = rep;
                grid.push_back(std::move(v));
            }
        }
    }
    return grid;
}

BiasRecord compute_bias(std::int64_t stays_truth, const ResampledDay& variant,
                        const StayParams& params) {
    BiasRecord rec;
    rec.parent_day_key = variant.parent_key();
    rec.rate_pct = variant.rate_pct;
    rec.repetition = variant.repetition;
    rec.metrics = metrics_vector(variant.day);
    rec.stays_truth = stays_truth;
    rec.stays_resampled = count_stays(variant.day, params);
    rec.bias = rec.stays_resampled - rec.stays_truth;
    return rec;
}

BiasRecord compute_bias(const UserDay& truth, const ResampledDay& variant, const StayParams& params) {
    if (truth.user_id != variant.parent_user_id || truth.day_id != variant.parent_day_id)
        throw ContractError("compute_bias: variant does not descend from the given truth day");
    return compute_bias(count_stays(truth, params), variant, params);
}

void write_bias_csv(const std::vector<BiasRecord>& records, const std::string& path) {
    csv::Writer w(path);
    w.header({"parent_day_key", "rate_pct", "repetition", "n_obs", "temporal_occupancy",
              "max_gap_min", "pct_high_acc", "burstiness", "stays_truth", "stays_resampled", "bias"});
    // real-valued metric columns keep full precision: this table is the
    // regression input, and staged runs must match the end-to-end pipeline
    for (const auto& r : records) {
        w.field(r.parent_day_key);
        w.field_g(r.rate_pct);
        w.field(r.repetition);
        w.field(r.metrics.n_observations);
        w.field(r.metrics.temporal_occupancy);
        w.field_g(r.metrics.max_record_gap_min);
        w.field_g(r.metrics.pct_high_accuracy);
        if (r.metrics.burstiness)
            w.field_g(*r.metrics.burstiness);
        else
            w.field(std::string_view{});
        w.field(r.stays_truth);
        w.field(r.stays_resampled);
        w.field(r.bias);
        w.end_row();
    }
}

std::vector<BiasRecord> read_bias_csv(const std::string& path) {
    std::vector<BiasRecord> records;
    csv::for_each_row(path, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
        if (f.size() < 11) throw ParseError("bias row needs 11 fields", line_no);
        auto num = [&](std::string_view s) {
            double v = 0.0;
            auto t = csv::trim(s);
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc()) throw ParseError("bad numeric field", line_no);
            return v;
        };
        BiasRecord r;
        r.parent_day_key = std::string(csv::trim(f[0]));
        r.rate_pct = num(f[1]);
        r.repetition = static_cast<int>(num(f[2]));
        r.metrics.n_observations = static_cast<std::int64_t>(num(f[3]));
        r.metrics.temporal_occupancy = static_cast<int>(num(f[4]));
        r.metrics.max_record_gap_min = num(f[5]);
        r.metrics.pct_high_accuracy = num(f[6]);
        if (!csv::trim(f[7]).empty()) r.metrics.burstiness = num(f[7]);
        r.metrics.empty_day = r.metrics.n_observations == 0;
        r.stays_truth = static_cast<std::int64_t>(num(f[8]));
        r.stays_resampled = static_cast<std::int64_t>(num(f[9]));
        r.bias = static_cast<std::int64_t>(num(f[10]));
        records.push_back(std::move(r));
    });
    return records;
}

}  // namespace lbsqa
