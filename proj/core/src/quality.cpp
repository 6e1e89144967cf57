#include "lbsqa/quality.hpp"

#include <bitset>
#include <charconv>
#include <cmath>

#include "lbsqa/csv.hpp"
#include "lbsqa/errors.hpp"
#include "lbsqa/parallel.hpp"

namespace lbsqa {

std::int64_t n_observations(const UserDay& day) {
    return static_cast<std::int64_t>(day.pings.size());
}

int temporal_occupancy(const UserDay& day) {
    std::bitset<48> slots;
    for (const auto& p : day.pings) {
        const std::int64_t local_s = p.timestamp - day.day_start_utc;
        const std::int64_t slot = local_s / 1800;  // half-open [k*30, (k+1)*30) minutes
        if (slot >= 0 && slot < 48) slots.set(static_cast<std::size_t>(slot));
    }
    return static_cast<int>(slots.count());
}

double max_record_gap(const UserDay& day) {
    if (day.pings.size() < 2) return 1440.0;
    std::int64_t max_gap_s = 0;
    for (std::size_t i = 1; i < day.pings.size(); ++i)
        max_gap_s = std::max(max_gap_s, day.pings[i].timestamp - day.pings[i - 1].timestamp);
    return static_cast<double>(max_gap_s) / 60.0;
}

double pct_high_accuracy(const UserDay& day) {
    if (day.pings.empty()) throw InsufficientDataError("pct_high_accuracy undefined on an empty day");
    std::int64_t high = 0;
    for (const auto& p : day.pings)
        if (p.accuracy_m && *p.accuracy_m < 100.0) ++high;  // strict threshold
    return 100.0 * static_cast<double>(high) / static_cast<double>(day.pings.size());
}

std::optional<double> burstiness(const UserDay& day) {
    if (day.pings.size() < 3) return std::nullopt;  // < 2 intervals
    std::int64_t min_gap_s = -1, max_gap_s = -1;
    double sum = 0.0;
    const std::size_t n_intervals = day.pings.size() - 1;
    std::vector<double> intervals;
    intervals.reserve(n_intervals);
    for (std::size_t i = 1; i < day.pings.size(); ++i) {
        const std::int64_t gap_s = day.pings[i].timestamp - day.pings[i - 1].timestamp;
        if (min_gap_s < 0 || gap_s < min_gap_s) min_gap_s = gap_s;
        if (gap_s > max_gap_s) max_gap_s = gap_s;
        const double m = static_cast<double>(gap_s) / 60.0;
        intervals.push_back(m);
        sum += m;
    }
    const double mu = sum / static_cast<double>(n_intervals);
    if (mu == 0.0) return std::nullopt;
    if (min_gap_s == max_gap_s) return -1.0;  // constant intervals, exact
    double ss = 0.0;
    for (double m : intervals) ss += (m - mu) * (m - mu);
    const double sigma = std::sqrt(ss / static_cast<double>(n_intervals));  // population
    return (sigma - mu) / (sigma + mu);
}

QualityMetrics metrics_vector(const UserDay& day) {
    QualityMetrics m;
    m.n_observations = n_observations(day);
    m.temporal_occupancy = temporal_occupancy(day);
    m.max_record_gap_min = max_record_gap(day);
    if (m.n_observations == 0) {
        m.pct_high_accuracy = 0.0;
        m.empty_day = true;
    } else {
        m.pct_high_accuracy = pct_high_accuracy(day);
    }
    m.burstiness = burstiness(day);
    return m;
}

std::vector<DayMetricsRow> corpus_metrics(const Corpus& corpus, int threads) {
    std::vector<DayMetricsRow> rows(corpus.user_days.size());
    parallel_for(corpus.user_days.size(), threads, [&](std::size_t i) {
        const auto& d = corpus.user_days[i];
        rows[i] = DayMetricsRow{d.user_id, d.day_id, metrics_vector(d)};
    });
    return rows;
}

void write_metrics_csv(const std::vector<DayMetricsRow>& rows, const std::string& path) {
    csv::Writer w(path);
    w.header({"user_id", "day_id", "n_obs", "temporal_occupancy", "max_gap_min", "pct_high_acc",
              "burstiness"});
    for (const auto& r : rows) {
        w.field(r.user_id);
        w.field(r.day_id.iso());
        w.field(r.metrics.n_observations);
        w.field(r.metrics.temporal_occupancy);
        w.field(r.metrics.max_record_gap_min, 4);
        w.field(r.metrics.pct_high_accuracy, 4);
        if (r.metrics.burstiness)
            w.field(*r.metrics.burstiness, 6);
        else
            w.field(std::string_view{});
        w.end_row();
    }
}

std::vector<DayMetricsRow> read_metrics_csv(const std::string& path) {
    std::vector<DayMetricsRow> rows;
    csv::for_each_row(path, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
        if (f.size() < 7) throw ParseError("metrics row needs 7 fields", line_no);
        DayMetricsRow r;
        r.user_id = std::string(csv::trim(f[0]));
        r.day_id = LocalDate::parse(std::string(csv::trim(f[1])));
        auto num = [&](std::string_view s) {
            double v = 0.0;
            auto t = csv::trim(s);
            std::from_chars(t.data(), t.data() + t.size(), v);
            return v;
        };
        r.metrics.n_observations = static_cast<std::int64_t>(num(f[2]));
        r.metrics.temporal_occupancy = static_cast<int>(num(f[3]));
        r.metrics.max_record_gap_min = num(f[4]);
        r.metrics.pct_high_accuracy = num(f[5]);
        if (!csv::trim(f[6]).empty()) r.metrics.burstiness = num(f[6]);
        r.metrics.empty_day = r.metrics.n_observations == 0;
        rows.push_back(std::move(r));
    });
    return rows;
}

}  // namespace lbsqa
