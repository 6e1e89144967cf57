#include <benchmark/benchmark.h>

#include "lbsqa/quality.hpp"
#include "lbsqa/regress.hpp"
#include "lbsqa/resample.hpp"
#include "lbsqa/rng.hpp"
#include "lbsqa/staypoints.hpp"
#include "lbsqa/synthgen.hpp"

using namespace lbsqa;

namespace {

const UserDay& dense_day() {
    static const UserDay day = [] {
        const DaySchedule sched = generate_schedule(7, ScheduleConfig{}, "u", LocalDate{0});
        return emit_pings(sched, EmissionConfig{}, 11);
    }();
    return day;
}

void BM_MetricsVector(benchmark::State& state) {
    const UserDay& day = dense_day();
    for (auto _ : state) benchmark::DoNotOptimize(metrics_vector(day));
}
BENCHMARK(BM_MetricsVector);

void BM_DetectStays(benchmark::State& state) {
    const UserDay& day = dense_day();
    const StayParams params{};
    for (auto _ : state) benchmark::DoNotOptimize(detect_stays(day, params));
}
BENCHMARK(BM_DetectStays);

void BM_ResampleDay(benchmark::State& state) {
    const UserDay& day = dense_day();
    const double rate = static_cast<double>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(resample_day(day, rate, ++seed));
}
BENCHMARK(BM_ResampleDay)->Arg(1)->Arg(10)->Arg(50)->Arg(90);

void BM_ComputeBias(benchmark::State& state) {
    const UserDay& day = dense_day();
    const StayParams params{};
    const std::int64_t truth = count_stays(day, params);
    const ResampledDay variant = resample_day(day, 10.0, 99);
    for (auto _ : state) benchmark::DoNotOptimize(compute_bias(truth, variant, params));
}
BENCHMARK(BM_ComputeBias);

std::vector<BiasRecord> bias_records(std::size_t n_clusters, std::size_t per_cluster) {
    Rng rng(5);
    std::vector<BiasRecord> records;
    for (std::size_t c = 0; c < n_clusters; ++c)
        for (std::size_t i = 0; i < per_cluster; ++i) {
            BiasRecord r;
            r.parent_day_key = "day" + std::to_string(c);
            r.metrics.n_observations = static_cast<std::int64_t>(rng.uniform_below(1400)) + 10;
            r.metrics.temporal_occupancy = static_cast<int>(rng.uniform_below(49));
            r.metrics.max_record_gap_min = rng.uniform(1.0, 1000.0);
            r.metrics.pct_high_accuracy = rng.uniform(0.0, 100.0);
            r.metrics.burstiness = rng.uniform(-1.0, 1.0);
            r.bias = -static_cast<std::int64_t>(rng.uniform_below(10));
            records.push_back(std::move(r));
        }
    return records;
}

void BM_FitBiasModelM3(benchmark::State& state) {
    const auto records = bias_records(132, 110);  // full default grid shape
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_bias_model(records, DesignSpec::m3(), Correction::kCR1));
}
BENCHMARK(BM_FitBiasModelM3);

void BM_MannWhitney(benchmark::State& state) {
    Rng rng(3);
    std::vector<double> a(static_cast<std::size_t>(state.range(0))),
        b(static_cast<std::size_t>(state.range(0)));
    for (auto& v : a) v = rng.uniform(0.0, 100.0);
    for (auto& v : b) v = rng.uniform(0.0, 100.0);
    for (auto _ : state) benchmark::DoNotOptimize(mann_whitney_u(a, b));
}
BENCHMARK(BM_MannWhitney)->Arg(8)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
