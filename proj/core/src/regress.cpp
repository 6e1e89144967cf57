#include "lbsqa/regress.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "lbsqa/errors.hpp"
#include "lbsqa/resample.hpp"

namespace lbsqa {

namespace {

constexpr double kRankTolerance = 1e-10;

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> as_eigen(
    const Matrix& m) {
    return {m.a.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols)};
}

std::vector<std::string> dependent_columns(const Matrix& X, const std::vector<std::string>& names) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(as_eigen(X));
    qr.setThreshold(kRankTolerance);
    const auto rank = qr.rank();
    std::vector<std::string> offenders;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = rank; i < perm.size(); ++i) {
        const auto col = static_cast<std::size_t>(perm[i]);
        offenders.push_back(col < names.size() ? names[col] : "col" + std::to_string(col));
    }
    return offenders;
}

double erfc_p_two_sided(double z_abs) {
    double p = std::erfc(z_abs / std::sqrt(2.0));
    return std::min(1.0, std::max(0.0, p));
}

struct RankedPool {
    std::vector<double> midranks_a;  // midranks of sample a
    double rank_sum_a = 0.0;
    double tie_sum = 0.0;            // sum over tie groups of t^3 - t
    std::vector<double> pooled_midranks;
};

RankedPool midrank_pool(std::span<const double> a, std::span<const double> b) {
    struct Entry {
        double value;
        bool from_a;
    };
    std::vector<Entry> pool;
    pool.reserve(a.size() + b.size());
    for (double v : a) pool.push_back({v, true});
    for (double v : b) pool.push_back({v, false});
    std::sort(pool.begin(), pool.end(), [](const Entry& x, const Entry& y) { return x.value < y.value; });

    RankedPool out;
    out.pooled_midranks.resize(pool.size());
    std::size_t i = 0;
    while (i < pool.size()) {
        std::size_t j = i;
        while (j < pool.size() && pool[j].value == pool[i].value) ++j;
        const double t = static_cast<double>(j - i);
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        if (t > 1.0) out.tie_sum += t * t * t - t;
        for (std::size_t k = i; k < j; ++k) {
            out.pooled_midranks[k] = midrank;
            if (pool[k].from_a) {
                out.rank_sum_a += midrank;
                out.midranks_a.push_back(midrank);
            }
        }
        i = j;
    }
    return out;
}

/// Exact two-sided tail P(|U - mu| >= |u_obs - mu|) by enumerating all
/// n_a-subsets of the pooled midranks. Feasible for the small samples it is
/// used on (C(16,8) = 12,870 subsets).
double exact_two_sided_p(const std::vector<double>& pooled_midranks, std::size_t n_a, double u_obs,
                         double mu) {
    const std::size_t n = pooled_midranks.size();
    const double threshold = std::abs(u_obs - mu) - 1e-9;
    const double base = static_cast<double>(n_a * (n_a + 1)) / 2.0;

    std::vector<std::size_t> idx(n_a);
    std::iota(idx.begin(), idx.end(), 0);
    std::uint64_t total = 0, extreme = 0;
    for (;;) {
        double rank_sum = 0.0;
        for (std::size_t i : idx) rank_sum += pooled_midranks[i];
        const double u = rank_sum - base;
        ++total;
        if (std::abs(u - mu) >= threshold) ++extreme;

        // next combination
        std::size_t i = n_a;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - n_a) break;
            if (i == 0) return static_cast<double>(extreme) / static_cast<double>(total);
        }
        if (idx[i] == i + n - n_a) return static_cast<double>(extreme) / static_cast<double>(total);
        ++idx[i];
        for (std::size_t j = i + 1; j < n_a; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

std::string correction_name(Correction c) {
    return c == Correction::kCR0 ? "CR0" : "CR1";
}

DesignSpec DesignSpec::by_id(const std::string& id) {
    if (id == "M1") return m1();
    if (id == "M2") return m2();
    if (id == "M3") return m3();
    throw ConfigError("unknown model id: " + id);
}

OlsFit fit_ols(const Matrix& X, std::span<const double> y, const std::vector<std::string>& names) {
    if (X.rows != y.size()) throw ContractError("fit_ols: X rows and y length differ");
    if (X.rows <= X.cols)
        throw InsufficientDataError("fit_ols needs n > k, got n=" + std::to_string(X.rows) +
                                    " k=" + std::to_string(X.cols));

    const auto Xe = as_eigen(X);
    Eigen::Map<const Eigen::VectorXd> ye(y.data(), static_cast<Eigen::Index>(y.size()));

    Eigen::BDCSVD<Eigen::MatrixXd> svd(Xe, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) < kRankTolerance * sv(0)) {
        auto offenders = dependent_columns(X, names);
        std::string msg = "design matrix is rank deficient";
        if (!offenders.empty()) {
            msg += "; dependent columns:";
            for (const auto& c : offenders) msg += " " + c;
        }
        throw RankError(msg, std::move(offenders));
    }

    Eigen::VectorXd beta = svd.solve(ye);
    Eigen::VectorXd resid = ye - Xe * beta;

    OlsFit fit;
    fit.beta.assign(beta.data(), beta.data() + beta.size());
    fit.residuals.assign(resid.data(), resid.data() + resid.size());
    return fit;
}

Matrix clustered_covariance(const Matrix& X, std::span<const double> residuals,
                            std::span<const std::string> clusters, Correction correction) {
    const std::size_t n = X.rows, k = X.cols;
    if (residuals.size() != n || clusters.size() != n)
        throw ContractError("clustered_covariance: row count mismatch");

    // meat: sum over clusters of s_g s_g' with s_g = X_g' e_g
    std::map<std::string, Eigen::VectorXd> scores;
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, inserted] = scores.try_emplace(clusters[i], Eigen::VectorXd::Zero(k));
        for (std::size_t j = 0; j < k; ++j) it->second(static_cast<Eigen::Index>(j)) += residuals[i] * X(i, j);
    }
    const std::size_t n_clusters = scores.size();
    if (n_clusters < 2)
        throw InsufficientDataError("clustered covariance needs >= 2 clusters, got " +
                                    std::to_string(n_clusters));

    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
    for (const auto& [id, s] : scores) meat += s * s.transpose();

    const auto Xe = as_eigen(X);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(Xe, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < kRankTolerance * sv(0))
        throw RankError("clustered_covariance: design matrix is rank deficient", {});
    // (X'X)^-1 = V S^-2 V'
    Eigen::MatrixXd bread = svd.matrixV() * sv.array().square().inverse().matrix().asDiagonal() *
                            svd.matrixV().transpose();

    double c = 1.0;
    if (correction == Correction::kCR1) {
        const double G = static_cast<double>(n_clusters);
        c = (G / (G - 1.0)) * (static_cast<double>(n - 1) / static_cast<double>(n - k));
    }
    Eigen::MatrixXd V = c * bread * meat * bread;

    Matrix out(k, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t cc = 0; cc < k; ++cc) out(r, cc) = V(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cc));
    return out;
}

double t_p_value(double t_stat, double dof) {
    if (!std::isfinite(t_stat)) return 0.0;
    boost::math::students_t_distribution<double> dist(dof);
    const double p = 2.0 * boost::math::cdf(dist, -std::abs(t_stat));
    return std::min(1.0, std::max(0.0, p));
}

RegressionResult fit_bias_model(const std::vector<BiasRecord>& records, const DesignSpec& spec,
                                Correction correction) {
    const std::size_t k = spec.columns.size();

    std::vector<const BiasRecord*> usable;
    usable.reserve(records.size());
    const bool uses_burstiness =
        std::find(spec.columns.begin(), spec.columns.end(), "burstiness") != spec.columns.end();
    for (const auto& r : records) {
        if (uses_burstiness && !r.metrics.burstiness) continue;
        usable.push_back(&r);
    }
    const std::size_t n = usable.size();
    const std::size_t dropped = records.size() - n;
    if (n == 0) throw InsufficientDataError("fit_bias_model: all rows dropped");

    Matrix X(n, k);
    std::vector<double> y(n);
    std::vector<std::string> clusters(n);
    for (std::size_t i = 0; i < n; ++i) {
        const BiasRecord& r = *usable[i];
        const auto& m = r.metrics;
        for (std::size_t j = 0; j < k; ++j) {
            const std::string& col = spec.columns[j];
            double v = 0.0;
            if (col == "const") v = 1.0;
            else if (col == "n_obs") v = static_cast<double>(m.n_observations);
            else if (col == "temporal_occupancy") v = static_cast<double>(m.temporal_occupancy);
            else if (col == "max_gap_min") v = m.max_record_gap_min;
            else if (col == "pct_high_acc") v = m.pct_high_accuracy;
            else if (col == "burstiness") v = *m.burstiness;
            else if (col == "n_obs_sq") v = static_cast<double>(m.n_observations) * static_cast<double>(m.n_observations);
            else if (col == "temporal_occupancy_sq") v = static_cast<double>(m.temporal_occupancy) * static_cast<double>(m.temporal_occupancy);
            else throw ConfigError("unknown design column: " + col);
            X(i, j) = v;
        }
        y[i] = static_cast<double>(r.bias);
        clusters[i] = r.parent_day_key;
    }

    OlsFit fit = fit_ols(X, y, spec.columns);
    Matrix cov = clustered_covariance(X, fit.residuals, clusters, correction);

    RegressionResult res;
    res.model_id = spec.model_id;
    res.terms = spec.columns;
    res.beta = fit.beta;
    res.cov_clustered = cov;
    res.n = n;
    res.k = k;
    res.dropped_rows = dropped;
    res.correction = correction;

    std::map<std::string, int> cluster_ids;
    for (const auto& c : clusters) cluster_ids.emplace(c, 0);
    res.n_clusters = cluster_ids.size();

    const double dof = static_cast<double>(res.n_clusters) - 1.0;
    res.se.resize(k);
    res.t_stats.resize(k);
    res.p_values.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        res.se[j] = std::sqrt(std::max(0.0, cov(j, j)));
        res.t_stats[j] = res.se[j] > 0.0 ? res.beta[j] / res.se[j]
                                         : std::numeric_limits<double>::infinity();
        res.p_values[j] = t_p_value(res.t_stats[j], dof);
    }

    double y_mean = 0.0;
    for (double v : y) y_mean += v;
    y_mean /= static_cast<double>(n);
    double ssr = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ssr += fit.residuals[i] * fit.residuals[i];
        sst += (y[i] - y_mean) * (y[i] - y_mean);
    }
    res.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 0.0;
    fit.residuals.swap(res.residuals);

    if (k > 2) {  // VIF needs >= 2 non-const regressors
        Matrix Xni(n, k - 1);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 1; j < k; ++j) Xni(i, j - 1) = X(i, j);
        res.vif = vif(Xni);
    }
    return res;
}

std::vector<double> vif(const Matrix& X_no_intercept) {
    const std::size_t n = X_no_intercept.rows, k = X_no_intercept.cols;
    if (k < 2) throw InsufficientDataError("vif needs >= 2 regressors");
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        Matrix aux(n, k);  // intercept plus all columns except j
        std::vector<double> target(n);
        for (std::size_t i = 0; i < n; ++i) {
            aux(i, 0) = 1.0;
            std::size_t col = 1;
            for (std::size_t c = 0; c < k; ++c) {
                if (c == j) continue;
                aux(i, col++) = X_no_intercept(i, c);
            }
            target[i] = X_no_intercept(i, j);
        }
        double r2;
        try {
            OlsFit fit = fit_ols(aux, target);
            double mean = 0.0;
            for (double v : target) mean += v;
            mean /= static_cast<double>(n);
            double ssr = 0.0, sst = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                ssr += fit.residuals[i] * fit.residuals[i];
                sst += (target[i] - mean) * (target[i] - mean);
            }
            if (sst <= 0.0) {  // constant column: collinear with the intercept
                out[j] = std::numeric_limits<double>::infinity();
                continue;
            }
            r2 = 1.0 - ssr / sst;
        } catch (const RankError&) {
            out[j] = std::numeric_limits<double>::infinity();
            continue;
        }
        const double denom = 1.0 - r2;
        out[j] = denom < 1e-12 ? std::numeric_limits<double>::infinity() : 1.0 / denom;
    }
    return out;
}

MwuResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw InsufficientDataError("mann_whitney_u: empty sample");
    const double n_a = static_cast<double>(a.size());
    const double n_b = static_cast<double>(b.size());
    const double n = n_a + n_b;

    const RankedPool pool = midrank_pool(a, b);
    const double u_a = pool.rank_sum_a - n_a * (n_a + 1.0) / 2.0;
    const double mu = n_a * n_b / 2.0;

    const double tie_term = n > 1.0 ? pool.tie_sum / (n * (n - 1.0)) : 0.0;
    const double var = n_a * n_b / 12.0 * ((n + 1.0) - tie_term);
    const double sigma = var > 0.0 ? std::sqrt(var) : 0.0;

    MwuResult res;
    res.u_a = u_a;
    if (sigma == 0.0) {  // all pooled values identical
        res.z = 0.0;
        res.p_two_sided = 1.0;
        return res;
    }
    res.z = (u_a - mu) / sigma;

    if (a.size() <= 8 && b.size() <= 8) {
        res.p_two_sided = exact_two_sided_p(pool.pooled_midranks, a.size(), u_a, mu);
    } else {
        const double z_cc = std::max(0.0, std::abs(u_a - mu) - 0.5) / sigma;
        res.p_two_sided = erfc_p_two_sided(z_cc);
    }
    return res;
}

}  // namespace lbsqa
