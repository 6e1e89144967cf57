#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lbsqa {

struct BiasRecord;  // resample.hpp

/// Minimal dense row-major matrix; linear algebra backends stay out of the
/// public interface.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

enum class Correction { kCR0, kCR1 };

std::string correction_name(Correction c);

/// Regressor sets for the three bias models. Columns are built from raw
/// metric units; squared terms are derived from their bases.
struct DesignSpec {
    std::string model_id;
    std::vector<std::string> columns;

    static DesignSpec m1() {
        return {"M1", {"const", "n_obs", "temporal_occupancy"}};
    }
    static DesignSpec m2() {
        return {"M2",
                {"const", "n_obs", "temporal_occupancy", "max_gap_min", "pct_high_acc", "burstiness"}};
    }
    static DesignSpec m3() {
        return {"M3",
                {"const", "n_obs", "temporal_occupancy", "max_gap_min", "pct_high_acc", "burstiness",
                 "n_obs_sq", "temporal_occupancy_sq"}};
    }
    static DesignSpec by_id(const std::string& id);
};

struct OlsFit {
    std::vector<double> beta;
    std::vector<double> residuals;
};

/// Least squares via singular value decomposition. Requires n > k and full
/// column rank: a smallest singular value below 1e-10 of the largest raises
/// RankError naming the dependent columns.
OlsFit fit_ols(const Matrix& X, std::span<const double> y,
               const std::vector<std::string>& column_names = {});

/// Cluster-robust sandwich covariance
///   V = c * (X'X)^-1 (sum_g X_g' e_g e_g' X_g) (X'X)^-1
/// with c = 1 (CR0) or (G/(G-1)) * ((n-1)/(n-k)) (CR1). Requires >= 2
/// clusters. With singleton clusters and CR0 this reduces to HC0.
Matrix clustered_covariance(const Matrix& X, std::span<const double> residuals,
                            std::span<const std::string> clusters, Correction correction);

struct RegressionResult {
    std::string model_id;
    std::vector<std::string> terms;
    std::vector<double> beta;
    std::vector<double> se;
    std::vector<double> t_stats;
    std::vector<double> p_values;  // two-sided, t distribution with G-1 dof
    std::vector<double> residuals;
    Matrix cov_clustered;
    double r_squared = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t n_clusters = 0;
    std::size_t dropped_rows = 0;  // listwise deletion on missing regressors
    Correction correction = Correction::kCR1;
    std::vector<double> vif;  // per non-const regressor, aligned with terms[1..]
};

/// Fits one bias model over resampling records, clustered on the parent day.
/// Rows with any missing regressor (burstiness, for M2/M3) are dropped and
/// counted.
RegressionResult fit_bias_model(const std::vector<BiasRecord>& records, const DesignSpec& spec,
                                Correction correction);

/// Variance inflation factors for a design without its intercept column.
/// Perfect collinearity reports +infinity.
std::vector<double> vif(const Matrix& X_no_intercept);

struct MwuResult {
    double u_a = 0.0;         // U statistic of the first sample, midrank method
    double z = 0.0;           // (U_a - mu) / sigma with tie-corrected sigma
    double p_two_sided = 1.0;
};

/// Mann-Whitney U. p is exact (full enumeration) when both samples have at
/// most 8 values, else the normal approximation with 0.5 continuity
/// correction. All pooled values identical degenerates to z = 0, p = 1.
MwuResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Two-sided p from the t distribution.
double t_p_value(double t_stat, double dof);

}  // namespace lbsqa
