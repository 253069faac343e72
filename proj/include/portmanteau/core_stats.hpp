#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pmt {

/**
 * @brief Residuals together with their centered first and second powers.
 *
 * Holds f1(e_t) = e_t - mean(e) and f2(e_t) = e_t^2 - mean(e^2), each centered
 * at its own sample mean, and the zero-lag covariances gamma_11(0), gamma_22(0)
 * with divisor n. Construction rejects constant inputs and inputs whose squares
 * are constant, since either makes a correlation undefined.
 */
class ResidualSeries {
public:
    explicit ResidualSeries(std::span<const double> values);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] int n() const noexcept { return static_cast<int>(values_.size()); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<const double> centered1() const noexcept { return centered1_; }
    [[nodiscard]] std::span<const double> centered2() const noexcept { return centered2_; }
    /// Centered power `power` (1 or 2).
    [[nodiscard]] std::span<const double> centered(int power) const;
    [[nodiscard]] double gamma11_0() const noexcept { return gamma11_0_; }
    [[nodiscard]] double gamma22_0() const noexcept { return gamma22_0_; }
    [[nodiscard]] double gamma0(int power) const;

private:
    std::vector<double> values_;
    std::vector<double> centered1_;
    std::vector<double> centered2_;
    double gamma11_0_ = 0.0;
    double gamma22_0_ = 0.0;
};

/// Throws TooShort (n < 4), NonFinite, or DegenerateVariance.
[[nodiscard]] ResidualSeries make_residual_series(std::span<const double> values);

/**
 * @brief Sample correlation rho_ij(k) between e_t^i and e_{t+k}^j.
 *
 * Covariances use divisor n at every lag. Negative lags use
 * gamma_ij(k) = gamma_ji(-k). Throws LagOutOfRange when |k| >= n.
 */
[[nodiscard]] double cross_correlation(const ResidualSeries& series, int i, int j, int k);

/// sqrt((n+2)/(n-|k|)) * rho.
[[nodiscard]] double standardize_correlation(double rho, int k, int n);

enum class CorrKind { rho11, rho22, rho12, rho21, rho22star };

/// Correlations over the contiguous lag range [first_lag, first_lag + size).
struct CorrSequence {
    CorrKind kind = CorrKind::rho11;
    int first_lag = 1;
    std::vector<double> values;
    bool standardized = false;

    [[nodiscard]] int last_lag() const noexcept {
        return first_lag + static_cast<int>(values.size()) - 1;
    }
    /// Value at lag k; throws LagOutOfRange outside the stored range.
    [[nodiscard]] double at(int k) const;
};

/// rho_ii(1..m) for power i, optionally standardized entrywise.
[[nodiscard]] CorrSequence autocorrelations(const ResidualSeries& series, int power, int m,
                                            bool standardized = false);

/// rho_ij(-m..m).
[[nodiscard]] CorrSequence cross_correlations(const ResidualSeries& series, int i, int j, int m);

enum class PacfSource { residuals, squared_residuals };

struct PacfSequence {
    PacfSource source = PacfSource::residuals;
    std::vector<double> values;  ///< pi_1 .. pi_m
};

/**
 * @brief Partial autocorrelations pi_1..pi_m by the Durbin-Levinson recursion.
 *
 * `acf` must be an autocorrelation sequence (rho11 or rho22) covering lags 1..m
 * at least. Throws SingularToeplitz naming the first lag whose leading Toeplitz
 * minor is not positive definite.
 */
[[nodiscard]] PacfSequence pacf(const CorrSequence& acf, int m);

/**
 * @brief Standardized squared-residual autocorrelation for a fitted GARCH model.
 *
 * Uses u_t = e_t^2 / h_t where `cond_var` holds the fitted conditional
 * variances h_t, centers u at its mean, and divides the lag-k cross product
 * sum by the full sum of squares (no n factors). Throws NonPositiveVariance
 * when any h_t <= 0 and DegenerateVariance when u is constant.
 */
[[nodiscard]] double garch_standardized_sq_acf(std::span<const double> eps,
                                               std::span<const double> cond_var, int k);

/// garch_standardized_sq_acf for every lag 1..m.
[[nodiscard]] CorrSequence standardized_sq_acf(std::span<const double> eps,
                                               std::span<const double> cond_var, int m);

}  // namespace pmt
