#pragma once

#include <span>
#include <vector>

#include "portmanteau/core_stats.hpp"

namespace pmt {

enum class FitKind { None, AR, ARMA, GARCH, ArGarch };

/**
 * @brief Estimates and residuals of a fitted model.
 *
 * `residuals` are the raw mean-equation residuals. For GARCH-type fits
 * `cond_var` holds the fitted conditional variances and `standardized` the
 * residuals divided by their conditional standard deviation; the correlation
 * tests run on `standardized` in that case.
 */
struct FitResult {
    FitKind kind = FitKind::None;
    std::vector<double> ar;
    std::vector<double> ma;
    double mu = 0.0;
    double sigma2 = 0.0;
    double omega = 0.0;
    std::vector<double> alpha;
    std::vector<double> beta;

    std::vector<double> residuals;
    std::vector<double> cond_var;
    std::vector<double> standardized;

    double loglik = 0.0;
    double aic = 0.0;
    bool converged = true;
    int iterations = 0;
    bool reflected_ma = false;  ///< MA estimate was non-invertible and its roots were reflected
    bool boundary = false;      ///< GARCH persistence within 1e-6 of 1

    [[nodiscard]] int arma_order() const { return static_cast<int>(ar.size() + ma.size()); }
    [[nodiscard]] bool has_garch() const { return kind == FitKind::GARCH || kind == FitKind::ArGarch; }
    /// Series the correlation-based tests consume.
    [[nodiscard]] std::span<const double> test_values() const {
        return has_garch() ? std::span<const double>(standardized) : std::span<const double>(residuals);
    }
    [[nodiscard]] ResidualSeries residual_series() const { return make_residual_series(test_values()); }
};

/**
 * OLS of z_t on (1, z_{t-1}, ..., z_{t-p}) for t = p+1..n. Residuals have
 * length n - p; sigma2 = RSS/(n-p); aic = (n-p) log(sigma2) + 2(p+1).
 * With `include_mean` false the constant is omitted and the series is taken
 * to have known mean zero.
 * Throws InvalidOrder unless n > 10p, SingularDesign for a singular design
 * or constant series.
 */
[[nodiscard]] FitResult fit_ar(std::span<const double> series, int p, bool include_mean = true);

/**
 * Fits p = 1..p_max on the common window t = p_max+1..n, keeps the minimum
 * AIC (ties toward smaller p), and returns fit_ar at that order on the full
 * series.
 */
[[nodiscard]] FitResult select_ar_order_aic(std::span<const double> series, int p_max = 4,
                                            bool include_mean = true);

/**
 * Conditional sum of squares for ARMA(p, q) with zero pre-sample errors,
 * minimized by Nelder-Mead. Residuals cover t = p+1..n. A non-invertible MA
 * estimate has its roots reflected and `reflected_ma` set. The mean is fixed
 * at zero when `include_mean` is false.
 */
[[nodiscard]] FitResult fit_arma_css(std::span<const double> series, int p, int q,
                                     bool include_mean = true);

/**
 * Gaussian QMLE of GARCH(b, a) on a mean-zero series. omega is optimized on
 * the log scale and (alpha, beta, slack) through a softmax, so the constraints
 * hold by construction. Pre-sample e^2 and sigma^2 are the sample variance.
 */
[[nodiscard]] FitResult fit_garch_qmle(std::span<const double> series, int b, int a);

/// AR(p) by OLS, then GARCH(b, a) QMLE on the AR residuals.
[[nodiscard]] FitResult fit_ar_garch(std::span<const double> series, int p, int b, int a,
                                     bool include_mean = true);

/// Conditional variances of a GARCH(b, a) recursion started at `presample`.
[[nodiscard]] std::vector<double> garch_variances(std::span<const double> eps, double omega,
                                                  std::span<const double> alpha,
                                                  std::span<const double> beta, double presample);

}  // namespace pmt
