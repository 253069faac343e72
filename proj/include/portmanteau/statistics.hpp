#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "portmanteau/core_stats.hpp"
#include "portmanteau/distributions.hpp"

namespace pmt {

enum class StatName {
    Cm,
    Q_BP,
    Q11,
    Q22,
    D11,
    D22,
    Dt11,
    Dt22,
    M11,
    M22,
    Qw11,
    Qw22,
    Mw11,
    Mw22,
    Lb,
    Lbw,
    Qt12,
    Qt21,
    Q12,
    Q21,
};

[[nodiscard]] std::string_view to_string(StatName name);
/// Throws InvalidConfig for unknown names.
[[nodiscard]] StatName stat_from_string(std::string_view text);
[[nodiscard]] const std::vector<StatName>& all_statistics();

/// Result of one portmanteau test.
struct TestReport {
    StatName name = StatName::Cm;
    double statistic = 0.0;
    int m = 0;
    int order_correction = 0;  ///< p+q, or b+a for the Li-Mak pair
    NullDistribution dist = ChiSquare{};
    double p_value = 1.0;
    bool degenerate = false;  ///< sample correlation matrix was not positive definite
};

enum class Which { residual, squared };

struct GammaParams {
    double shape = 0.0;
    double scale = 0.0;
};

// ---------------------------------------------------------------------------
// Block log-determinant statistic

/**
 * @brief C_m = -(n/(m+1)) log|R(m)| on the 2(m+1) block correlation matrix.
 *
 * Throws DegenerateSample when the sample block matrix is not positive
 * definite, LagTooLarge unless 1 <= m < n/2.
 */
[[nodiscard]] double cm_statistic(const ResidualSeries& series, int m);

/**
 * Gamma shape and scale approximating the null law of C_m after fitting an
 * ARMA model with p+q parameters. Mean is 2m+5-(p+q). Throws InvalidOrder
 * when that mean or the variance would be non-positive.
 */
[[nodiscard]] GammaParams cm_gamma_params(int m, int p_plus_q);

/// C_m with its gamma p-value. Degenerate samples give p = 0 and the flag set.
[[nodiscard]] TestReport cm_test(const ResidualSeries& series, int m, int p_plus_q);

// ---------------------------------------------------------------------------
// Sums of squared correlations

/**
 * Box-Pierce / Ljung-Box family over lags 1..m of `acf`:
 *   Q_BP, Qt12, Qt21          n * sum rho^2
 *   Q11, Q22, Q12, Q21        n(n+2) * sum rho^2 / (n-k)
 * Q_BP and Q11 use chi2 with m - order_correction df; the others chi2_m.
 * Throws NonPositiveDf when m <= order_correction for Q_BP/Q11.
 */
[[nodiscard]] TestReport ljung_box(const CorrSequence& acf, int n, int m, int order_correction,
                                   StatName name);

/// Convenience: computes the correlations for `name` from the series.
[[nodiscard]] TestReport correlation_sum_test(const ResidualSeries& series, int m,
                                              int order_correction, StatName name);

// ---------------------------------------------------------------------------
// Determinant and partial-autocorrelation tests

/// D_ii = n [1 - |R_ii(m)|^(1/m)].
[[nodiscard]] TestReport pena_d(const ResidualSeries& series, int m, bool standardized,
                                Which which, int order_correction = 0);
/// Dt_ii = -(n/(m+1)) log|Rt_ii(m)| with standardized entries.
[[nodiscard]] TestReport pena_dtilde(const ResidualSeries& series, int m, Which which,
                                     int order_correction = 0);
/// M_ii = n(n+2) sum pi_k^2 / (n-k).
[[nodiscard]] TestReport monti(const ResidualSeries& series, int m, int order_correction,
                               Which which);
/// Qw_ii with weights (m-k+1)/m.
[[nodiscard]] TestReport weighted_q(const ResidualSeries& series, int m, Which which,
                                    int order_correction = 0);
/// Mw_ii with weights (m-k+1)/m on partial autocorrelations.
[[nodiscard]] TestReport weighted_m(const ResidualSeries& series, int m, Which which,
                                    int order_correction = 0);

/**
 * @brief Li-Mak L_b, or its weighted form with weights (m-k+(b+1))/m.
 *
 * `cond_var` holds fitted GARCH(b, a) conditional variances. Null law is
 * chi2 with m-(b+a) df for both forms.
 */
[[nodiscard]] TestReport li_mak(std::span<const double> eps, std::span<const double> cond_var,
                                int m, int b, int a, bool weighted);

// ---------------------------------------------------------------------------
// Quadratic-form machinery

/// Gamma matching a * chi2_b with a = sum l^2 / sum l, b = (sum l)^2 / sum l^2.
[[nodiscard]] GammaParams gamma_from_moments(double sum_lambda, double sum_lambda_sq);

/**
 * Gamma for a weighted sum n * sum_k w_k r_k^2 whose asymptotic covariance is
 * I - Q with rank(Q) = order_correction, using the large-m traces
 * tr((I-Q)W) ~ sum w - c and tr(((I-Q)W)^2) ~ sum w^2 - c.
 */
[[nodiscard]] GammaParams weighted_sum_gamma(std::span<const double> weights,
                                             int order_correction);

struct QmMatrix {
    int m = 0;
    int p = 0;
    int q = 0;
    Eigen::MatrixXd x;  ///< m x (p+q)
    Eigen::MatrixXd v;  ///< (p+q) x (p+q) information matrix
    Eigen::MatrixXd qm; ///< X V^-1 X'
    Eigen::VectorXd w;  ///< diagonal of W, w_l = (m+1-l)/(m+1)
    bool approximate = false;  ///< mixed ARMA: V is a truncated Gram limit
};

/// Number of terms in the truncated Gram limit used for V.
inline constexpr int kInformationTerms = 5000;

/**
 * @brief Q_m = X V^-1 X' for a fitted ARMA(p, q).
 *
 * Row l of X holds psi'_{l-i} from 1/phi(B) in the AR columns and the
 * 1/theta(B) weights in the MA columns. V is the Gram limit of those columns.
 * Q is a projection up to the tail beyond lag m of the expansion weights.
 * Throws NonStationary / NonInvertible.
 */
[[nodiscard]] QmMatrix build_qm(std::span<const double> ar, std::span<const double> ma, int m);

/// Eigenvalues of (4I - Q_m) W together with the extra unit eigenvalue.
[[nodiscard]] std::vector<double> cm_eigenvalues(const QmMatrix& qm);
/// Eigenvalues of (I - Q_m) W (residual PACF weighting).
[[nodiscard]] std::vector<double> residual_pacf_eigenvalues(const QmMatrix& qm);

// ---------------------------------------------------------------------------
// Batch evaluation

/// Fitted GARCH information needed by the Li-Mak statistics.
struct GarchContext {
    std::span<const double> eps;       ///< raw residuals
    std::span<const double> cond_var;  ///< fitted conditional variances
    int b = 0;                         ///< ARCH order
    int a = 0;                         ///< GARCH order
};

struct TestContext {
    const ResidualSeries* series = nullptr;  ///< series the correlation tests use
    int arma_order = 0;                      ///< p+q of the fitted mean model
    std::optional<GarchContext> garch;
};

/// Runs one statistic at lag m. Li-Mak requires `garch`; InvalidSpec otherwise.
[[nodiscard]] TestReport run_test(const TestContext& ctx, StatName name, int m);

}  // namespace pmt
