#pragma once

#include <Eigen/Dense>
#include <span>

#include "portmanteau/core_stats.hpp"

namespace pmt {

enum class MatrixKind { R11, R22, R12, R21, Block };

/**
 * @brief Toeplitz (cross-)correlation matrix or the 2(m+1) block matrix.
 *
 * Single kinds are (m+1)x(m+1) with entry (r, c) = rho_ij(c - r). The block
 * kind stacks [[R11, R12], [R12', R22]].
 */
struct CrossCorrMatrix {
    int m = 0;
    MatrixKind kind = MatrixKind::R11;
    Eigen::MatrixXd entries;
    bool standardized = false;
};

/**
 * Builds R_ij(m). Requires 1 <= m < n/2 (LagTooLarge otherwise). When
 * `standardized` is set, every off-zero lag is scaled by sqrt((n+2)/(n-|k|));
 * lag-zero entries are left as they are.
 */
[[nodiscard]] CrossCorrMatrix build_toeplitz(const ResidualSeries& series, int i, int j, int m,
                                             bool standardized = false);

/// Toeplitz matrix from values at lags -m..m (lag_values[k + m] = rho(k)).
[[nodiscard]] Eigen::MatrixXd toeplitz_from_lags(std::span<const double> lag_values, int m);

/// Block matrix [[R11, R12], [R12', R22]] from ready-made parts.
[[nodiscard]] Eigen::MatrixXd assemble_block(const Eigen::MatrixXd& r11, const Eigen::MatrixXd& r12,
                                             const Eigen::MatrixXd& r22);

/// The 2(m+1) block matrix of unstandardized correlations.
[[nodiscard]] CrossCorrMatrix build_block(const ResidualSeries& series, int m);

/**
 * @brief log|A| via Cholesky, 2 * sum(log L_ii).
 *
 * Throws NotPositiveDefinite naming the failing pivot.
 */
[[nodiscard]] double logdet_pd(const Eigen::MatrixXd& matrix);
[[nodiscard]] inline double logdet_pd(const CrossCorrMatrix& matrix) {
    return logdet_pd(matrix.entries);
}

/**
 * @brief log|R11| + log|R22 - R12' R11^-1 R12| for a block matrix.
 *
 * Validation route for logdet_pd; factorizes with Eigen's LLT rather than the
 * in-house Cholesky.
 */
[[nodiscard]] double schur_logdet(const CrossCorrMatrix& block);

}  // namespace pmt
