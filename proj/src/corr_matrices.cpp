#include "portmanteau/corr_matrices.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "portmanteau/error.hpp"

namespace pmt {

namespace {

MatrixKind kind_for(int i, int j) {
    if (i == 1 && j == 1) return MatrixKind::R11;
    if (i == 2 && j == 2) return MatrixKind::R22;
    if (i == 1 && j == 2) return MatrixKind::R12;
    return MatrixKind::R21;
}

void check_lag(const ResidualSeries& series, int m) {
    if (m < 1 || 2 * m >= series.n()) {
        throw Error(ErrorCode::LagTooLarge, "need 1 <= m < n/2, got m = " + std::to_string(m) +
                                                ", n = " + std::to_string(series.n()));
    }
}

}  // namespace

Eigen::MatrixXd toeplitz_from_lags(std::span<const double> lag_values, int m) {
    if (lag_values.size() != static_cast<std::size_t>(2 * m + 1)) {
        throw Error(ErrorCode::LagOutOfRange, "expected 2m+1 lag values");
    }
    Eigen::MatrixXd out(m + 1, m + 1);
    for (int r = 0; r <= m; ++r) {
        for (int c = 0; c <= m; ++c) out(r, c) = lag_values[static_cast<std::size_t>(c - r + m)];
    }
    return out;
}

Eigen::MatrixXd assemble_block(const Eigen::MatrixXd& r11, const Eigen::MatrixXd& r12,
                               const Eigen::MatrixXd& r22) {
    const auto d = r11.rows();
    Eigen::MatrixXd out(2 * d, 2 * d);
    out.topLeftCorner(d, d) = r11;
    out.topRightCorner(d, d) = r12;
    out.bottomLeftCorner(d, d) = r12.transpose();
    out.bottomRightCorner(d, d) = r22;
    return out;
}

CrossCorrMatrix build_toeplitz(const ResidualSeries& series, int i, int j, int m,
                               bool standardized) {
    check_lag(series, m);
    std::vector<double> lags(static_cast<std::size_t>(2 * m + 1));
    for (int k = -m; k <= m; ++k) {
        double r = (i == j && k == 0) ? 1.0 : cross_correlation(series, i, j, k);
        if (standardized && k != 0) r = standardize_correlation(r, k, series.n());
        lags[static_cast<std::size_t>(k + m)] = r;
    }
    return CrossCorrMatrix{m, kind_for(i, j), toeplitz_from_lags(lags, m), standardized};
}

CrossCorrMatrix build_block(const ResidualSeries& series, int m) {
    const auto r11 = build_toeplitz(series, 1, 1, m);
    const auto r12 = build_toeplitz(series, 1, 2, m);
    const auto r22 = build_toeplitz(series, 2, 2, m);
    return CrossCorrMatrix{m, MatrixKind::Block,
                           assemble_block(r11.entries, r12.entries, r22.entries), false};
}

double logdet_pd(const Eigen::MatrixXd& a) {
    const auto d = a.rows();
    if (a.cols() != d) throw Error(ErrorCode::NotPositiveDefinite, "matrix is not square");
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
    double logdet = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
        double diag = a(j, j);
        for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0) || !std::isfinite(diag)) {
            throw Error(ErrorCode::NotPositiveDefinite,
                        "Cholesky pivot " + std::to_string(j) + " is not positive");
        }
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        logdet += std::log(ljj);
        for (Eigen::Index i = j + 1; i < d; ++i) {
            double s = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return 2.0 * logdet;
}

double schur_logdet(const CrossCorrMatrix& block) {
    const auto d = block.entries.rows() / 2;
    const Eigen::MatrixXd r11 = block.entries.topLeftCorner(d, d);
    const Eigen::MatrixXd r12 = block.entries.topRightCorner(d, d);
    const Eigen::MatrixXd r22 = block.entries.bottomRightCorner(d, d);

    const Eigen::LLT<Eigen::MatrixXd> llt11(r11);
    if (llt11.info() != Eigen::Success) {
        throw Error(ErrorCode::NotPositiveDefinite, "upper-left block is not positive definite");
    }
    const Eigen::MatrixXd schur = r22 - r12.transpose() * llt11.solve(r12);
    const Eigen::LLT<Eigen::MatrixXd> llt_s(schur);
    if (llt_s.info() != Eigen::Success) {
        throw Error(ErrorCode::NotPositiveDefinite, "Schur complement is not positive definite");
    }
    const auto logdiag = [](const Eigen::LLT<Eigen::MatrixXd>& f) {
        return 2.0 * f.matrixLLT().diagonal().array().log().sum();
    };
    return logdiag(llt11) + logdiag(llt_s);
}

}  // namespace pmt
