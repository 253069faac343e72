#include "portmanteau/core_stats.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "portmanteau/error.hpp"

namespace pmt {

namespace {

constexpr double kZeroVariance = 1e-300;
// Centering a constant sequence leaves rounding residue of order eps * |value|.
constexpr double kRelativeZero = 1e-26;

bool negligible(double variance, double raw_second_moment) {
    return variance < kZeroVariance || variance <= kRelativeZero * raw_second_moment;
}

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// n^-1 * sum_{t < n-k} a_t b_{t+k}, k >= 0.
double lagged_cov(std::span<const double> a, std::span<const double> b, int k) {
    const auto n = a.size();
    double s = 0.0;
    for (std::size_t t = 0; t + static_cast<std::size_t>(k) < n; ++t) {
        s += a[t] * b[t + static_cast<std::size_t>(k)];
    }
    return s / static_cast<double>(n);
}

void check_power(int p) {
    if (p != 1 && p != 2) {
        throw Error(ErrorCode::InvalidOrder, "power must be 1 or 2, got " + std::to_string(p));
    }
}

}  // namespace

ResidualSeries::ResidualSeries(std::span<const double> values)
    : values_(values.begin(), values.end()) {
    if (values_.size() < 4) {
        throw Error(ErrorCode::TooShort,
                    "need at least 4 residuals, got " + std::to_string(values_.size()));
    }
    for (std::size_t t = 0; t < values_.size(); ++t) {
        if (!std::isfinite(values_[t])) {
            throw Error(ErrorCode::NonFinite, "non-finite residual at index " + std::to_string(t));
        }
    }
    const double m1 = mean_of(values_);
    double m2 = 0.0;
    for (double v : values_) m2 += v * v;
    m2 /= static_cast<double>(values_.size());

    centered1_.resize(values_.size());
    centered2_.resize(values_.size());
    for (std::size_t t = 0; t < values_.size(); ++t) {
        centered1_[t] = values_[t] - m1;
        centered2_[t] = values_[t] * values_[t] - m2;
    }
    double m4 = 0.0;
    for (double v : values_) m4 += v * v * v * v;
    m4 /= static_cast<double>(values_.size());
    gamma11_0_ = lagged_cov(centered1_, centered1_, 0);
    gamma22_0_ = lagged_cov(centered2_, centered2_, 0);
    if (negligible(gamma11_0_, m2)) {
        throw Error(ErrorCode::DegenerateVariance, "residuals are constant");
    }
    if (negligible(gamma22_0_, m4)) {
        throw Error(ErrorCode::DegenerateVariance, "squared residuals are constant");
    }
}

std::span<const double> ResidualSeries::centered(int power) const {
    check_power(power);
    return power == 1 ? centered1() : centered2();
}

double ResidualSeries::gamma0(int power) const {
    check_power(power);
    return power == 1 ? gamma11_0_ : gamma22_0_;
}

ResidualSeries make_residual_series(std::span<const double> values) {
    return ResidualSeries(values);
}

double cross_correlation(const ResidualSeries& series, int i, int j, int k) {
    if (std::abs(k) >= series.n()) {
        throw Error(ErrorCode::LagOutOfRange,
                    "lag " + std::to_string(k) + " with n = " + std::to_string(series.n()));
    }
    const double scale = std::sqrt(series.gamma0(i) * series.gamma0(j));
    if (k < 0) {
        return lagged_cov(series.centered(j), series.centered(i), -k) / scale;
    }
    return lagged_cov(series.centered(i), series.centered(j), k) / scale;
}

double standardize_correlation(double rho, int k, int n) {
    if (std::abs(k) >= n) {
        throw Error(ErrorCode::LagOutOfRange,
                    "lag " + std::to_string(k) + " with n = " + std::to_string(n));
    }
    return std::sqrt((n + 2.0) / (n - std::abs(k))) * rho;
}

double CorrSequence::at(int k) const {
    if (k < first_lag || k > last_lag()) {
        throw Error(ErrorCode::LagOutOfRange, "lag " + std::to_string(k) + " not stored");
    }
    return values[static_cast<std::size_t>(k - first_lag)];
}

CorrSequence autocorrelations(const ResidualSeries& series, int power, int m, bool standardized) {
    check_power(power);
    if (m < 1 || m >= series.n()) {
        throw Error(ErrorCode::LagOutOfRange, "m = " + std::to_string(m));
    }
    CorrSequence out;
    out.kind = power == 1 ? CorrKind::rho11 : CorrKind::rho22;
    out.first_lag = 1;
    out.standardized = standardized;
    out.values.reserve(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) {
        double r = cross_correlation(series, power, power, k);
        if (standardized) r = standardize_correlation(r, k, series.n());
        out.values.push_back(r);
    }
    return out;
}

CorrSequence cross_correlations(const ResidualSeries& series, int i, int j, int m) {
    if (m < 0 || m >= series.n()) {
        throw Error(ErrorCode::LagOutOfRange, "m = " + std::to_string(m));
    }
    CorrSequence out;
    out.kind = i == j ? (i == 1 ? CorrKind::rho11 : CorrKind::rho22)
                      : (i == 1 ? CorrKind::rho12 : CorrKind::rho21);
    out.first_lag = -m;
    out.values.reserve(static_cast<std::size_t>(2 * m + 1));
    for (int k = -m; k <= m; ++k) out.values.push_back(cross_correlation(series, i, j, k));
    return out;
}

PacfSequence pacf(const CorrSequence& acf, int m) {
    if (acf.kind != CorrKind::rho11 && acf.kind != CorrKind::rho22) {
        throw Error(ErrorCode::InvalidOrder, "pacf needs an autocorrelation sequence");
    }
    if (m < 1 || acf.first_lag > 1 || acf.last_lag() < m) {
        throw Error(ErrorCode::LagOutOfRange, "acf does not cover lags 1.." + std::to_string(m));
    }
    PacfSequence out;
    out.source = acf.kind == CorrKind::rho11 ? PacfSource::residuals : PacfSource::squared_residuals;
    out.values.reserve(static_cast<std::size_t>(m));

    // phi holds the order-(k-1) prediction coefficients, v the prediction error variance.
    std::vector<double> phi;
    std::vector<double> next;
    double v = 1.0;
    for (int k = 1; k <= m; ++k) {
        double num = acf.at(k);
        for (int j = 1; j < k; ++j) num -= phi[static_cast<std::size_t>(j - 1)] * acf.at(k - j);
        const double pk = num / v;
        if (!(v > 0.0) || !std::isfinite(pk) || std::abs(pk) >= 1.0) {
            throw Error(ErrorCode::SingularToeplitz,
                        "leading Toeplitz minor not positive definite at lag " + std::to_string(k));
        }
        next.assign(static_cast<std::size_t>(k), 0.0);
        for (int j = 1; j < k; ++j) {
            next[static_cast<std::size_t>(j - 1)] =
                phi[static_cast<std::size_t>(j - 1)] - pk * phi[static_cast<std::size_t>(k - j - 1)];
        }
        next[static_cast<std::size_t>(k - 1)] = pk;
        phi.swap(next);
        v *= 1.0 - pk * pk;
        out.values.push_back(pk);
    }
    return out;
}

namespace {

std::vector<double> centered_ratio(std::span<const double> eps, std::span<const double> cond_var) {
    if (eps.size() != cond_var.size()) {
        throw Error(ErrorCode::InvalidOrder, "residual and variance lengths differ");
    }
    std::vector<double> u(eps.size());
    for (std::size_t t = 0; t < eps.size(); ++t) {
        if (!(cond_var[t] > 0.0)) {
            throw Error(ErrorCode::NonPositiveVariance,
                        "conditional variance not positive at index " + std::to_string(t));
        }
        u[t] = eps[t] * eps[t] / cond_var[t];
    }
    double raw = 0.0;
    for (double x : u) raw += x * x;
    raw /= static_cast<double>(u.size());
    const double mean = mean_of(u);
    for (double& x : u) x -= mean;
    if (negligible(lagged_cov(u, u, 0), raw)) {
        throw Error(ErrorCode::DegenerateVariance, "e_t^2 / h_t is constant");
    }
    return u;
}

}  // namespace

double garch_standardized_sq_acf(std::span<const double> eps, std::span<const double> cond_var,
                                 int k) {
    if (k < 1 || static_cast<std::size_t>(k) >= eps.size()) {
        throw Error(ErrorCode::LagOutOfRange, "lag " + std::to_string(k));
    }
    return standardized_sq_acf(eps, cond_var, k).values.back();
}

CorrSequence standardized_sq_acf(std::span<const double> eps, std::span<const double> cond_var,
                                 int m) {
    if (m < 1 || static_cast<std::size_t>(m) >= eps.size()) {
        throw Error(ErrorCode::LagOutOfRange, "m = " + std::to_string(m));
    }
    const auto u = centered_ratio(eps, cond_var);
    const double denom = lagged_cov(u, u, 0);
    CorrSequence out;
    out.kind = CorrKind::rho22star;
    out.first_lag = 1;
    for (int k = 1; k <= m; ++k) out.values.push_back(lagged_cov(u, u, k) / denom);
    return out;
}

}  // namespace pmt
