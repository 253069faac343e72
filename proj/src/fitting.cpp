#include "portmanteau/fitting.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "portmanteau/error.hpp"
#include "portmanteau/lag_polynomial.hpp"
#include "portmanteau/optimize.hpp"

namespace pmt {

namespace {

double sample_mean(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    const double mean = sample_mean(x);
    double s = 0.0;
    for (double v : x) s += (v - mean) * (v - mean);
    return s / static_cast<double>(x.size());
}

void require_finite(std::span<const double> x) {
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (!std::isfinite(x[t])) {
            throw Error(ErrorCode::NonFinite, "non-finite value at index " + std::to_string(t));
        }
    }
}

bool is_constant(std::span<const double> x) {
    const double var = sample_variance(x);
    const double mean = sample_mean(x);
    return var <= 1e-26 * std::max(mean * mean, 1e-300);
}

double gaussian_loglik(double rss, std::size_t count) {
    const double n = static_cast<double>(count);
    return -0.5 * n * (std::log(2.0 * std::numbers::pi * rss / n) + 1.0);
}

struct OlsFit {
    Eigen::VectorXd coef;  // intercept, phi_1..phi_p
    std::vector<double> residuals;
    double rss = 0.0;
};

// OLS of z_t on (1, z_{t-1..t-p}) for 0-based t in [start, n); the constant
// column is dropped when `intercept` is false, and coef(0) is then 0.
OlsFit ols_ar(std::span<const double> z, int p, int start, bool intercept) {
    const auto n = static_cast<int>(z.size());
    const int rows = n - start;
    const int k = intercept ? 1 : 0;
    Eigen::MatrixXd x(rows, p + k);
    Eigen::VectorXd y(rows);
    for (int r = 0; r < rows; ++r) {
        const int t = start + r;
        y(r) = z[static_cast<std::size_t>(t)];
        if (intercept) x(r, 0) = 1.0;
        for (int i = 1; i <= p; ++i) x(r, k + i - 1) = z[static_cast<std::size_t>(t - i)];
    }
    OlsFit out;
    if (p + k == 0) {
        out.coef = Eigen::VectorXd::Zero(1);
        out.residuals.assign(y.data(), y.data() + y.size());
        out.rss = y.squaredNorm();
        return out;
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < p + k) {
        throw Error(ErrorCode::SingularDesign, "AR(" + std::to_string(p) + ") design is singular");
    }
    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd e = y - x * beta;
    out.coef = Eigen::VectorXd::Zero(p + 1);
    out.coef.tail(p) = beta.tail(p);
    if (intercept) out.coef(0) = beta(0);
    out.residuals.assign(e.data(), e.data() + e.size());
    out.rss = e.squaredNorm();
    return out;
}

}  // namespace

FitResult fit_ar(std::span<const double> series, int p, bool include_mean) {
    require_finite(series);
    const auto n = static_cast<int>(series.size());
    if (p < 0 || n <= 10 * p || n < 2) {
        throw Error(ErrorCode::InvalidOrder,
                    "AR(" + std::to_string(p) + ") needs n > 10p, n = " + std::to_string(n));
    }
    if (is_constant(series)) throw Error(ErrorCode::SingularDesign, "series is constant");

    const auto ols = ols_ar(series, p, p, include_mean);
    FitResult fit;
    fit.kind = FitKind::AR;
    fit.ar.assign(ols.coef.data() + 1, ols.coef.data() + ols.coef.size());
    const double phi_sum = std::accumulate(fit.ar.begin(), fit.ar.end(), 0.0);
    fit.mu = std::abs(1.0 - phi_sum) > 1e-12 ? ols.coef(0) / (1.0 - phi_sum) : ols.coef(0);
    fit.residuals = ols.residuals;
    const auto used = fit.residuals.size();
    fit.sigma2 = ols.rss / static_cast<double>(used);
    if (!(fit.sigma2 > 0.0)) throw Error(ErrorCode::SingularDesign, "perfect AR fit");
    fit.loglik = gaussian_loglik(ols.rss, used);
    fit.aic = static_cast<double>(used) * std::log(fit.sigma2) + 2.0 * (p + 1);
    return fit;
}

FitResult select_ar_order_aic(std::span<const double> series, int p_max, bool include_mean) {
    require_finite(series);
    if (p_max < 1) throw Error(ErrorCode::InvalidOrder, "p_max must be at least 1");
    const auto n = static_cast<int>(series.size());
    if (n <= 10 * p_max) {
        throw Error(ErrorCode::InvalidOrder, "n must exceed 10 p_max");
    }
    if (is_constant(series)) throw Error(ErrorCode::SingularDesign, "series is constant");

    int best_p = 1;
    double best_aic = std::numeric_limits<double>::infinity();
    const double used = n - p_max;
    for (int p = 1; p <= p_max; ++p) {
        const auto ols = ols_ar(series, p, p_max, include_mean);
        const double aic = used * std::log(ols.rss / used) + 2.0 * (p + 1);
        if (aic < best_aic) {
            best_aic = aic;
            best_p = p;
        }
    }
    return fit_ar(series, best_p, include_mean);
}

// ---------------------------------------------------------------------------

namespace {

// Residuals of ARMA(p, q) at t = p..n-1 with zero pre-sample errors.
void css_residuals(std::span<const double> z, double mu, std::span<const double> ar,
                   std::span<const double> ma, std::vector<double>& e) {
    const std::size_t n = z.size();
    const std::size_t p = ar.size();
    e.assign(n, 0.0);
    for (std::size_t t = p; t < n; ++t) {
        double v = z[t] - mu;
        for (std::size_t i = 1; i <= p; ++i) v -= ar[i - 1] * (z[t - i] - mu);
        for (std::size_t j = 1; j <= ma.size() && j <= t; ++j) v -= ma[j - 1] * e[t - j];
        e[t] = v;
    }
}

}  // namespace

FitResult fit_arma_css(std::span<const double> series, int p, int q, bool include_mean) {
    require_finite(series);
    const auto n = static_cast<int>(series.size());
    if (p < 0 || q < 0 || n <= 10 * (p + q) || n < 2) {
        throw Error(ErrorCode::InvalidOrder, "ARMA order too large for n = " + std::to_string(n));
    }
    if (is_constant(series)) throw Error(ErrorCode::SingularDesign, "series is constant");

    FitResult fit;
    fit.kind = FitKind::ARMA;
    std::vector<double> start{include_mean ? sample_mean(series) : 0.0};
    if (p > 0) {
        const auto ar = fit_ar(series, p, include_mean);
        start[0] = ar.mu;
        start.insert(start.end(), ar.ar.begin(), ar.ar.end());
    }
    start.resize(static_cast<std::size_t>(1 + p + q), 0.0);

    // x = (mu, ar, ma), with mu held at 0 and left out of the simplex when the mean is known.
    const int offset = include_mean ? 0 : 1;
    if (!include_mean) start.erase(start.begin());
    std::vector<double> e;
    const auto mean_of = [&](const std::vector<double>& x) { return include_mean ? x[0] : 0.0; };
    const auto unpack = [&](const std::vector<double>& x, std::vector<double>& ar,
                            std::vector<double>& ma) {
        ar.assign(x.begin() + 1 - offset, x.begin() + 1 - offset + p);
        ma.assign(x.begin() + 1 - offset + p, x.end());
    };
    std::vector<double> ar;
    std::vector<double> ma;
    const auto objective = [&](const std::vector<double>& x) {
        unpack(x, ar, ma);
        css_residuals(series, mean_of(x), ar, ma, e);
        double s = 0.0;
        for (std::size_t t = static_cast<std::size_t>(p); t < e.size(); ++t) s += e[t] * e[t];
        return s;
    };

    std::vector<double> best = start;
    if (p + q > 0) {
        NelderMeadOptions opt;
        opt.max_iterations = 2000;
        opt.f_tol_rel = 1e-10;
        opt.initial_step = 0.1;
        const auto r = nelder_mead(objective, start, opt);
        best = r.x;
        fit.converged = r.converged;
        fit.iterations = r.iterations;
    }
    fit.mu = mean_of(best);
    unpack(best, fit.ar, fit.ma);
    if (!is_invertible(fit.ma)) {
        fit.ma = reflect_ma_roots(fit.ma);
        fit.reflected_ma = true;
    }
    css_residuals(series, fit.mu, fit.ar, fit.ma, e);
    fit.residuals.assign(e.begin() + p, e.end());
    double rss = 0.0;
    for (double v : fit.residuals) rss += v * v;
    const auto used = fit.residuals.size();
    fit.sigma2 = rss / static_cast<double>(used);
    if (!(fit.sigma2 > 0.0)) throw Error(ErrorCode::SingularDesign, "perfect ARMA fit");
    fit.loglik = gaussian_loglik(rss, used);
    fit.aic = static_cast<double>(used) * std::log(fit.sigma2) + 2.0 * (p + q + 1);
    return fit;
}

// ---------------------------------------------------------------------------

std::vector<double> garch_variances(std::span<const double> eps, double omega,
                                    std::span<const double> alpha, std::span<const double> beta,
                                    double presample) {
    const std::size_t n = eps.size();
    std::vector<double> h(n);
    for (std::size_t t = 0; t < n; ++t) {
        double v = omega;
        for (std::size_t i = 1; i <= alpha.size(); ++i) {
            v += alpha[i - 1] * (t >= i ? eps[t - i] * eps[t - i] : presample);
        }
        for (std::size_t j = 1; j <= beta.size(); ++j) {
            v += beta[j - 1] * (t >= j ? h[t - j] : presample);
        }
        h[t] = v;
    }
    return h;
}

namespace {

struct GarchParams {
    double omega;
    std::vector<double> alpha;
    std::vector<double> beta;
};

// x = (log omega, logits of alpha_1..alpha_b, beta_1..beta_a against a zero-logit slack).
GarchParams unpack_garch(const std::vector<double>& x, int b, int a) {
    GarchParams g{std::exp(x[0]), {}, {}};
    double top = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) top = std::max(top, x[i]);
    double denom = std::exp(-top);  // slack
    for (std::size_t i = 1; i < x.size(); ++i) denom += std::exp(x[i] - top);
    for (int i = 0; i < b; ++i) g.alpha.push_back(std::exp(x[1 + i] - top) / denom);
    for (int j = 0; j < a; ++j) g.beta.push_back(std::exp(x[1 + b + j] - top) / denom);
    return g;
}

}  // namespace

FitResult fit_garch_qmle(std::span<const double> series, int b, int a) {
    require_finite(series);
    if (b < 0 || a < 0 || (a > 0 && b == 0)) {
        throw Error(ErrorCode::InvalidOrder, "GARCH(b, a) needs b >= 1 when a >= 1");
    }
    const auto n = static_cast<int>(series.size());
    if (n <= 10 * (b + a + 1)) throw Error(ErrorCode::InvalidOrder, "series too short for GARCH");
    const double var = sample_variance(series);
    if (!(var > 0.0)) throw Error(ErrorCode::SingularDesign, "series is constant");

    // Start at alpha_i = 0.1/b, beta_j = 0.7/a and omega matching the sample variance.
    const double a0 = b > 0 ? 0.1 / b : 0.0;
    const double b0 = a > 0 ? 0.7 / a : 0.0;
    const double persistence0 = b * a0 + a * b0;
    std::vector<double> start{std::log(var * (1.0 - persistence0))};
    const double slack0 = 1.0 - persistence0;
    for (int i = 0; i < b; ++i) start.push_back(std::log(a0 / slack0));
    for (int j = 0; j < a; ++j) start.push_back(std::log(b0 / slack0));

    const auto objective = [&](const std::vector<double>& x) {
        const auto g = unpack_garch(x, b, a);
        const auto h = garch_variances(series, g.omega, g.alpha, g.beta, var);
        double s = 0.0;
        for (std::size_t t = 0; t < h.size(); ++t) {
            if (!(h[t] > 0.0)) return std::numeric_limits<double>::infinity();
            s += std::log(h[t]) + series[t] * series[t] / h[t];
        }
        return 0.5 * s;
    };

    NelderMeadOptions opt;
    opt.max_iterations = 5000;
    opt.f_tol_rel = 1e-12;
    opt.x_tol = 1e-8;
    opt.initial_step = 0.5;
    const auto r = nelder_mead(objective, start, opt);

    const auto g = unpack_garch(r.x, b, a);
    FitResult fit;
    fit.kind = FitKind::GARCH;
    fit.omega = g.omega;
    fit.alpha = g.alpha;
    fit.beta = g.beta;
    fit.converged = r.converged;
    fit.iterations = r.iterations;
    fit.residuals.assign(series.begin(), series.end());
    fit.cond_var = garch_variances(series, g.omega, g.alpha, g.beta, var);
    fit.standardized.resize(fit.residuals.size());
    for (std::size_t t = 0; t < fit.residuals.size(); ++t) {
        fit.standardized[t] = fit.residuals[t] / std::sqrt(fit.cond_var[t]);
    }
    const double persistence = std::accumulate(g.alpha.begin(), g.alpha.end(), 0.0) +
                               std::accumulate(g.beta.begin(), g.beta.end(), 0.0);
    fit.boundary = persistence > 1.0 - 1e-6;
    fit.sigma2 = var;
    fit.loglik = -r.value - 0.5 * n * std::log(2.0 * std::numbers::pi);
    fit.aic = -2.0 * fit.loglik + 2.0 * (1 + b + a);
    return fit;
}

FitResult fit_ar_garch(std::span<const double> series, int p, int b, int a, bool include_mean) {
    const auto mean_fit = fit_ar(series, p, include_mean);
    auto fit = fit_garch_qmle(mean_fit.residuals, b, a);
    fit.kind = FitKind::ArGarch;
    fit.ar = mean_fit.ar;
    fit.mu = mean_fit.mu;
    fit.sigma2 = mean_fit.sigma2;
    fit.aic = -2.0 * fit.loglik + 2.0 * (p + 1 + 1 + b + a);
    return fit;
}

}  // namespace pmt
