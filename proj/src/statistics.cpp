#include "portmanteau/statistics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "portmanteau/corr_matrices.hpp"
#include "portmanteau/error.hpp"
#include "portmanteau/lag_polynomial.hpp"

namespace pmt {

namespace {

constexpr std::array<std::pair<StatName, std::string_view>, 20> kNames{{
    {StatName::Cm, "Cm"},     {StatName::Q_BP, "Q_BP"}, {StatName::Q11, "Q11"},
    {StatName::Q22, "Q22"},   {StatName::D11, "D11"},   {StatName::D22, "D22"},
    {StatName::Dt11, "Dt11"}, {StatName::Dt22, "Dt22"}, {StatName::M11, "M11"},
    {StatName::M22, "M22"},   {StatName::Qw11, "Qw11"}, {StatName::Qw22, "Qw22"},
    {StatName::Mw11, "Mw11"}, {StatName::Mw22, "Mw22"}, {StatName::Lb, "Lb"},
    {StatName::Lbw, "Lbw"},   {StatName::Qt12, "Qt12"}, {StatName::Qt21, "Qt21"},
    {StatName::Q12, "Q12"},   {StatName::Q21, "Q21"},
}};

int power_of(Which which) { return which == Which::residual ? 1 : 2; }

// Squared-residual tests are never corrected for the mean model's order.
int effective_order(Which which, int order_correction) {
    return which == Which::residual ? order_correction : 0;
}

std::vector<double> linear_weights(int m, double numerator_offset, double denominator) {
    // w_k = (m - k + numerator_offset) / denominator, k = 1..m
    std::vector<double> w(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) {
        w[static_cast<std::size_t>(k - 1)] = (m - k + numerator_offset) / denominator;
    }
    return w;
}

TestReport finish(TestReport r) {
    r.p_value = r.degenerate ? 0.0 : survival(r.dist, r.statistic);
    return r;
}

TestReport degenerate_report(StatName name, int m, int order_correction, NullDistribution dist) {
    TestReport r;
    r.name = name;
    r.m = m;
    r.order_correction = order_correction;
    r.dist = std::move(dist);
    r.statistic = std::numeric_limits<double>::infinity();
    r.degenerate = true;
    return finish(r);
}

NullDistribution gamma_dist(GammaParams g) { return GammaDist{g.shape, g.scale}; }

void check_m(const ResidualSeries& series, int m) {
    if (m < 1 || m >= series.n()) {
        throw Error(ErrorCode::LagOutOfRange, "m = " + std::to_string(m));
    }
}

}  // namespace

std::string_view to_string(StatName name) {
    for (const auto& [n, s] : kNames) {
        if (n == name) return s;
    }
    return "?";
}

StatName stat_from_string(std::string_view text) {
    for (const auto& [n, s] : kNames) {
        if (s == text) return n;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown statistic '" + std::string(text) + "'");
}

const std::vector<StatName>& all_statistics() {
    static const std::vector<StatName> names = [] {
        std::vector<StatName> v;
        for (const auto& entry : kNames) v.push_back(entry.first);
        return v;
    }();
    return names;
}

// ---------------------------------------------------------------------------

double cm_statistic(const ResidualSeries& series, int m) {
    const auto block = build_block(series, m);
    double logdet = 0.0;
    try {
        logdet = logdet_pd(block);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotPositiveDefinite) throw;
        throw Error(ErrorCode::DegenerateSample, e.what());
    }
    return -(series.n() / (m + 1.0)) * logdet;
}

GammaParams cm_gamma_params(int m, int p_plus_q) {
    if (m < 1) throw Error(ErrorCode::InvalidOrder, "m must be positive");
    const double mp1 = m + 1.0;
    const double mean = 2.0 * m + 5.0 - p_plus_q;
    const double denom = 8.0 * (m + 2.0) * (2.0 * m + 3.0) + 6.0 * mp1 - 6.0 * mp1 * p_plus_q;
    if (!(mean > 0.0) || !(denom > 0.0)) {
        throw Error(ErrorCode::InvalidOrder, "2m+5-(p+q) and the variance must be positive");
    }
    return {3.0 * mp1 * mean * mean / denom, denom / (3.0 * mp1 * mean)};
}

TestReport cm_test(const ResidualSeries& series, int m, int p_plus_q) {
    const auto g = cm_gamma_params(m, p_plus_q);
    try {
        TestReport r;
        r.name = StatName::Cm;
        r.m = m;
        r.order_correction = p_plus_q;
        r.dist = gamma_dist(g);
        r.statistic = cm_statistic(series, m);
        return finish(r);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateSample) throw;
        return degenerate_report(StatName::Cm, m, p_plus_q, gamma_dist(g));
    }
}

// ---------------------------------------------------------------------------

TestReport ljung_box(const CorrSequence& acf, int n, int m, int order_correction, StatName name) {
    if (m < 1 || m >= n) throw Error(ErrorCode::LagOutOfRange, "need 1 <= m < n");
    bool weighted = true;
    bool corrected = false;
    switch (name) {
        case StatName::Q_BP: weighted = false; corrected = true; break;
        case StatName::Q11: corrected = true; break;
        case StatName::Q22:
        case StatName::Q12:
        case StatName::Q21: break;
        case StatName::Qt12:
        case StatName::Qt21: weighted = false; break;
        default:
            throw Error(ErrorCode::InvalidSpec,
                        std::string(to_string(name)) + " is not a correlation-sum statistic");
    }
    const int correction = corrected ? order_correction : 0;
    const int df = m - correction;
    if (df <= 0) {
        throw Error(ErrorCode::NonPositiveDf,
                    "m = " + std::to_string(m) + " <= order correction " + std::to_string(correction));
    }
    double s = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double r = acf.at(k);
        s += weighted ? r * r / (n - k) : r * r;
    }
    TestReport out;
    out.name = name;
    out.m = m;
    out.order_correction = correction;
    out.statistic = weighted ? n * (n + 2.0) * s : n * s;
    out.dist = ChiSquare{static_cast<double>(df)};
    return finish(out);
}

TestReport correlation_sum_test(const ResidualSeries& series, int m, int order_correction,
                                StatName name) {
    check_m(series, m);
    CorrSequence acf;
    switch (name) {
        case StatName::Q_BP:
        case StatName::Q11: acf = autocorrelations(series, 1, m); break;
        case StatName::Q22: acf = autocorrelations(series, 2, m); break;
        case StatName::Q12:
        case StatName::Qt12: acf = cross_correlations(series, 1, 2, m); break;
        case StatName::Q21:
        case StatName::Qt21: acf = cross_correlations(series, 2, 1, m); break;
        default:
            throw Error(ErrorCode::InvalidSpec,
                        std::string(to_string(name)) + " is not a correlation-sum statistic");
    }
    return ljung_box(acf, series.n(), m, order_correction, name);
}

// ---------------------------------------------------------------------------

TestReport pena_d(const ResidualSeries& series, int m, bool standardized, Which which,
                  int order_correction) {
    const int p = power_of(which);
    const int c = effective_order(which, order_correction);
    const auto name = p == 1 ? StatName::D11 : StatName::D22;
    const auto dist = gamma_dist(weighted_sum_gamma(linear_weights(m, 1.0, m), c));
    const auto r = build_toeplitz(series, p, p, m, standardized);
    try {
        const double det = std::exp(logdet_pd(r));
        TestReport out;
        out.name = name;
        out.m = m;
        out.order_correction = c;
        out.dist = dist;
        out.statistic = series.n() * (1.0 - std::pow(det, 1.0 / m));
        return finish(out);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotPositiveDefinite) throw;
        return degenerate_report(name, m, c, dist);
    }
}

TestReport pena_dtilde(const ResidualSeries& series, int m, Which which, int order_correction) {
    const int p = power_of(which);
    const int c = effective_order(which, order_correction);
    const auto name = p == 1 ? StatName::Dt11 : StatName::Dt22;
    const auto dist = gamma_dist(weighted_sum_gamma(linear_weights(m, 1.0, m + 1.0), c));
    const auto r = build_toeplitz(series, p, p, m, true);
    try {
        TestReport out;
        out.name = name;
        out.m = m;
        out.order_correction = c;
        out.dist = dist;
        out.statistic = -(series.n() / (m + 1.0)) * logdet_pd(r);
        return finish(out);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotPositiveDefinite) throw;
        return degenerate_report(name, m, c, dist);
    }
}

namespace {

// n(n+2) sum w_k pi_k^2 / (n-k); nullopt when the PACF is undefined.
std::optional<double> weighted_pacf_sum(const ResidualSeries& series, int m, Which which,
                                        std::span<const double> w) {
    try {
        const auto pi = pacf(autocorrelations(series, power_of(which), m), m);
        const int n = series.n();
        double s = 0.0;
        for (int k = 1; k <= m; ++k) {
            const double v = pi.values[static_cast<std::size_t>(k - 1)];
            s += w[static_cast<std::size_t>(k - 1)] * v * v / (n - k);
        }
        return n * (n + 2.0) * s;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularToeplitz) throw;
        return std::nullopt;
    }
}

}  // namespace

TestReport monti(const ResidualSeries& series, int m, int order_correction, Which which) {
    check_m(series, m);
    const int c = effective_order(which, order_correction);
    if (m <= c) throw Error(ErrorCode::NonPositiveDf, "m <= p+q");
    const auto name = which == Which::residual ? StatName::M11 : StatName::M22;
    const NullDistribution dist = ChiSquare{static_cast<double>(m - c)};
    const std::vector<double> ones(static_cast<std::size_t>(m), 1.0);
    const auto s = weighted_pacf_sum(series, m, which, ones);
    if (!s) return degenerate_report(name, m, c, dist);
    TestReport out;
    out.name = name;
    out.m = m;
    out.order_correction = c;
    out.dist = dist;
    out.statistic = *s;
    return finish(out);
}

TestReport weighted_q(const ResidualSeries& series, int m, Which which, int order_correction) {
    check_m(series, m);
    const int p = power_of(which);
    const int c = effective_order(which, order_correction);
    const auto w = linear_weights(m, 1.0, m);
    const auto acf = autocorrelations(series, p, m);
    const int n = series.n();
    double s = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double r = acf.at(k);
        s += w[static_cast<std::size_t>(k - 1)] * r * r / (n - k);
    }
    TestReport out;
    out.name = p == 1 ? StatName::Qw11 : StatName::Qw22;
    out.m = m;
    out.order_correction = c;
    out.dist = gamma_dist(weighted_sum_gamma(w, c));
    out.statistic = n * (n + 2.0) * s;
    return finish(out);
}

TestReport weighted_m(const ResidualSeries& series, int m, Which which, int order_correction) {
    check_m(series, m);
    const int c = effective_order(which, order_correction);
    const auto w = linear_weights(m, 1.0, m);
    const auto name = which == Which::residual ? StatName::Mw11 : StatName::Mw22;
    const auto dist = gamma_dist(weighted_sum_gamma(w, c));
    const auto s = weighted_pacf_sum(series, m, which, w);
    if (!s) return degenerate_report(name, m, c, dist);
    TestReport out;
    out.name = name;
    out.m = m;
    out.order_correction = c;
    out.dist = dist;
    out.statistic = *s;
    return finish(out);
}

TestReport li_mak(std::span<const double> eps, std::span<const double> cond_var, int m, int b,
                  int a, bool weighted) {
    const int c = b + a;
    if (m <= c) {
        throw Error(ErrorCode::NonPositiveDf,
                    "m = " + std::to_string(m) + " <= b+a = " + std::to_string(c));
    }
    const auto rho = standardized_sq_acf(eps, cond_var, m);
    double s = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double w = weighted ? (m - k + (b + 1.0)) / m : 1.0;
        s += w * rho.at(k) * rho.at(k);
    }
    TestReport out;
    out.name = weighted ? StatName::Lbw : StatName::Lb;
    out.m = m;
    out.order_correction = c;
    out.dist = ChiSquare{static_cast<double>(m - c)};
    out.statistic = static_cast<double>(eps.size()) * s;
    return finish(out);
}

// ---------------------------------------------------------------------------

GammaParams gamma_from_moments(double sum_lambda, double sum_lambda_sq) {
    if (!(sum_lambda > 0.0) || !(sum_lambda_sq > 0.0)) {
        throw Error(ErrorCode::InvalidOrder, "eigenvalue sums must be positive");
    }
    const double a = sum_lambda_sq / sum_lambda;
    const double b = sum_lambda * sum_lambda / sum_lambda_sq;
    return {b / 2.0, 2.0 * a};
}

GammaParams weighted_sum_gamma(std::span<const double> weights, int order_correction) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (double w : weights) {
        s1 += w;
        s2 += w * w;
    }
    return gamma_from_moments(s1 - order_correction, s2 - order_correction);
}

QmMatrix build_qm(std::span<const double> ar, std::span<const double> ma, int m) {
    if (m < 1) throw Error(ErrorCode::InvalidOrder, "m must be positive");
    if (!is_stationary(ar)) throw Error(ErrorCode::NonStationary, "AR roots inside unit circle");
    if (!is_invertible(ma)) throw Error(ErrorCode::NonInvertible, "MA roots inside unit circle");

    QmMatrix out;
    out.m = m;
    out.p = static_cast<int>(ar.size());
    out.q = static_cast<int>(ma.size());
    out.approximate = out.p > 0 && out.q > 0;
    out.w.resize(m);
    for (int l = 1; l <= m; ++l) out.w(l - 1) = (m + 1.0 - l) / (m + 1.0);

    const int k = out.p + out.q;
    const int rows = std::max(m, kInformationTerms);
    const auto phi_inv = inverse_ar_weights(ar, rows);
    const auto theta_inv = inverse_ma_weights(ma, rows);
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(rows, k);
    for (int l = 1; l <= rows; ++l) {
        for (int i = 1; i <= out.p; ++i) {
            if (l >= i) full(l - 1, i - 1) = phi_inv[static_cast<std::size_t>(l - i)];
        }
        for (int j = 1; j <= out.q; ++j) {
            if (l >= j) full(l - 1, out.p + j - 1) = -theta_inv[static_cast<std::size_t>(l - j)];
        }
    }
    out.x = full.topRows(m);
    out.v = full.transpose() * full;
    if (k == 0) {
        out.qm = Eigen::MatrixXd::Zero(m, m);
    } else {
        out.qm = out.x * out.v.ldlt().solve(out.x.transpose());
    }
    return out;
}

namespace {

std::vector<double> weighted_eigenvalues(const Eigen::MatrixXd& a, const Eigen::VectorXd& w) {
    // A W is similar to W^1/2 A W^1/2, which is symmetric when A is.
    const Eigen::VectorXd sw = w.array().sqrt();
    const Eigen::MatrixXd sym = sw.asDiagonal() * a * sw.asDiagonal();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (sym + sym.transpose()),
                                                                Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace

std::vector<double> cm_eigenvalues(const QmMatrix& qm) {
    const Eigen::MatrixXd a = 4.0 * Eigen::MatrixXd::Identity(qm.m, qm.m) - qm.qm;
    auto ev = weighted_eigenvalues(a, qm.w);
    ev.push_back(1.0);
    return ev;
}

std::vector<double> residual_pacf_eigenvalues(const QmMatrix& qm) {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(qm.m, qm.m) - qm.qm;
    return weighted_eigenvalues(a, qm.w);
}

// ---------------------------------------------------------------------------

TestReport run_test(const TestContext& ctx, StatName name, int m) {
    if (name == StatName::Lb || name == StatName::Lbw) {
        if (!ctx.garch) {
            throw Error(ErrorCode::InvalidSpec, "Li-Mak statistics need a fitted GARCH model");
        }
        const auto& g = *ctx.garch;
        return li_mak(g.eps, g.cond_var, m, g.b, g.a, name == StatName::Lbw);
    }
    if (ctx.series == nullptr) throw Error(ErrorCode::InvalidSpec, "no residual series");
    const auto& s = *ctx.series;
    const int pq = ctx.arma_order;
    switch (name) {
        case StatName::Cm: return cm_test(s, m, pq);
        case StatName::D11: return pena_d(s, m, false, Which::residual, pq);
        case StatName::D22: return pena_d(s, m, false, Which::squared, pq);
        case StatName::Dt11: return pena_dtilde(s, m, Which::residual, pq);
        case StatName::Dt22: return pena_dtilde(s, m, Which::squared, pq);
        case StatName::M11: return monti(s, m, pq, Which::residual);
        case StatName::M22: return monti(s, m, pq, Which::squared);
        case StatName::Qw11: return weighted_q(s, m, Which::residual, pq);
        case StatName::Qw22: return weighted_q(s, m, Which::squared, pq);
        case StatName::Mw11: return weighted_m(s, m, Which::residual, pq);
        case StatName::Mw22: return weighted_m(s, m, Which::squared, pq);
        default: return correlation_sum_test(s, m, pq, name);
    }
}

}  // namespace pmt
