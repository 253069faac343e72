#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "portmanteau/corr_matrices.hpp"
#include "portmanteau/error.hpp"
#include "portmanteau/models.hpp"
#include "portmanteau/statistics.hpp"

using namespace pmt;

namespace {

double chi_df(const TestReport& r) { return std::get<ChiSquare>(r.dist).df; }

std::vector<double> ar_series(std::uint64_t seed, int n, double phi) {
    auto x = oracle::normals(seed, static_cast<std::size_t>(n));
    for (std::size_t t = 1; t < x.size(); ++t) x[t] += phi * x[t - 1];
    return x;
}

}  // namespace

TEST_CASE("statistic names round trip") {
    for (const auto s : all_statistics()) CHECK(stat_from_string(to_string(s)) == s);
    CHECK(all_statistics().size() == 20);
    CHECK_THROWS_AS((void)stat_from_string("Q99"), Error);
}

TEST_CASE("C_m equals the scaled LU log-determinant of the hand-assembled block") {
    const auto x = ar_series(50, 50, 0.3);
    const auto s = make_residual_series(x);
    for (int m : {1, 3, 5, 10, 20}) {
        const double expected = -(50.0 / (m + 1.0)) * oracle::lu_logdet(oracle::block(x, m));
        CHECK(std::abs(cm_statistic(s, m) - expected) < 1e-9);
        CHECK(cm_statistic(s, m) >= -1e-9);
    }
    CHECK_THROWS_AS((void)cm_statistic(s, 25), Error);
}

TEST_CASE("C_m of a two-valued series is degenerate") {
    std::mt19937_64 rng(1);
    std::vector<double> x(60);
    for (double& v : x) v = static_cast<double>(rng() % 2);
    const auto s = make_residual_series(x);
    CHECK_THROWS_AS((void)cm_statistic(s, 5), Error);
    const auto r = cm_test(s, 5, 0);
    CHECK(r.degenerate);
    CHECK(r.p_value == 0.0);
    CHECK(std::isinf(r.statistic));
}

TEST_CASE("C_m null mean for i.i.d. input") {
    const int reps = 10000;
    const int n = 200;
    const int m = 10;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto x = oracle::normals(derive_seed(123, 0, static_cast<std::uint64_t>(r)), n);
        sum += cm_statistic(make_residual_series(x), m);
    }
    CHECK(sum / reps == doctest::Approx(2.0 * m + 5.0).epsilon(0.03));
}

TEST_CASE("C_m gamma parameters") {
    const auto g = cm_gamma_params(10, 1);
    CHECK(g.shape == doctest::Approx(19008.0 / 2208.0).epsilon(1e-14));
    CHECK(g.scale == doctest::Approx(2208.0 / 792.0).epsilon(1e-14));
    CHECK(g.shape * g.scale == doctest::Approx(24.0).epsilon(1e-14));

    const auto h = cm_gamma_params(20, 1);
    CHECK(h.shape * h.scale == doctest::Approx(44.0).epsilon(1e-14));
    CHECK(h.shape * h.scale * h.scale == doctest::Approx(120.1270).epsilon(1e-6));

    for (int m = 1; m <= 40; ++m) {
        const auto z = cm_gamma_params(m, 0);
        CHECK(z.shape * z.scale == doctest::Approx(2.0 * m + 5.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS((void)cm_gamma_params(0, 0), Error);
    CHECK_THROWS_AS((void)cm_gamma_params(2, 9), Error);
}

TEST_CASE("correlation-sum statistics by hand") {
    CorrSequence acf{CorrKind::rho11, 1, {0.1, -0.05}, false};
    const auto q11 = ljung_box(acf, 100, 2, 0, StatName::Q11);
    CHECK(q11.statistic == doctest::Approx(100.0 * 102.0 * (0.01 / 99.0 + 0.0025 / 98.0)));
    CHECK(q11.statistic == doctest::Approx(1.290507).epsilon(1e-6));
    CHECK(chi_df(q11) == 2.0);

    CorrSequence cross{CorrKind::rho12, 1, {0.1, -0.05}, false};
    const auto qt = ljung_box(cross, 100, 2, 1, StatName::Qt12);
    CHECK(qt.statistic == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(chi_df(qt) == 2.0);  // never order-corrected

    const auto bp = ljung_box(acf, 100, 2, 1, StatName::Q_BP);
    CHECK(bp.statistic == doctest::Approx(1.25));
    CHECK(chi_df(bp) == 1.0);

    CorrSequence zero{CorrKind::rho22, 1, {0.0, 0.0, 0.0}, false};
    const auto q22 = ljung_box(zero, 50, 3, 2, StatName::Q22);
    CHECK(q22.statistic == 0.0);
    CHECK(q22.p_value == 1.0);
    CHECK(chi_df(q22) == 3.0);

    try {
        (void)ljung_box(acf, 100, 2, 2, StatName::Q11);
        FAIL("expected NonPositiveDf");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPositiveDf);
    }
}

TEST_CASE("correlation sums on a series match direct summation") {
    const auto x = ar_series(7, 120, 0.2);
    const auto s = make_residual_series(x);
    const int n = 120;
    const int m = 8;
    double q12 = 0.0;
    double q21 = 0.0;
    double q22 = 0.0;
    for (int k = 1; k <= m; ++k) {
        q12 += std::pow(oracle::rho(x, 1, 2, k), 2) / (n - k);
        q21 += std::pow(oracle::rho(x, 2, 1, k), 2) / (n - k);
        q22 += std::pow(oracle::rho(x, 2, 2, k), 2) / (n - k);
    }
    CHECK(correlation_sum_test(s, m, 1, StatName::Q12).statistic ==
          doctest::Approx(n * (n + 2.0) * q12).epsilon(1e-12));
    CHECK(correlation_sum_test(s, m, 1, StatName::Q21).statistic ==
          doctest::Approx(n * (n + 2.0) * q21).epsilon(1e-12));
    CHECK(correlation_sum_test(s, m, 1, StatName::Q22).statistic ==
          doctest::Approx(n * (n + 2.0) * q22).epsilon(1e-12));
}

TEST_CASE("determinant tests") {
    // m = 1, rho(1) = 0.3, n = 100: D = n (1 - (1 - 0.09)) = 9.
    CHECK(100.0 * (1.0 - std::exp(logdet_pd(toeplitz_from_lags(std::vector<double>{0.3, 1, 0.3}, 1)))) ==
          doctest::Approx(9.0).epsilon(1e-12));

    const auto x = ar_series(11, 98, 0.25);
    const auto s = make_residual_series(x);
    const double r1 = oracle::rho(x, 1, 1, 1);
    CHECK(pena_d(s, 1, false, Which::residual).statistic ==
          doctest::Approx(98.0 * r1 * r1).epsilon(1e-10));
    const double rt = r1 * std::sqrt(100.0 / 97.0);
    CHECK(pena_dtilde(s, 1, Which::residual).statistic ==
          doctest::Approx(-(98.0 / 2.0) * std::log(1.0 - rt * rt)).epsilon(1e-12));
    CHECK(pena_d(s, 4, true, Which::residual).statistic !=
          doctest::Approx(pena_d(s, 4, false, Which::residual).statistic));

    for (int m : {2, 5, 10}) {
        for (int p : {1, 2}) {
            const auto which = p == 1 ? Which::residual : Which::squared;
            const auto pi = pacf(autocorrelations(s, p, m, true), m).values;
            double expected = 0.0;
            for (int k = 1; k <= m; ++k) {
                expected += (m + 1 - k) * std::log(1.0 - pi[static_cast<std::size_t>(k - 1)] *
                                                             pi[static_cast<std::size_t>(k - 1)]);
            }
            expected *= -98.0 / (m + 1.0);
            CHECK(std::abs(pena_dtilde(s, m, which).statistic - expected) < 1e-9);

            const double d = pena_d(s, m, false, which).statistic;
            const double det = std::exp(oracle::lu_logdet(oracle::toeplitz(x, p, p, m)));
            CHECK(d == doctest::Approx(98.0 * (1.0 - std::pow(det, 1.0 / m))).epsilon(1e-10));
        }
    }
}

TEST_CASE("partial-autocorrelation tests match direct evaluation") {
    const auto x = ar_series(21, 150, 0.4);
    const auto s = make_residual_series(x);
    const int n = 150;
    const int m = 6;
    std::vector<double> acf;
    for (int k = 1; k <= m; ++k) acf.push_back(oracle::rho(x, 1, 1, k));
    const auto pi = oracle::pacf_direct(acf, m);
    double plain = 0.0;
    double weighted = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double t = pi[static_cast<std::size_t>(k - 1)] * pi[static_cast<std::size_t>(k - 1)] / (n - k);
        plain += t;
        weighted += (m - k + 1.0) / m * t;
    }
    const auto mr = monti(s, m, 1, Which::residual);
    CHECK(mr.statistic == doctest::Approx(n * (n + 2.0) * plain).epsilon(1e-10));
    CHECK(chi_df(mr) == m - 1);
    CHECK(chi_df(monti(s, m, 1, Which::squared)) == m);
    CHECK(weighted_m(s, m, Which::residual, 1).statistic ==
          doctest::Approx(n * (n + 2.0) * weighted).epsilon(1e-10));
    // Monti by hand: n = 100, m = 1, pi_1 = 0.2.
    CHECK(100.0 * 102.0 * 0.04 / 99.0 == doctest::Approx(4.1212).epsilon(1e-4));
}

TEST_CASE("weighted Ljung-Box") {
    const auto x = ar_series(31, 100, 0.1);
    const auto s = make_residual_series(x);
    const int m = 5;
    double expected = 0.0;
    for (int k = 1; k <= m; ++k) {
        expected += (m - k + 1.0) / m * std::pow(oracle::rho(x, 2, 2, k), 2) / (100.0 - k);
    }
    const auto r = weighted_q(s, m, Which::squared, 3);
    CHECK(r.statistic == doctest::Approx(100.0 * 102.0 * expected).epsilon(1e-12));
    CHECK(r.order_correction == 0);
    // Hand value for rho = (0.1, -0.05), n = 100, m = 2.
    CHECK(100.0 * 102.0 * (1.0 * 0.01 / 99.0 + 0.5 * 0.0025 / 98.0) ==
          doctest::Approx(1.160405).epsilon(1e-6));
    // Gamma null built from weights 1, (m-1)/m, ..., 1/m.
    const auto g = std::get<GammaDist>(r.dist);
    double s1 = 0.0;
    double s2 = 0.0;
    for (int k = 1; k <= m; ++k) {
        s1 += (m - k + 1.0) / m;
        s2 += std::pow((m - k + 1.0) / m, 2);
    }
    CHECK(g.shape * g.scale == doctest::Approx(s1));
    CHECK(g.shape * g.scale * g.scale == doctest::Approx(2.0 * s2));
}

TEST_CASE("Li-Mak statistics against direct summation") {
    const std::vector<double> e{0.3, -1.2, 0.8, 2.1, -0.4, 0.05, -1.7, 0.9};
    const std::vector<double> h{1.1, 0.7, 1.9, 1.3, 2.4, 0.8, 1.0, 1.6};
    const int m = 3;
    const int b = 1;
    double plain = 0.0;
    double weighted = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double r = oracle::li_mak_rho(e, h, k);
        plain += r * r;
        weighted += (m - k + b + 1.0) / m * r * r;
    }
    const auto lb = li_mak(e, h, m, b, 0, false);
    const auto lbw = li_mak(e, h, m, b, 0, true);
    CHECK(lb.statistic == doctest::Approx(8.0 * plain).epsilon(1e-13));
    CHECK(lbw.statistic == doctest::Approx(8.0 * weighted).epsilon(1e-13));
    CHECK(chi_df(lb) == 2.0);
    CHECK(lb.name == StatName::Lb);
    CHECK(lbw.name == StatName::Lbw);
    CHECK_THROWS_AS((void)li_mak(e, h, 2, 1, 1, false), Error);
}

TEST_CASE("gamma moment matching") {
    const auto chi = gamma_from_moments(7.0, 7.0);
    CHECK(chi.shape == doctest::Approx(3.5));
    CHECK(chi.scale == doctest::Approx(2.0));
    const auto one = gamma_from_moments(1.0, 1.0);
    CHECK(one.shape == doctest::Approx(0.5));
    CHECK(one.scale == doctest::Approx(2.0));
    CHECK_THROWS_AS((void)gamma_from_moments(0.0, 1.0), Error);

    for (int m = 1; m <= 60; ++m) {
        for (int pq = 0; pq <= 3; ++pq) {
            if (2 * m + 5 - pq <= 0) continue;
            const auto c = cm_gamma_params(m, pq);
            const double mean = c.shape * c.scale;
            const auto g = gamma_from_moments(mean, mean * c.scale / 2.0);
            CHECK(std::abs(g.shape - c.shape) <= 1e-12 * c.shape);
            CHECK(std::abs(g.scale - c.scale) <= 1e-12 * c.scale);
        }
    }
}

TEST_CASE("Q_m for an AR(1)") {
    const std::vector<double> ar{0.5};
    const auto q = build_qm(ar, {}, 3);
    CHECK(q.x.rows() == 3);
    CHECK(q.x(0, 0) == doctest::Approx(1.0));
    CHECK(q.x(1, 0) == doctest::Approx(0.5));
    CHECK(q.x(2, 0) == doctest::Approx(0.25));
    CHECK(q.v(0, 0) == doctest::Approx(1.0 / (1.0 - 0.25)).epsilon(1e-12));
    CHECK_FALSE(q.approximate);

    const auto big = build_qm(ar, {}, 60);
    CHECK((big.qm * big.qm - big.qm).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(big.qm.trace() == doctest::Approx(1.0).epsilon(1e-10));

    const auto none = build_qm({}, {}, 5);
    CHECK(none.qm.isZero());

    CHECK_THROWS_AS((void)build_qm(std::vector<double>{1.2}, {}, 5), Error);
    CHECK_THROWS_AS((void)build_qm({}, std::vector<double>{-1.5}, 5), Error);
}

TEST_CASE("Q_m is a rank p+q projection for long lag windows") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> root(1.25, 3.0);
    std::uniform_real_distribution<double> sign(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        // Polynomials from real roots of modulus >= 1.25: coefficients of prod (1 - B / r).
        const int p = trial % 3;
        const int qq = (trial / 3) % 2;
        const auto poly = [&](int order) {
            std::vector<double> c{1.0};
            for (int i = 0; i < order; ++i) {
                const double r = (sign(rng) < 0 ? -1.0 : 1.0) * root(rng);
                std::vector<double> next(c.size() + 1, 0.0);
                for (std::size_t j = 0; j < c.size(); ++j) {
                    next[j] += c[j];
                    next[j + 1] -= c[j] / r;
                }
                c = next;
            }
            return c;
        };
        const auto a = poly(p);
        const auto t = poly(qq);
        std::vector<double> ar;
        for (std::size_t j = 1; j < a.size(); ++j) ar.push_back(-a[j]);
        std::vector<double> ma;
        for (std::size_t j = 1; j < t.size(); ++j) ma.push_back(t[j]);
        const int m = 50 + trial % 30;
        const auto q = build_qm(ar, ma, m);
        CHECK((q.qm * q.qm - q.qm).cwiseAbs().maxCoeff() < 1e-6);
        CHECK(q.qm.trace() == doctest::Approx(p + qq).epsilon(1e-6));

        const auto ev = cm_eigenvalues(q);
        double sum = 0.0;
        for (double v : ev) sum += v;
        const double target = 2.0 * m + 1.0 - (p + qq);
        CHECK(std::abs(sum - target) <= 0.01 * target);
        CHECK(static_cast<int>(ev.size()) == m + 1);
    }
}

TEST_CASE("residual PACF eigenvalues track the weight sum") {
    const auto q = build_qm(std::vector<double>{0.6}, {}, 40);
    const auto ev = residual_pacf_eigenvalues(q);
    double sum = 0.0;
    for (double v : ev) sum += v;
    CHECK(sum == doctest::Approx(40.0 / 2.0 - 1.0).epsilon(0.01));
    for (double v : ev) CHECK(v > -1e-10);
}

TEST_CASE("run_test dispatch") {
    const auto x = ar_series(3, 200, 0.0);
    const auto s = make_residual_series(x);
    TestContext ctx;
    ctx.series = &s;
    ctx.arma_order = 1;
    for (const auto name : all_statistics()) {
        if (name == StatName::Lb || name == StatName::Lbw) {
            CHECK_THROWS_AS((void)run_test(ctx, name, 5), Error);
            continue;
        }
        const auto r = run_test(ctx, name, 5);
        CHECK(r.name == name);
        CHECK(r.m == 5);
        CHECK(r.p_value >= 0.0);
        CHECK(r.p_value <= 1.0);
    }
    const std::vector<double> h(200, 1.0);
    ctx.garch = GarchContext{x, h, 1, 0};
    CHECK(run_test(ctx, StatName::Lb, 5).order_correction == 1);
}
