#include <doctest.h>

#include <cmath>
#include <numeric>

#include "portmanteau/error.hpp"
#include "portmanteau/fitting.hpp"
#include "portmanteau/models.hpp"

using namespace pmt;

namespace {

std::vector<double> sim_arma(std::vector<double> ar, std::vector<double> ma, double mu, int n,
                             std::uint64_t seed) {
    ModelSpec s;
    s.process = ArmaSpec{std::move(ar), std::move(ma), mu};
    return simulate(s, n, seed);
}

}  // namespace

TEST_CASE("AR(1) OLS is consistent") {
    const auto z = sim_arma({0.6}, {}, 1.0, 20000, 1);
    const auto fit = fit_ar(z, 1);
    CHECK(fit.ar.at(0) == doctest::Approx(0.6).epsilon(0.03));
    CHECK(fit.mu == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fit.sigma2 == doctest::Approx(1.0).epsilon(0.03));
    CHECK(fit.residuals.size() == z.size() - 1);
    CHECK(fit.kind == FitKind::AR);
    CHECK(fit.arma_order() == 1);
}

TEST_CASE("AR(0) residuals are the demeaned series") {
    const std::vector<double> z{1, 3, 2, 5, 4, 6, 2, 3, 1, 3, 4, 2};
    const auto fit = fit_ar(z, 0);
    const double mean = std::accumulate(z.begin(), z.end(), 0.0) / 12.0;
    REQUIRE(fit.residuals.size() == z.size());
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(fit.residuals[i] == doctest::Approx(z[i] - mean));
    const auto raw = fit_ar(z, 0, false);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(raw.residuals[i] == doctest::Approx(z[i]));
}

TEST_CASE("AR fit errors") {
    const std::vector<double> constant(100, 2.5);
    try {
        (void)fit_ar(constant, 1);
        FAIL("expected SingularDesign");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularDesign);
    }
    const auto z = sim_arma({0.5}, {}, 0.0, 30, 2);
    CHECK_THROWS_AS((void)fit_ar(z, 3), Error);
}

TEST_CASE("zero-mean AR fit omits the constant") {
    const auto z = sim_arma({0.4}, {}, 0.0, 5000, 3);
    const auto fit = fit_ar(z, 1, false);
    CHECK(fit.mu == 0.0);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 1; t < z.size(); ++t) {
        num += z[t] * z[t - 1];
        den += z[t - 1] * z[t - 1];
    }
    CHECK(fit.ar.at(0) == doctest::Approx(num / den).epsilon(1e-10));
}

TEST_CASE("AIC picks the generating order") {
    const auto z = sim_arma({0.5, -0.3}, {}, 0.0, 3000, 4);
    const auto fit = select_ar_order_aic(z, 4);
    CHECK(fit.ar.size() == 2);
    CHECK(fit.residuals.size() == z.size() - 2);
}

TEST_CASE("CSS with q = 0 agrees with OLS") {
    const auto z = sim_arma({0.5}, {}, 0.3, 1000, 5);
    const auto ols = fit_ar(z, 1);
    const auto css = fit_arma_css(z, 1, 0);
    CHECK(css.ar.at(0) == doctest::Approx(ols.ar.at(0)).epsilon(1e-4));
    CHECK(css.mu == doctest::Approx(ols.mu).epsilon(1e-3));
    CHECK(css.kind == FitKind::ARMA);
}

TEST_CASE("CSS recovers an MA(1)") {
    const auto z = sim_arma({}, {-0.5}, 0.0, 20000, 6);
    const auto fit = fit_arma_css(z, 0, 1);
    CHECK(fit.ma.at(0) == doctest::Approx(-0.5).epsilon(0.05));
    CHECK(fit.converged);
    const auto zero = fit_arma_css(z, 0, 1, false);
    CHECK(zero.mu == 0.0);
    CHECK(zero.ma.at(0) == doctest::Approx(-0.5).epsilon(0.05));
}

TEST_CASE("CSS with p = q = 0 estimates the mean") {
    const std::vector<double> z{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 2, 4};
    const auto fit = fit_arma_css(z, 0, 0);
    CHECK(fit.mu == doctest::Approx(61.0 / 12.0).epsilon(1e-6));
}

TEST_CASE("GARCH QMLE is consistent for ARCH(1)") {
    ModelSpec g;
    g.process = GarchSpec{0.2, {0.4}, {}};
    const auto z = simulate(g, 20000, 7);
    const auto fit = fit_garch_qmle(z, 1, 0);
    CHECK(fit.omega == doctest::Approx(0.2).epsilon(0.1));
    CHECK(fit.alpha.at(0) == doctest::Approx(0.4).epsilon(0.15));
    CHECK(fit.has_garch());
    REQUIRE(fit.standardized.size() == z.size());
    for (std::size_t t = 0; t < z.size(); t += 997) {
        CHECK(fit.standardized[t] == doctest::Approx(z[t] / std::sqrt(fit.cond_var[t])));
    }
    const auto h = garch_variances(fit.residuals, fit.omega, fit.alpha, fit.beta,
                                   fit.cond_var.front());
    CHECK(h.size() == fit.cond_var.size());
}

TEST_CASE("AR-GARCH two-step fit") {
    ModelSpec g;
    g.process = ArmaGarchSpec{ArmaSpec{{0.3}, {}, 0.0}, GarchSpec{0.2, {0.3}, {}}};
    const auto z = simulate(g, 10000, 8);
    const auto fit = fit_ar_garch(z, 1, 1, 0, false);
    CHECK(fit.kind == FitKind::ArGarch);
    CHECK(fit.ar.at(0) == doctest::Approx(0.3).epsilon(0.15));
    CHECK(fit.alpha.at(0) == doctest::Approx(0.3).epsilon(0.25));
    CHECK(fit.arma_order() == 1);
}
