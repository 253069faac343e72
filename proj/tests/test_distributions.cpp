#include <doctest.h>

#include <cmath>

#include "portmanteau/distributions.hpp"

using namespace pmt;

TEST_CASE("chi-square and gamma tails at known points") {
    // chi2_2 has survival exp(-x/2).
    for (double x : {0.1, 1.0, 3.0, 10.0}) {
        CHECK(chi_square_sf(x, 2.0) == doctest::Approx(std::exp(-x / 2.0)).epsilon(1e-13));
    }
    // chi2_1 survival is erfc(sqrt(x/2)).
    CHECK(chi_square_sf(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(chi_square_sf(0.0, 4.0) == 1.0);
    CHECK(chi_square_sf(-1.0, 4.0) == 1.0);
    // Gamma(1, s) is exponential with mean s.
    CHECK(gamma_sf(2.0, 1.0, 4.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
    // Gamma(k/2, 2) is chi2_k.
    CHECK(gamma_sf(7.3, 2.5, 2.0) == doctest::Approx(chi_square_sf(7.3, 5.0)).epsilon(1e-13));
}

TEST_CASE("survival dispatches on the null law") {
    CHECK(survival(ChiSquare{3.0}, 2.0) == doctest::Approx(chi_square_sf(2.0, 3.0)));
    CHECK(survival(GammaDist{1.5, 3.0}, 2.0) == doctest::Approx(gamma_sf(2.0, 1.5, 3.0)));
    // Equal unit weights reduce to chi2 with as many df.
    CHECK(survival(ChiSquareCombo{{1.0, 1.0, 1.0}}, 4.0) ==
          doctest::Approx(chi_square_sf(4.0, 3.0)).epsilon(1e-12));
}
