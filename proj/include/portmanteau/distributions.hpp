#pragma once

#include <variant>
#include <vector>

namespace pmt {

struct ChiSquare {
    double df = 1.0;
};

/// Gamma law with E = shape * scale, Var = shape * scale^2.
struct GammaDist {
    double shape = 1.0;
    double scale = 1.0;
};

/// sum_l weights[l] * chi2_1, evaluated through a moment-matched gamma.
struct ChiSquareCombo {
    std::vector<double> weights;
};

using NullDistribution = std::variant<ChiSquare, GammaDist, ChiSquareCombo>;

/// Upper tail P(X > x); returns 1 for x <= 0.
[[nodiscard]] double chi_square_sf(double x, double df);
[[nodiscard]] double gamma_sf(double x, double shape, double scale);
[[nodiscard]] double survival(const NullDistribution& dist, double x);

}  // namespace pmt
