#include "portmanteau/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "portmanteau/error.hpp"

namespace pmt {

double gamma_sf(double x, double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw Error(ErrorCode::InvalidOrder, "gamma parameters must be positive");
    }
    if (std::isnan(x)) return 0.0;
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return boost::math::gamma_q(shape, x / scale);
}

double chi_square_sf(double x, double df) { return gamma_sf(x, df / 2.0, 2.0); }

double survival(const NullDistribution& dist, double x) {
    struct Visitor {
        double x;
        double operator()(const ChiSquare& d) const { return chi_square_sf(x, d.df); }
        double operator()(const GammaDist& d) const { return gamma_sf(x, d.shape, d.scale); }
        double operator()(const ChiSquareCombo& d) const {
            double s1 = 0.0;
            double s2 = 0.0;
            for (double w : d.weights) {
                s1 += w;
                s2 += w * w;
            }
            // a * chi2_b with a = s2/s1, b = s1^2/s2
            return gamma_sf(x, s1 * s1 / (2.0 * s2), 2.0 * s2 / s1);
        }
    };
    return std::visit(Visitor{x}, dist);
}

}  // namespace pmt
