#include "portmanteau/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pmt {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options) {
    const std::size_t d = x0.size();
    auto eval = [&](const std::vector<double>& x) {
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    NelderMeadResult result;
    if (d == 0) {
        result.x = x0;
        result.value = eval(x0);
        result.converged = true;
        return result;
    }

    std::vector<std::vector<double>> simplex(d + 1, x0);
    for (std::size_t i = 0; i < d; ++i) {
        const double step = x0[i] != 0.0 ? options.initial_step * std::max(1.0, std::abs(x0[i]))
                                         : options.initial_step;
        simplex[i + 1][i] += step;
    }
    std::vector<double> values(d + 1);
    for (std::size_t i = 0; i <= d; ++i) values[i] = eval(simplex[i]);

    std::vector<std::size_t> order(d + 1);
    std::vector<double> centroid(d);
    auto point = [&](double coef, const std::vector<double>& worst) {
        std::vector<double> p(d);
        for (std::size_t j = 0; j < d; ++j) p[j] = centroid[j] + coef * (worst[j] - centroid[j]);
        return p;
    };

    int it = 0;
    for (; it < options.max_iterations; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[d - 1];

        const double spread = values[worst] - values[best];
        bool done = std::isfinite(spread) &&
                    spread <= options.f_tol_rel * (std::abs(values[best]) + options.f_tol_abs);
        if (!done && options.x_tol > 0.0) {
            double diameter = 0.0;
            for (std::size_t i = 0; i <= d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[best][j]));
                }
            }
            done = diameter <= options.x_tol && std::isfinite(values[best]);
        }
        if (done) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i][j] / static_cast<double>(d);
        }

        const auto reflected = point(-1.0, simplex[worst]);
        const double fr = eval(reflected);
        if (fr < values[best]) {
            const auto expanded = point(-2.0, simplex[worst]);
            const double fe = eval(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second]) {
            simplex[worst] = reflected;
            values[worst] = fr;
            continue;
        }
        const bool outside = fr < values[worst];
        const auto contracted = point(outside ? -0.5 : 0.5, simplex[worst]);
        const double fc = eval(contracted);
        if (fc < std::min(fr, values[worst])) {
            simplex[worst] = contracted;
            values[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < d; ++j) {
                simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            }
            values[i] = eval(simplex[i]);
        }
    }

    const auto best = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    result.iterations = it;
    return result;
}

}  // namespace pmt
