#pragma once

#include <functional>
#include <vector>

namespace pmt {

struct NelderMeadOptions {
    int max_iterations = 2000;
    /// Stop when max f - min f over the simplex <= f_tol_rel * (|f_best| + f_tol_abs).
    double f_tol_rel = 1e-10;
    double f_tol_abs = 1e-10;
    /// Also stop when every vertex lies within x_tol of the best one (0 disables).
    double x_tol = 0.0;
    double initial_step = 0.1;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimization. Non-finite objective values are treated as +inf.
[[nodiscard]] NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                           std::vector<double> x0,
                                           const NelderMeadOptions& options = {});

}  // namespace pmt
