#pragma once

#include <span>
#include <vector>

namespace pmt {

// AR polynomials are 1 - phi_1 B - ... - phi_p B^p and MA polynomials are
// 1 + theta_1 B + ... + theta_q B^q.

/// Smallest modulus among the roots of the AR polynomial (infinity when p = 0).
[[nodiscard]] double ar_min_root_modulus(std::span<const double> ar);
[[nodiscard]] double ma_min_root_modulus(std::span<const double> ma);

[[nodiscard]] bool is_stationary(std::span<const double> ar);
[[nodiscard]] bool is_invertible(std::span<const double> ma);

/// Coefficients psi_0..psi_{count-1} of 1 / phi(B).
[[nodiscard]] std::vector<double> inverse_ar_weights(std::span<const double> ar, int count);
/// Coefficients of 1 / theta(B).
[[nodiscard]] std::vector<double> inverse_ma_weights(std::span<const double> ma, int count);

/// Replaces MA roots inside the unit circle by their reciprocals.
[[nodiscard]] std::vector<double> reflect_ma_roots(std::span<const double> ma);

}  // namespace pmt
