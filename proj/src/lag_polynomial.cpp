#include "portmanteau/lag_polynomial.hpp"

#include <Eigen/Dense>
#include <complex>
#include <limits>

namespace pmt {

namespace {

// Eigenvalues of the companion matrix of z^d + c_1 z^{d-1} + ... + c_d, which
// are the reciprocals of the roots of 1 + c_1 B + ... + c_d B^d.
Eigen::VectorXcd reciprocal_roots(std::span<const double> c) {
    const auto d = static_cast<Eigen::Index>(c.size());
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) companion(0, j) = -c[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    return Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues();
}

double min_modulus(std::span<const double> c) {
    // Trailing zeros lower the degree.
    auto d = c.size();
    while (d > 0 && c[d - 1] == 0.0) --d;
    if (d == 0) return std::numeric_limits<double>::infinity();
    const auto inv = reciprocal_roots(c.first(d));
    double largest = 0.0;
    for (Eigen::Index i = 0; i < inv.size(); ++i) largest = std::max(largest, std::abs(inv(i)));
    return largest == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / largest;
}

}  // namespace

double ar_min_root_modulus(std::span<const double> ar) {
    std::vector<double> c(ar.begin(), ar.end());
    for (double& x : c) x = -x;
    return min_modulus(c);
}

double ma_min_root_modulus(std::span<const double> ma) { return min_modulus(ma); }

bool is_stationary(std::span<const double> ar) { return ar_min_root_modulus(ar) > 1.0; }
bool is_invertible(std::span<const double> ma) { return ma_min_root_modulus(ma) > 1.0; }

std::vector<double> inverse_ar_weights(std::span<const double> ar, int count) {
    std::vector<double> psi(static_cast<std::size_t>(std::max(count, 0)), 0.0);
    if (psi.empty()) return psi;
    psi[0] = 1.0;
    for (std::size_t i = 1; i < psi.size(); ++i) {
        for (std::size_t j = 1; j <= ar.size() && j <= i; ++j) psi[i] += ar[j - 1] * psi[i - j];
    }
    return psi;
}

std::vector<double> inverse_ma_weights(std::span<const double> ma, int count) {
    std::vector<double> psi(static_cast<std::size_t>(std::max(count, 0)), 0.0);
    if (psi.empty()) return psi;
    psi[0] = 1.0;
    for (std::size_t i = 1; i < psi.size(); ++i) {
        for (std::size_t j = 1; j <= ma.size() && j <= i; ++j) psi[i] -= ma[j - 1] * psi[i - j];
    }
    return psi;
}

std::vector<double> reflect_ma_roots(std::span<const double> ma) {
    auto d = ma.size();
    while (d > 0 && ma[d - 1] == 0.0) --d;
    if (d == 0) return {ma.begin(), ma.end()};
    const auto inv = reciprocal_roots(ma.first(d));
    // Rebuild prod_k (1 - r_k B) with every |r_k| <= 1.
    std::vector<std::complex<double>> poly{1.0};
    for (Eigen::Index k = 0; k < inv.size(); ++k) {
        std::complex<double> r = inv(k);
        if (std::abs(r) > 1.0) r = 1.0 / std::conj(r);
        std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= r * poly[i];
        }
        poly.swap(next);
    }
    std::vector<double> out(ma.size(), 0.0);
    for (std::size_t i = 1; i < poly.size(); ++i) out[i - 1] = poly[i].real();
    return out;
}

}  // namespace pmt
