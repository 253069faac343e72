#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace pmt {

/// (z_t - mu) = sum phi_i (z_{t-i} - mu) + e_t + sum theta_j e_{t-j}
struct ArmaSpec {
    std::vector<double> ar;
    std::vector<double> ma;
    double mu = 0.0;
};

/// e_t = sigma_t xi_t, sigma_t^2 = omega + sum alpha_i e_{t-i}^2 + sum beta_j sigma_{t-j}^2
struct GarchSpec {
    double omega = 1.0;
    std::vector<double> alpha;
    std::vector<double> beta;
};

struct ArmaGarchSpec {
    ArmaSpec arma;
    GarchSpec garch;
};

/// Two-regime TAR(1); the lower regime applies when z_{t-1} <= threshold.
struct TarSpec {
    double phi0_low = 0.0;
    double phi1_low = 0.0;
    double phi0_high = 0.0;
    double phi1_high = 0.0;
    double threshold = 0.0;
};

/// z_t = a z_{t-1} (1 - F(z_{t-1})) + b z_{t-1} F(z_{t-1}) + e_{t-noise_lag}, F logistic.
struct StarSpec {
    double coef_low = 0.0;
    double coef_high = 0.0;
    int noise_lag = 2;
};

/// z_t = y_t^2 + e_t with y_t = phi y_{t-1} + v_t, v independent of e.
struct SqarSpec {
    double phi = 0.6;
};

/// The eight fixed nonlinear (bilinear / Volterra-type) benchmark models.
struct BilinearSpec {
    int model_id = 1;
};

using Process = std::variant<ArmaSpec, GarchSpec, ArmaGarchSpec, TarSpec, StarSpec, SqarSpec,
                             BilinearSpec>;

enum class InnovationKind { Normal, StudentT, SkewNormal };

/// Innovation law; every kind is scaled to mean 0 and variance 1.
struct InnovationSpec {
    InnovationKind kind = InnovationKind::Normal;
    double df = 5.0;     ///< StudentT degrees of freedom
    double slant = 1.5;  ///< SkewNormal shape
};

struct ModelSpec {
    Process process = ArmaSpec{};
    InnovationSpec innovation;
    int burn_in = 500;
};

/// Throws InvalidSpec when the process violates its parameter constraints.
void validate(const ModelSpec& spec);

/// Short human-readable label, e.g. "ARMA(1,0)".
[[nodiscard]] std::string describe(const ModelSpec& spec);

/// Seed for stream `stream`, item `index` derived from a master seed (splitmix64 mixing).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                        std::uint64_t index);

/// Unit-variance innovation draws from a seeded generator.
class InnovationStream {
public:
    InnovationStream(InnovationSpec spec, std::uint64_t seed);

    double next();
    /// Independent N(0,1) draw from the same generator.
    double next_normal();

private:
    InnovationSpec spec_;
    std::mt19937_64 engine_;
    double skew_mean_ = 0.0;
    double skew_sd_ = 1.0;
    double skew_delta_ = 0.0;
};

/// Fills `count` draws from a fresh stream.
[[nodiscard]] std::vector<double> innovation_sample(const InnovationSpec& spec, std::uint64_t seed,
                                                    std::size_t count);

/**
 * @brief Simulates n observations after discarding `burn_in` warm-up values.
 *
 * Deterministic in (spec, n, seed). Throws InvalidSpec for n < 10 or invalid
 * parameters, NonFinite if the path overflows.
 */
[[nodiscard]] std::vector<double> simulate(const ModelSpec& spec, int n, std::uint64_t seed);

}  // namespace pmt
