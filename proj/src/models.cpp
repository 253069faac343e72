#include "portmanteau/models.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/student_t_distribution.hpp>
#include <cmath>
#include <numeric>

#include "portmanteau/error.hpp"
#include "portmanteau/lag_polynomial.hpp"

namespace pmt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void validate_arma(const ArmaSpec& s) {
    if (!is_stationary(s.ar)) throw Error(ErrorCode::InvalidSpec, "AR part is not stationary");
    if (!is_invertible(s.ma)) throw Error(ErrorCode::InvalidSpec, "MA part is not invertible");
    if (!std::isfinite(s.mu)) throw Error(ErrorCode::InvalidSpec, "mu is not finite");
}

void validate_garch(const GarchSpec& s) {
    if (!(s.omega > 0.0)) throw Error(ErrorCode::InvalidSpec, "GARCH omega must be positive");
    double total = 0.0;
    for (double x : s.alpha) {
        if (!(x >= 0.0)) throw Error(ErrorCode::InvalidSpec, "GARCH alpha must be >= 0");
        total += x;
    }
    for (double x : s.beta) {
        if (!(x >= 0.0)) throw Error(ErrorCode::InvalidSpec, "GARCH beta must be >= 0");
        total += x;
    }
    if (!(total < 1.0)) throw Error(ErrorCode::InvalidSpec, "GARCH persistence must be < 1");
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Index helper over a zero-initialized history: value at t - lag, or 0 before start.
struct History {
    std::vector<double> v;
    double at(std::size_t t, std::size_t lag) const { return t >= lag ? v[t - lag] : 0.0; }
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

void validate(const ModelSpec& spec) {
    if (spec.burn_in < 0) throw Error(ErrorCode::InvalidSpec, "burn_in must be >= 0");
    if (spec.innovation.kind == InnovationKind::StudentT && !(spec.innovation.df > 2.0)) {
        throw Error(ErrorCode::InvalidSpec, "Student t needs df > 2 for unit variance");
    }
    if (!std::isfinite(spec.innovation.slant)) {
        throw Error(ErrorCode::InvalidSpec, "skew-normal slant is not finite");
    }
    struct V {
        void operator()(const ArmaSpec& s) const { validate_arma(s); }
        void operator()(const GarchSpec& s) const { validate_garch(s); }
        void operator()(const ArmaGarchSpec& s) const {
            validate_arma(s.arma);
            validate_garch(s.garch);
        }
        void operator()(const TarSpec&) const {}
        void operator()(const StarSpec& s) const {
            if (s.noise_lag < 0) throw Error(ErrorCode::InvalidSpec, "noise_lag must be >= 0");
        }
        void operator()(const SqarSpec& s) const {
            if (!(std::abs(s.phi) < 1.0)) throw Error(ErrorCode::InvalidSpec, "|phi| must be < 1");
        }
        void operator()(const BilinearSpec& s) const {
            if (s.model_id < 1 || s.model_id > 8) {
                throw Error(ErrorCode::InvalidSpec, "bilinear model id must be 1..8");
            }
        }
    };
    std::visit(V{}, spec.process);
}

std::string describe(const ModelSpec& spec) {
    struct V {
        std::string operator()(const ArmaSpec& s) const {
            return "ARMA(" + std::to_string(s.ar.size()) + "," + std::to_string(s.ma.size()) + ")";
        }
        std::string operator()(const GarchSpec& s) const {
            return "GARCH(" + std::to_string(s.alpha.size()) + "," + std::to_string(s.beta.size()) +
                   ")";
        }
        std::string operator()(const ArmaGarchSpec& s) const {
            return (*this)(s.arma) + "-" + (*this)(s.garch);
        }
        std::string operator()(const TarSpec&) const { return "TAR(1)"; }
        std::string operator()(const StarSpec&) const { return "STAR"; }
        std::string operator()(const SqarSpec&) const { return "SQAR"; }
        std::string operator()(const BilinearSpec& s) const {
            return "Model" + std::to_string(s.model_id);
        }
    };
    return std::visit(V{}, spec.process);
}

// ---------------------------------------------------------------------------

InnovationStream::InnovationStream(InnovationSpec spec, std::uint64_t seed)
    : spec_(spec), engine_(splitmix64(seed)) {
    if (spec_.kind == InnovationKind::SkewNormal) {
        const double pi = boost::math::constants::pi<double>();
        skew_delta_ = spec_.slant / std::sqrt(1.0 + spec_.slant * spec_.slant);
        skew_mean_ = skew_delta_ * std::sqrt(2.0 / pi);
        skew_sd_ = std::sqrt(1.0 - 2.0 * skew_delta_ * skew_delta_ / pi);
    }
}

double InnovationStream::next_normal() {
    boost::random::normal_distribution<double> normal;
    return normal(engine_);
}

double InnovationStream::next() {
    switch (spec_.kind) {
        case InnovationKind::Normal: return next_normal();
        case InnovationKind::StudentT: {
            boost::random::student_t_distribution<double> t(spec_.df);
            return t(engine_) * std::sqrt((spec_.df - 2.0) / spec_.df);
        }
        case InnovationKind::SkewNormal: {
            // Azzalini's representation: delta |U0| + sqrt(1 - delta^2) U1.
            const double u0 = next_normal();
            const double u1 = next_normal();
            const double x = skew_delta_ * std::abs(u0) +
                             std::sqrt(1.0 - skew_delta_ * skew_delta_) * u1;
            return (x - skew_mean_) / skew_sd_;
        }
    }
    return 0.0;
}

std::vector<double> innovation_sample(const InnovationSpec& spec, std::uint64_t seed,
                                      std::size_t count) {
    InnovationStream stream(spec, seed);
    std::vector<double> out(count);
    for (double& x : out) x = stream.next();
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Each generator fills `total` values of the series into z.
void run_arma_garch(const ArmaSpec* arma, const GarchSpec* garch, InnovationStream& rng,
                    std::size_t total, std::vector<double>& z) {
    History eps{std::vector<double>(total)};
    History dev{std::vector<double>(total)};  // z - mu
    std::vector<double> h(total);
    double unconditional = 1.0;
    if (garch != nullptr) {
        const double persistence = std::accumulate(garch->alpha.begin(), garch->alpha.end(), 0.0) +
                                   std::accumulate(garch->beta.begin(), garch->beta.end(), 0.0);
        unconditional = garch->omega / (1.0 - persistence);
    }
    for (std::size_t t = 0; t < total; ++t) {
        double e = rng.next();
        if (garch != nullptr) {
            double var = garch->omega;
            for (std::size_t i = 1; i <= garch->alpha.size(); ++i) {
                const double past = t >= i ? eps.v[t - i] * eps.v[t - i] : unconditional;
                var += garch->alpha[i - 1] * past;
            }
            for (std::size_t j = 1; j <= garch->beta.size(); ++j) {
                var += garch->beta[j - 1] * (t >= j ? h[t - j] : unconditional);
            }
            h[t] = var;
            e *= std::sqrt(var);
        }
        eps.v[t] = e;
        double x = e;
        if (arma != nullptr) {
            for (std::size_t i = 1; i <= arma->ar.size(); ++i) x += arma->ar[i - 1] * dev.at(t, i);
            for (std::size_t j = 1; j <= arma->ma.size(); ++j) x += arma->ma[j - 1] * eps.at(t, j);
        }
        dev.v[t] = x;
        z[t] = x + (arma != nullptr ? arma->mu : 0.0);
    }
}

void run_tar(const TarSpec& s, InnovationStream& rng, std::size_t total, std::vector<double>& z) {
    double prev = 0.0;
    for (std::size_t t = 0; t < total; ++t) {
        const double e = rng.next();
        const double x = prev <= s.threshold ? s.phi0_low + s.phi1_low * prev + e
                                             : s.phi0_high + s.phi1_high * prev + e;
        z[t] = x;
        prev = x;
    }
}

void run_star(const StarSpec& s, InnovationStream& rng, std::size_t total,
              std::vector<double>& z) {
    History eps{std::vector<double>(total)};
    double prev = 0.0;
    for (std::size_t t = 0; t < total; ++t) {
        eps.v[t] = rng.next();
        const double f = logistic(prev);
        const double x = s.coef_low * prev * (1.0 - f) + s.coef_high * prev * f +
                         eps.at(t, static_cast<std::size_t>(s.noise_lag));
        z[t] = x;
        prev = x;
    }
}

void run_sqar(const SqarSpec& s, InnovationStream& rng, std::size_t total,
              std::vector<double>& z) {
    double y = 0.0;
    for (std::size_t t = 0; t < total; ++t) {
        y = s.phi * y + rng.next();
        z[t] = y * y + rng.next();
    }
}

void run_bilinear(const BilinearSpec& s, InnovationStream& rng, std::size_t total,
                  std::vector<double>& z) {
    History e{std::vector<double>(total)};
    History x{std::vector<double>(total)};
    for (std::size_t t = 0; t < total; ++t) {
        e.v[t] = rng.next();
        const double e0 = e.v[t];
        const double e1 = e.at(t, 1);
        const double e2 = e.at(t, 2);
        const double z1 = x.at(t, 1);
        const double z2 = x.at(t, 2);
        double v = 0.0;
        switch (s.model_id) {
            case 1: v = e0 - 0.4 * e1 + 0.3 * e2 + 0.5 * e0 * e2; break;
            case 2: v = e0 - 0.3 * e1 + 0.2 * e2 + 0.4 * e0 * e2 - 0.25 * e2 * e2; break;
            case 3: v = 0.4 * z1 - 0.3 * z2 + 0.5 * z1 * e1 + e0; break;
            case 4: v = 0.4 * z1 - 0.3 * z2 + 0.5 * z1 * e1 + 0.8 * e1 + e0; break;
            case 5: v = 0.4 * z1 - 0.3 * z2 + (0.8 + 0.5 * z1) * e1 + e0; break;
            case 6: v = 0.5 - (0.4 - 0.4 * e1) * z1 + e0; break;
            case 7: v = 0.8 * e2 * e2 + e0; break;
            case 8: v = e0 + 0.3 * e1 + (0.2 + 0.4 * e1 - 0.25 * e2) * e2; break;
            default: throw Error(ErrorCode::InvalidSpec, "bilinear model id must be 1..8");
        }
        x.v[t] = v;
        z[t] = v;
    }
}

}  // namespace

std::vector<double> simulate(const ModelSpec& spec, int n, std::uint64_t seed) {
    if (n < 10) throw Error(ErrorCode::InvalidSpec, "n must be at least 10");
    validate(spec);
    const auto total = static_cast<std::size_t>(n) + static_cast<std::size_t>(spec.burn_in);
    std::vector<double> z(total);
    InnovationStream rng(spec.innovation, seed);

    struct V {
        InnovationStream& rng;
        std::size_t total;
        std::vector<double>& z;
        void operator()(const ArmaSpec& s) const { run_arma_garch(&s, nullptr, rng, total, z); }
        void operator()(const GarchSpec& s) const { run_arma_garch(nullptr, &s, rng, total, z); }
        void operator()(const ArmaGarchSpec& s) const {
            run_arma_garch(&s.arma, &s.garch, rng, total, z);
        }
        void operator()(const TarSpec& s) const { run_tar(s, rng, total, z); }
        void operator()(const StarSpec& s) const { run_star(s, rng, total, z); }
        void operator()(const SqarSpec& s) const { run_sqar(s, rng, total, z); }
        void operator()(const BilinearSpec& s) const { run_bilinear(s, rng, total, z); }
    };
    std::visit(V{rng, total, z}, spec.process);

    std::vector<double> out(z.begin() + spec.burn_in, z.end());
    for (std::size_t t = 0; t < out.size(); ++t) {
        if (!std::isfinite(out[t])) {
            throw Error(ErrorCode::NonFinite, describe(spec) + " path overflowed at t = " +
                                                  std::to_string(t));
        }
    }
    return out;
}

}  // namespace pmt
