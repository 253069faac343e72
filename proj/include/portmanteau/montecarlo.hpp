#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "portmanteau/fitting.hpp"
#include "portmanteau/models.hpp"
#include "portmanteau/statistics.hpp"

namespace pmt {

enum class FitterKind { TrueModel, None, AR, ARSelectAIC, ARMA, ArGarch, Garch };

struct FitterSpec {
    FitterKind kind = FitterKind::TrueModel;
    int p = 0;
    int q = 0;
    int p_max = 4;
    int b = 0;
    int a = 0;
    bool include_mean = true;  ///< estimate a mean; false fits a known zero-mean model
};

/// Resolves TrueModel against the generating process; throws InvalidSpec when
/// the generator has no fittable counterpart. The resolved fitter estimates a
/// mean only when the generator's mean is non-zero.
[[nodiscard]] FitterSpec resolve_fitter(const FitterSpec& fitter, const ModelSpec& generator);

/// Applies a fitter to a series.
[[nodiscard]] FitResult apply_fitter(const FitterSpec& fitter, std::span<const double> series);

struct Experiment {
    ModelSpec generator;
    FitterSpec fitter;
    std::vector<int> n_list;
    std::vector<int> m_list;
    std::vector<double> levels{0.01, 0.05, 0.10};
    int replications = 1000;
    std::vector<StatName> statistics;
    std::uint64_t master_seed = 0;
};

/// Throws InvalidConfig when the experiment violates its invariants.
void validate(const Experiment& exp);

using CellKey = std::tuple<StatName, int, int, double>;  ///< statistic, n, m, level
using SeriesKey = std::tuple<StatName, int, int>;        ///< statistic, n, m

struct McCell {
    int rejections = 0;
    int replications = 0;
    [[nodiscard]] double frequency() const {
        return replications > 0 ? static_cast<double>(rejections) / replications : 0.0;
    }
};

struct McTable {
    std::map<CellKey, McCell> cells;
    std::map<SeriesKey, double> mean_statistic;  ///< over non-degenerate replicates
    std::map<SeriesKey, int> degenerate;         ///< degenerate samples per statistic
    std::map<SeriesKey, std::vector<double>> p_values;  ///< only with keep_p_values
    int degenerate_count = 0;
    int fit_failures = 0;
    double elapsed = 0.0;  ///< seconds

    /// Cells and counters only; elapsed time is excluded.
    [[nodiscard]] bool same_results(const McTable& other) const;
};

struct RunOptions {
    int workers = 1;
    bool keep_p_values = false;
    bool progress = false;  ///< log progress to stderr
};

/**
 * @brief Runs every replicate of the experiment.
 *
 * Replicate r at sample size index i uses derive_seed(master_seed, i, r), so
 * the table does not depend on the worker count. Replicates whose fit fails
 * are excluded and counted in fit_failures.
 */
[[nodiscard]] McTable run_experiment(const Experiment& exp, const RunOptions& options = {});

/// Fraction of p-values strictly below `level`. Throws EmptySample.
[[nodiscard]] double rejection_frequency(std::span<const double> p_values, double level);

}  // namespace pmt
