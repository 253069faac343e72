#include "portmanteau/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iostream>
#include <mutex>
#include <thread>

#include "portmanteau/error.hpp"

namespace pmt {

namespace {

bool needs_garch(StatName s) { return s == StatName::Lb || s == StatName::Lbw; }

struct Outcome {
    double p_value = 1.0;
    double statistic = 0.0;
    bool degenerate = false;
};

struct Replicate {
    bool failed = false;
    std::vector<Outcome> outcomes;  // [stat][m]
};

Replicate run_replicate(const Experiment& exp, const FitterSpec& fitter, int n,
                        std::uint64_t seed) {
    Replicate rep;
    try {
        const auto z = simulate(exp.generator, n, seed);
        const auto fit = apply_fitter(fitter, z);
        const auto series = fit.residual_series();
        TestContext ctx;
        ctx.series = &series;
        ctx.arma_order = fit.arma_order();
        if (fit.has_garch()) {
            ctx.garch = GarchContext{fit.residuals, fit.cond_var, static_cast<int>(fit.alpha.size()),
                                     static_cast<int>(fit.beta.size())};
        }
        rep.outcomes.reserve(exp.statistics.size() * exp.m_list.size());
        for (const auto stat : exp.statistics) {
            for (const int m : exp.m_list) {
                const auto r = run_test(ctx, stat, m);
                rep.outcomes.push_back({r.p_value, r.statistic, r.degenerate});
            }
        }
    } catch (const Error&) {
        rep.failed = true;
        rep.outcomes.clear();
    }
    return rep;
}

}  // namespace

FitterSpec resolve_fitter(const FitterSpec& fitter, const ModelSpec& generator) {
    if (fitter.kind != FitterKind::TrueModel) return fitter;
    FitterSpec out;
    if (const auto* s = std::get_if<ArmaSpec>(&generator.process)) {
        out.p = static_cast<int>(s->ar.size());
        out.q = static_cast<int>(s->ma.size());
        out.kind = out.q == 0 ? FitterKind::AR : FitterKind::ARMA;
        out.include_mean = s->mu != 0.0;
        return out;
    }
    if (const auto* s = std::get_if<GarchSpec>(&generator.process)) {
        out.kind = FitterKind::Garch;
        out.b = static_cast<int>(s->alpha.size());
        out.a = static_cast<int>(s->beta.size());
        return out;
    }
    if (const auto* s = std::get_if<ArmaGarchSpec>(&generator.process)) {
        if (!s->arma.ma.empty()) {
            throw Error(ErrorCode::InvalidSpec, "no true-model fitter for ARMA-GARCH with MA terms");
        }
        out.kind = FitterKind::ArGarch;
        out.p = static_cast<int>(s->arma.ar.size());
        out.b = static_cast<int>(s->garch.alpha.size());
        out.a = static_cast<int>(s->garch.beta.size());
        out.include_mean = s->arma.mu != 0.0;
        return out;
    }
    throw Error(ErrorCode::InvalidSpec, describe(generator) + " has no true-model fitter");
}

FitResult apply_fitter(const FitterSpec& fitter, std::span<const double> series) {
    switch (fitter.kind) {
        case FitterKind::None: {
            FitResult fit;
            fit.kind = FitKind::None;
            fit.residuals.assign(series.begin(), series.end());
            return fit;
        }
        case FitterKind::AR: return fit_ar(series, fitter.p, fitter.include_mean);
        case FitterKind::ARSelectAIC:
            return select_ar_order_aic(series, fitter.p_max, fitter.include_mean);
        case FitterKind::ARMA: return fit_arma_css(series, fitter.p, fitter.q, fitter.include_mean);
        case FitterKind::ArGarch:
            return fit_ar_garch(series, fitter.p, fitter.b, fitter.a, fitter.include_mean);
        case FitterKind::Garch: return fit_garch_qmle(series, fitter.b, fitter.a);
        case FitterKind::TrueModel: break;
    }
    throw Error(ErrorCode::InvalidSpec, "TrueModel fitter must be resolved first");
}

void validate(const Experiment& exp) {
    if (exp.replications < 1) throw Error(ErrorCode::InvalidConfig, "replications must be >= 1");
    if (exp.n_list.empty() || exp.m_list.empty() || exp.levels.empty() ||
        exp.statistics.empty()) {
        throw Error(ErrorCode::InvalidConfig, "n, m, levels and statistics must be non-empty");
    }
    try {
        validate(exp.generator);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidConfig, e.what());
    }
    const int n_min = *std::min_element(exp.n_list.begin(), exp.n_list.end());
    if (n_min < 10) throw Error(ErrorCode::InvalidConfig, "every n must be >= 10");
    for (const int m : exp.m_list) {
        if (m < 1 || 2 * m >= n_min) {
            throw Error(ErrorCode::InvalidConfig,
                        "every m must satisfy 1 <= m < min(n)/2, got m = " + std::to_string(m));
        }
    }
    for (const double level : exp.levels) {
        if (!(level > 0.0 && level < 1.0)) {
            throw Error(ErrorCode::InvalidConfig, "levels must lie in (0, 1)");
        }
    }
    FitterSpec fitter;
    try {
        fitter = resolve_fitter(exp.fitter, exp.generator);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidConfig, e.what());
    }
    const bool garch = fitter.kind == FitterKind::Garch || fitter.kind == FitterKind::ArGarch;
    const int arma_order = fitter.kind == FitterKind::ARSelectAIC ? fitter.p_max
                           : fitter.kind == FitterKind::None       ? 0
                                                                    : fitter.p + fitter.q;
    for (const auto s : exp.statistics) {
        if (needs_garch(s) && !garch) {
            throw Error(ErrorCode::InvalidConfig,
                        std::string(to_string(s)) + " needs a GARCH or AR-GARCH fitter");
        }
        for (const int m : exp.m_list) {
            const bool order_df = s == StatName::Q11 || s == StatName::Q_BP || s == StatName::M11;
            if (order_df && m <= arma_order) {
                throw Error(ErrorCode::InvalidConfig, std::string(to_string(s)) +
                                                          " needs m > p+q at m = " +
                                                          std::to_string(m));
            }
            if (needs_garch(s) && m <= fitter.b + fitter.a) {
                throw Error(ErrorCode::InvalidConfig, "Li-Mak needs m > b+a");
            }
        }
    }
}

bool McTable::same_results(const McTable& other) const {
    if (cells.size() != other.cells.size() || degenerate_count != other.degenerate_count ||
        fit_failures != other.fit_failures || mean_statistic != other.mean_statistic ||
        degenerate != other.degenerate || p_values != other.p_values) {
        return false;
    }
    for (const auto& [key, cell] : cells) {
        const auto it = other.cells.find(key);
        if (it == other.cells.end() || it->second.rejections != cell.rejections ||
            it->second.replications != cell.replications) {
            return false;
        }
    }
    return true;
}

McTable run_experiment(const Experiment& exp, const RunOptions& options) {
    validate(exp);
    const auto started = std::chrono::steady_clock::now();
    const auto fitter = resolve_fitter(exp.fitter, exp.generator);
    const auto reps = static_cast<std::size_t>(exp.replications);
    const std::size_t tasks = exp.n_list.size() * reps;
    std::vector<Replicate> results(tasks);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex log_mutex;
    const auto worker = [&] {
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= tasks) return;
            const std::size_t ni = task / reps;
            const std::size_t r = task % reps;
            results[task] = run_replicate(exp, fitter, exp.n_list[ni],
                                          derive_seed(exp.master_seed, ni, r));
            const std::size_t finished = done.fetch_add(1) + 1;
            if (options.progress && tasks >= 10 && finished % (tasks / 10) == 0) {
                const std::lock_guard lock(log_mutex);
                std::cerr << "[mc] " << describe(exp.generator) << ": " << finished << "/" << tasks
                          << " replicates\n";
            }
        }
    };
    const int workers = std::max(1, options.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    // Deterministic reduction in replicate order.
    McTable table;
    for (std::size_t ni = 0; ni < exp.n_list.size(); ++ni) {
        const int n = exp.n_list[ni];
        std::map<SeriesKey, int> valid;
        for (std::size_t r = 0; r < reps; ++r) {
            const auto& rep = results[ni * reps + r];
            if (rep.failed) {
                ++table.fit_failures;
                continue;
            }
            std::size_t idx = 0;
            for (const auto stat : exp.statistics) {
                for (const int m : exp.m_list) {
                    const auto& o = rep.outcomes[idx++];
                    const SeriesKey sk{stat, n, m};
                    for (const double level : exp.levels) {
                        auto& cell = table.cells[CellKey{stat, n, m, level}];
                        ++cell.replications;
                        if (o.p_value < level) ++cell.rejections;
                    }
                    if (o.degenerate) {
                        ++table.degenerate[sk];
                        ++table.degenerate_count;
                    } else {
                        table.mean_statistic[sk] += o.statistic;
                        ++valid[sk];
                    }
                    if (options.keep_p_values) table.p_values[sk].push_back(o.p_value);
                }
            }
        }
        for (const auto stat : exp.statistics) {
            for (const int m : exp.m_list) {
                const SeriesKey sk{stat, n, m};
                const int count = valid[sk];
                auto& mean = table.mean_statistic[sk];
                mean = count > 0 ? mean / count : 0.0;
                table.degenerate.try_emplace(sk, 0);
                // Cells exist even when every replicate failed.
                for (const double level : exp.levels) table.cells.try_emplace(CellKey{stat, n, m, level});
            }
        }
    }
    table.elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return table;
}

double rejection_frequency(std::span<const double> p_values, double level) {
    if (p_values.empty()) throw Error(ErrorCode::EmptySample, "no p-values");
    const auto count = std::count_if(p_values.begin(), p_values.end(),
                                     [level](double p) { return p < level; });
    return static_cast<double>(count) / static_cast<double>(p_values.size());
}

}  // namespace pmt
