#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "portmanteau/config.hpp"
#include "portmanteau/error.hpp"
#include "portmanteau/montecarlo.hpp"
#include "portmanteau/returns_file.hpp"

namespace {

using pmt::Error;
using pmt::ErrorCode;
using pmt::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitFitFailure = 3;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string describe_null(const pmt::NullDistribution& dist) {
    if (const auto* c = std::get_if<pmt::ChiSquare>(&dist)) return "chi2(" + fmt(c->df) + ")";
    if (const auto* g = std::get_if<pmt::GammaDist>(&dist)) {
        return "gamma(" + fmt(g->shape) + ";" + fmt(g->scale) + ")";
    }
    return "chi2-combination";
}

json read_json_arg(const std::string& arg) {
    std::string text = arg;
    if (!arg.empty() && arg.front() != '{') {
        std::ifstream in(arg);
        if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open '" + arg + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("invalid JSON: ") + e.what());
    }
}

std::uint64_t effective_seed(std::uint64_t flag) {
    if (const char* env = std::getenv("PORTMANTEAU_SEED"); env != nullptr && *env != '\0') {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidConfig, "PORTMANTEAU_SEED is not an unsigned integer");
        }
    }
    return flag;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw Error(ErrorCode::InvalidConfig, "cannot write '" + path + "'");
    return file;
}

pmt::FitResult fit_series(const std::string& spec, bool zero_mean,
                          const std::vector<double>& values) {
    auto fitter = pmt::parse_fit_option(spec);
    fitter.include_mean = !zero_mean;
    if (fitter.kind == pmt::FitterKind::TrueModel) {
        throw Error(ErrorCode::InvalidConfig, "fit spec 'true' is only meaningful in experiments");
    }
    return pmt::apply_fitter(fitter, values);
}

json fit_to_json(const pmt::FitResult& fit) {
    json j{{"ar", fit.ar},
           {"ma", fit.ma},
           {"mu", fit.mu},
           {"sigma2", fit.sigma2},
           {"loglik", fit.loglik},
           {"aic", fit.aic},
           {"converged", fit.converged},
           {"iterations", fit.iterations},
           {"residuals", fit.residuals.size()}};
    if (fit.has_garch()) {
        j["omega"] = fit.omega;
        j["alpha"] = fit.alpha;
        j["beta"] = fit.beta;
        j["boundary"] = fit.boundary;
    }
    if (fit.reflected_ma) j["reflected_ma"] = true;
    return j;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string model;
    int n = 500;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
    const auto spec = pmt::model_spec_from_json(read_json_arg(args.model));
    const auto z = pmt::simulate(spec, args.n, effective_seed(args.seed));
    std::ofstream file;
    pmt::write_series_csv(open_output(args.out, file), z);
    return kExitOk;
}

struct FitArgs {
    std::string input;
    std::string fit = "none";
    bool zero_mean = false;
    std::string format = "json";
};

int cmd_fit(const FitArgs& args) {
    const auto data = pmt::read_returns_file(args.input);
    pmt::FitResult fit;
    try {
        fit = fit_series(args.fit, args.zero_mean, data.values);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidConfig) throw;
        std::cerr << "fit failed: " << e.what() << '\n';
        return kExitFitFailure;
    }
    const auto j = fit_to_json(fit);
    if (args.format == "json") {
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "parameter,value\n";
        const auto emit_vec = [](const char* name, const std::vector<double>& v) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                std::cout << name << i + 1 << ',' << fmt(v[i]) << '\n';
            }
        };
        std::cout << "mu," << fmt(fit.mu) << '\n';
        emit_vec("ar", fit.ar);
        emit_vec("ma", fit.ma);
        std::cout << "sigma2," << fmt(fit.sigma2) << '\n';
        if (fit.has_garch()) {
            std::cout << "omega," << fmt(fit.omega) << '\n';
            emit_vec("alpha", fit.alpha);
            emit_vec("beta", fit.beta);
        }
        std::cout << "loglik," << fmt(fit.loglik) << "\naic," << fmt(fit.aic) << '\n';
    }
    return kExitOk;
}

struct TestArgs {
    std::string input;
    std::string fit = "none";
    bool zero_mean = false;
    std::vector<int> lags{10};
    std::vector<std::string> stats;
    std::string format = "csv";
};

int cmd_test(const TestArgs& args) {
    const auto data = pmt::read_returns_file(args.input);
    pmt::FitResult fit;
    try {
        fit = fit_series(args.fit, args.zero_mean, data.values);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidConfig) throw;
        std::cerr << "fit failed: " << e.what() << '\n';
        return kExitFitFailure;
    }

    std::vector<pmt::StatName> stats;
    for (const auto& s : args.stats) stats.push_back(pmt::stat_from_string(s));
    if (stats.empty()) {
        using S = pmt::StatName;
        stats = fit.has_garch()
                    ? std::vector<S>{S::Cm, S::Q12, S::Dt22, S::Q22, S::Qw22, S::Mw22, S::Lb, S::Lbw}
                    : std::vector<S>{S::Cm, S::Q11, S::Q22, S::Q12, S::Dt22, S::Qw22, S::Mw22};
    }

    const auto series = fit.residual_series();
    pmt::TestContext ctx;
    ctx.series = &series;
    ctx.arma_order = fit.arma_order();
    if (fit.has_garch()) {
        ctx.garch = pmt::GarchContext{fit.residuals, fit.cond_var,
                                      static_cast<int>(fit.alpha.size()),
                                      static_cast<int>(fit.beta.size())};
    }

    std::vector<pmt::TestReport> reports;
    for (const auto s : stats) {
        for (const int m : args.lags) reports.push_back(pmt::run_test(ctx, s, m));
    }

    if (args.format == "json") {
        json rows = json::array();
        for (const auto& r : reports) {
            rows.push_back({{"statistic", std::string(pmt::to_string(r.name))},
                            {"m", r.m},
                            {"value", r.statistic},
                            {"p_value", r.p_value},
                            {"null", describe_null(r.dist)},
                            {"degenerate", r.degenerate}});
        }
        std::cout << json{{"n", series.n()}, {"fit", args.fit}, {"tests", rows}}.dump(2) << '\n';
    } else {
        std::cout << "statistic,m,value,p_value,null\n";
        for (const auto& r : reports) {
            std::cout << pmt::to_string(r.name) << ',' << r.m << ',' << fmt(r.statistic) << ','
                      << fmt(r.p_value) << ',' << describe_null(r.dist) << '\n';
        }
    }
    return kExitOk;
}

struct McArgs {
    std::string config;
    int workers = 1;
    std::string out = "mc";
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

int cmd_mc(const McArgs& args) {
    auto exp = pmt::experiment_from_json(read_json_arg(args.config));
    if (args.seed || std::getenv("PORTMANTEAU_SEED") != nullptr) {
        exp.master_seed = effective_seed(args.seed.value_or(0));
    }
    pmt::RunOptions options;
    options.workers = args.workers;
    options.progress = !args.quiet;
    const auto table = pmt::run_experiment(exp, options);

    const auto write = [](const std::string& path, const auto& writer) {
        std::ofstream out(path);
        if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write '" + path + "'");
        writer(out);
    };
    write(args.out + ".csv", [&](std::ostream& o) { pmt::write_mc_csv(o, table); });
    write(args.out + ".json", [&](std::ostream& o) { o << pmt::to_json(table).dump(2) << '\n'; });
    write(args.out + "_plot.csv", [&](std::ostream& o) { pmt::write_plot_csv(o, table); });
    std::cerr << "wrote " << args.out << ".csv, " << args.out << ".json, " << args.out
              << "_plot.csv (" << fmt(table.elapsed) << " s, " << table.fit_failures
              << " fit failures, " << table.degenerate_count << " degenerate)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Portmanteau goodness-of-fit tests for time-series residuals"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate a series from a JSON model spec");
    simulate->add_option("--model", sim.model, "Model JSON (inline or file path)")->required();
    simulate->add_option("--n", sim.n, "Series length")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "Random seed (PORTMANTEAU_SEED overrides)");
    simulate->add_option("--out", sim.out, "Output CSV (default: stdout)");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a model to a CSV series");
    fit_cmd->add_option("input", fit.input, "Input CSV")->required();
    fit_cmd->add_option("--fit", fit.fit, "Model: none, ar:p, ar-aic:pmax, arma:p,q, arch:b, garch:b,a, ar-arch:p,b, ar-garch:p,b,a");
    fit_cmd->add_flag("--zero-mean", fit.zero_mean, "Treat the series mean as known zero");
    fit_cmd->add_option("--format", fit.format)->check(CLI::IsMember({"csv", "json"}));

    TestArgs test;
    auto* test_cmd = app.add_subcommand("test", "Fit a model and run portmanteau tests on its residuals");
    test_cmd->add_option("input", test.input, "Input CSV")->required();
    test_cmd->add_option("--fit", test.fit, "Model to fit (see 'fit --help')");
    test_cmd->add_flag("--zero-mean", test.zero_mean, "Treat the series mean as known zero");
    test_cmd->add_option("--lags", test.lags, "Lags m1,m2,...")->delimiter(',');
    test_cmd->add_option("--stats", test.stats, "Statistics, e.g. Cm,Q22,Lb")->delimiter(',');
    test_cmd->add_option("--format", test.format)->check(CLI::IsMember({"csv", "json"}));

    McArgs mc;
    mc.workers = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    std::uint64_t mc_seed = 0;
    auto* mc_cmd = app.add_subcommand("mc", "Run a Monte Carlo size/power experiment");
    mc_cmd->add_option("--config", mc.config, "Experiment JSON (inline or file path)")->required();
    mc_cmd->add_option("--workers", mc.workers, "Worker threads")->check(CLI::PositiveNumber);
    mc_cmd->add_option("--out", mc.out, "Output prefix for .csv, .json and _plot.csv");
    auto* seed_opt = mc_cmd->add_option("--seed", mc_seed, "Override the config's master seed");
    mc_cmd->add_flag("--quiet", mc.quiet, "Suppress progress output");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) mc.seed = mc_seed;

    try {
        if (*simulate) return cmd_simulate(sim);
        if (*fit_cmd) return cmd_fit(fit);
        if (*test_cmd) return cmd_test(test);
        if (*mc_cmd) return cmd_mc(mc);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::MalformedInput ? kExitMalformed : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
