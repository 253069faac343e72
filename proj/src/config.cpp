#include "portmanteau/config.hpp"

#include <algorithm>
#include <cstdio>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>

#include "portmanteau/error.hpp"

namespace pmt {

namespace {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                std::string_view context) {
    if (!j.is_object()) {
        throw Error(ErrorCode::InvalidConfig, std::string(context) + " must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw Error(ErrorCode::InvalidConfig,
                        "unknown key '" + key + "' in " + std::string(context));
        }
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("bad value for '") + key + "': " + e.what());
    }
}

template <typename T>
T require(const json& j, const char* key, std::string_view context) {
    if (!j.contains(key)) {
        throw Error(ErrorCode::InvalidConfig,
                    std::string("missing key '") + key + "' in " + std::string(context));
    }
    return get_or<T>(j, key, T{});
}

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json innovation_to_json(const InnovationSpec& s) {
    switch (s.kind) {
        case InnovationKind::Normal: return {{"kind", "normal"}};
        case InnovationKind::StudentT: return {{"kind", "student_t"}, {"df", s.df}};
        case InnovationKind::SkewNormal: return {{"kind", "skew_normal"}, {"slant", s.slant}};
    }
    return {};
}

InnovationSpec innovation_from_json(const json& j) {
    InnovationSpec s;
    std::string kind;
    if (j.is_string()) {
        kind = j.get<std::string>();
    } else {
        check_keys(j, {"kind", "df", "slant"}, "innovation");
        kind = require<std::string>(j, "kind", "innovation");
        s.df = get_or(j, "df", s.df);
        s.slant = get_or(j, "slant", s.slant);
    }
    if (kind == "normal") {
        s.kind = InnovationKind::Normal;
    } else if (kind == "student_t") {
        s.kind = InnovationKind::StudentT;
    } else if (kind == "skew_normal") {
        s.kind = InnovationKind::SkewNormal;
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown innovation '" + kind + "'");
    }
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------

json to_json(const ModelSpec& spec) {
    json j;
    struct V {
        json& j;
        void operator()(const ArmaSpec& s) const {
            j["process"] = "arma";
            j["ar"] = s.ar;
            j["ma"] = s.ma;
            j["mu"] = s.mu;
        }
        void operator()(const GarchSpec& s) const {
            j["process"] = "garch";
            j["omega"] = s.omega;
            j["alpha"] = s.alpha;
            j["beta"] = s.beta;
        }
        void operator()(const ArmaGarchSpec& s) const {
            j["process"] = "arma_garch";
            j["ar"] = s.arma.ar;
            j["ma"] = s.arma.ma;
            j["mu"] = s.arma.mu;
            j["omega"] = s.garch.omega;
            j["alpha"] = s.garch.alpha;
            j["beta"] = s.garch.beta;
        }
        void operator()(const TarSpec& s) const {
            j["process"] = "tar";
            j["phi0_low"] = s.phi0_low;
            j["phi1_low"] = s.phi1_low;
            j["phi0_high"] = s.phi0_high;
            j["phi1_high"] = s.phi1_high;
            j["threshold"] = s.threshold;
        }
        void operator()(const StarSpec& s) const {
            j["process"] = "star";
            j["coef_low"] = s.coef_low;
            j["coef_high"] = s.coef_high;
            j["noise_lag"] = s.noise_lag;
        }
        void operator()(const SqarSpec& s) const {
            j["process"] = "sqar";
            j["phi"] = s.phi;
        }
        void operator()(const BilinearSpec& s) const {
            j["process"] = "bilinear";
            j["model"] = s.model_id;
        }
    };
    std::visit(V{j}, spec.process);
    j["innovation"] = innovation_to_json(spec.innovation);
    j["burn_in"] = spec.burn_in;
    return j;
}

ModelSpec model_spec_from_json(const json& j) {
    const char* ctx = "model";
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "model must be a JSON object");
    const auto process = require<std::string>(j, "process", ctx);
    ModelSpec spec;
    if (process == "arma") {
        check_keys(j, {"process", "ar", "ma", "mu", "innovation", "burn_in"}, ctx);
        spec.process = ArmaSpec{get_or(j, "ar", std::vector<double>{}),
                                get_or(j, "ma", std::vector<double>{}), get_or(j, "mu", 0.0)};
    } else if (process == "garch") {
        check_keys(j, {"process", "omega", "alpha", "beta", "innovation", "burn_in"}, ctx);
        spec.process = GarchSpec{require<double>(j, "omega", ctx),
                                 get_or(j, "alpha", std::vector<double>{}),
                                 get_or(j, "beta", std::vector<double>{})};
    } else if (process == "arma_garch") {
        check_keys(j, {"process", "ar", "ma", "mu", "omega", "alpha", "beta", "innovation",
                       "burn_in"},
                   ctx);
        spec.process = ArmaGarchSpec{
            ArmaSpec{get_or(j, "ar", std::vector<double>{}), get_or(j, "ma", std::vector<double>{}),
                     get_or(j, "mu", 0.0)},
            GarchSpec{require<double>(j, "omega", ctx), get_or(j, "alpha", std::vector<double>{}),
                      get_or(j, "beta", std::vector<double>{})}};
    } else if (process == "tar") {
        check_keys(j, {"process", "phi0_low", "phi1_low", "phi0_high", "phi1_high", "threshold",
                       "innovation", "burn_in"},
                   ctx);
        spec.process = TarSpec{get_or(j, "phi0_low", 0.0), require<double>(j, "phi1_low", ctx),
                               get_or(j, "phi0_high", 0.0), require<double>(j, "phi1_high", ctx),
                               get_or(j, "threshold", 0.0)};
    } else if (process == "star") {
        check_keys(j, {"process", "coef_low", "coef_high", "noise_lag", "innovation", "burn_in"},
                   ctx);
        spec.process = StarSpec{require<double>(j, "coef_low", ctx),
                                require<double>(j, "coef_high", ctx), get_or(j, "noise_lag", 2)};
    } else if (process == "sqar") {
        check_keys(j, {"process", "phi", "innovation", "burn_in"}, ctx);
        spec.process = SqarSpec{get_or(j, "phi", 0.6)};
    } else if (process == "bilinear") {
        check_keys(j, {"process", "model", "innovation", "burn_in"}, ctx);
        spec.process = BilinearSpec{require<int>(j, "model", ctx)};
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown process '" + process + "'");
    }
    if (j.contains("innovation")) spec.innovation = innovation_from_json(j.at("innovation"));
    spec.burn_in = get_or(j, "burn_in", spec.burn_in);
    try {
        validate(spec);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidConfig, e.what());
    }
    return spec;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::pair<FitterKind, std::string_view> kFitterNames[] = {
    {FitterKind::TrueModel, "true_model"}, {FitterKind::None, "none"},
    {FitterKind::AR, "ar"},                {FitterKind::ARSelectAIC, "ar_aic"},
    {FitterKind::ARMA, "arma"},            {FitterKind::ArGarch, "ar_garch"},
    {FitterKind::Garch, "garch"},
};

}  // namespace

json to_json(const FitterSpec& f) {
    json j;
    for (const auto& [kind, name] : kFitterNames) {
        if (kind == f.kind) j["kind"] = name;
    }
    switch (f.kind) {
        case FitterKind::AR: j["p"] = f.p; break;
        case FitterKind::ARSelectAIC: j["p_max"] = f.p_max; break;
        case FitterKind::ARMA: j["p"] = f.p; j["q"] = f.q; break;
        case FitterKind::ArGarch: j["p"] = f.p; j["b"] = f.b; j["a"] = f.a; break;
        case FitterKind::Garch: j["b"] = f.b; j["a"] = f.a; break;
        default: break;
    }
    if (f.kind != FitterKind::TrueModel && f.kind != FitterKind::None &&
        f.kind != FitterKind::Garch) {
        j["include_mean"] = f.include_mean;
    }
    return j;
}

FitterSpec fitter_from_json(const json& j) {
    check_keys(j, {"kind", "p", "q", "p_max", "b", "a", "include_mean"}, "fitter");
    const auto kind = require<std::string>(j, "kind", "fitter");
    FitterSpec f;
    bool found = false;
    for (const auto& [k, name] : kFitterNames) {
        if (name == kind) {
            f.kind = k;
            found = true;
        }
    }
    if (!found) throw Error(ErrorCode::InvalidConfig, "unknown fitter '" + kind + "'");
    f.p = get_or(j, "p", 0);
    f.q = get_or(j, "q", 0);
    f.p_max = get_or(j, "p_max", 4);
    f.b = get_or(j, "b", 0);
    f.a = get_or(j, "a", 0);
    f.include_mean = get_or(j, "include_mean", true);
    if (f.p < 0 || f.q < 0 || f.p_max < 1 || f.b < 0 || f.a < 0) {
        throw Error(ErrorCode::InvalidConfig, "fitter orders must be non-negative");
    }
    return f;
}

json to_json(const Experiment& exp) {
    json stats = json::array();
    for (const auto s : exp.statistics) stats.push_back(std::string(to_string(s)));
    return {{"schema_version", kSchemaVersion},
            {"generator", to_json(exp.generator)},
            {"fitter", to_json(exp.fitter)},
            {"n", exp.n_list},
            {"m", exp.m_list},
            {"levels", exp.levels},
            {"replications", exp.replications},
            {"statistics", stats},
            {"master_seed", exp.master_seed}};
}

Experiment experiment_from_json(const json& j) {
    const char* ctx = "experiment";
    check_keys(j, {"schema_version", "generator", "fitter", "n", "m", "levels", "replications",
                   "statistics", "master_seed"},
               ctx);
    const int version = require<int>(j, "schema_version", ctx);
    if (version != kSchemaVersion) {
        throw Error(ErrorCode::InvalidConfig,
                    "unsupported schema_version " + std::to_string(version));
    }
    Experiment exp;
    exp.generator = model_spec_from_json(require<json>(j, "generator", ctx));
    if (j.contains("fitter")) exp.fitter = fitter_from_json(j.at("fitter"));
    exp.n_list = require<std::vector<int>>(j, "n", ctx);
    exp.m_list = require<std::vector<int>>(j, "m", ctx);
    exp.levels = get_or(j, "levels", exp.levels);
    exp.replications = get_or(j, "replications", exp.replications);
    for (const auto& s : require<std::vector<std::string>>(j, "statistics", ctx)) {
        exp.statistics.push_back(stat_from_string(s));
    }
    exp.master_seed = get_or<std::uint64_t>(j, "master_seed", 0);
    validate(exp);
    return exp;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int> parse_ints(const std::string& text, std::size_t expected) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidConfig, "bad integer '" + item + "' in fit spec");
        }
    }
    if (out.size() != expected) {
        throw Error(ErrorCode::InvalidConfig, "fit spec expects " + std::to_string(expected) +
                                                  " orders, got '" + text + "'");
    }
    return out;
}

}  // namespace

FitterSpec parse_fit_option(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
    FitterSpec f;
    if (head == "none") {
        f.kind = FitterKind::None;
    } else if (head == "true") {
        f.kind = FitterKind::TrueModel;
    } else if (head == "ar") {
        f.kind = FitterKind::AR;
        f.p = parse_ints(tail, 1)[0];
    } else if (head == "ar-aic") {
        f.kind = FitterKind::ARSelectAIC;
        f.p_max = tail.empty() ? 4 : parse_ints(tail, 1)[0];
    } else if (head == "arma") {
        const auto v = parse_ints(tail, 2);
        f.kind = FitterKind::ARMA;
        f.p = v[0];
        f.q = v[1];
    } else if (head == "arch") {
        f.kind = FitterKind::Garch;
        f.b = parse_ints(tail, 1)[0];
    } else if (head == "garch") {
        const auto v = parse_ints(tail, 2);
        f.kind = FitterKind::Garch;
        f.b = v[0];
        f.a = v[1];
    } else if (head == "ar-arch") {
        const auto v = parse_ints(tail, 2);
        f.kind = FitterKind::ArGarch;
        f.p = v[0];
        f.b = v[1];
    } else if (head == "ar-garch") {
        const auto v = parse_ints(tail, 3);
        f.kind = FitterKind::ArGarch;
        f.p = v[0];
        f.b = v[1];
        f.a = v[2];
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown fit spec '" + text + "'");
    }
    if (f.p < 0 || f.q < 0 || f.p_max < 1 || f.b < 0 || f.a < 0) {
        throw Error(ErrorCode::InvalidConfig, "fit orders must be non-negative");
    }
    return f;
}

std::string format_fit_option(const FitterSpec& f) {
    const auto s = [](int x) { return std::to_string(x); };
    switch (f.kind) {
        case FitterKind::None: return "none";
        case FitterKind::TrueModel: return "true";
        case FitterKind::AR: return "ar:" + s(f.p);
        case FitterKind::ARSelectAIC: return "ar-aic:" + s(f.p_max);
        case FitterKind::ARMA: return "arma:" + s(f.p) + "," + s(f.q);
        case FitterKind::Garch: return "garch:" + s(f.b) + "," + s(f.a);
        case FitterKind::ArGarch: return "ar-garch:" + s(f.p) + "," + s(f.b) + "," + s(f.a);
    }
    return "";
}

// ---------------------------------------------------------------------------

void write_mc_csv(std::ostream& out, const McTable& table) {
    out << "statistic,n,m,level,rejections,replications,frequency\n";
    for (const auto& [key, cell] : table.cells) {
        const auto& [stat, n, m, level] = key;
        out << to_string(stat) << ',' << n << ',' << m << ',' << fmt_double(level) << ','
            << cell.rejections << ',' << cell.replications << ',' << fmt_double(cell.frequency())
            << '\n';
    }
}

McTable read_mc_csv(std::istream& in) {
    McTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != "statistic,n,m,level,rejections,replications,frequency") {
                throw Error(ErrorCode::MalformedInput, "unexpected McTable CSV header");
            }
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        if (f.size() != 7) {
            throw Error(ErrorCode::MalformedInput,
                        "line " + std::to_string(line_no) + ": expected 7 fields");
        }
        try {
            const CellKey key{stat_from_string(f[0]), std::stoi(f[1]), std::stoi(f[2]),
                              std::stod(f[3])};
            table.cells[key] = McCell{std::stoi(f[4]), std::stoi(f[5])};
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": bad number");
        }
    }
    return table;
}

json to_json(const McTable& table) {
    json cells = json::array();
    for (const auto& [key, cell] : table.cells) {
        const auto& [stat, n, m, level] = key;
        cells.push_back({{"statistic", std::string(to_string(stat))},
                         {"n", n},
                         {"m", m},
                         {"level", level},
                         {"rejections", cell.rejections},
                         {"replications", cell.replications},
                         {"frequency", cell.frequency()}});
    }
    json means = json::array();
    for (const auto& [key, mean] : table.mean_statistic) {
        const auto& [stat, n, m] = key;
        means.push_back({{"statistic", std::string(to_string(stat))},
                         {"n", n},
                         {"m", m},
                         {"mean", mean},
                         {"degenerate", table.degenerate.count(key) ? table.degenerate.at(key) : 0}});
    }
    return {{"schema_version", kSchemaVersion},
            {"cells", cells},
            {"statistic_means", means},
            {"degenerate_count", table.degenerate_count},
            {"fit_failures", table.fit_failures},
            {"elapsed_seconds", table.elapsed}};
}

McTable mc_table_from_json(const json& j) {
    check_keys(j, {"schema_version", "cells", "statistic_means", "degenerate_count",
                   "fit_failures", "elapsed_seconds"},
               "McTable");
    McTable table;
    for (const auto& c : require<json>(j, "cells", "McTable")) {
        check_keys(c, {"statistic", "n", "m", "level", "rejections", "replications", "frequency"},
                   "McTable cell");
        const CellKey key{stat_from_string(require<std::string>(c, "statistic", "cell")),
                          require<int>(c, "n", "cell"), require<int>(c, "m", "cell"),
                          require<double>(c, "level", "cell")};
        table.cells[key] =
            McCell{require<int>(c, "rejections", "cell"), require<int>(c, "replications", "cell")};
    }
    if (j.contains("statistic_means")) {
        for (const auto& c : j.at("statistic_means")) {
            check_keys(c, {"statistic", "n", "m", "mean", "degenerate"}, "statistic mean");
            const SeriesKey key{stat_from_string(require<std::string>(c, "statistic", "mean")),
                                require<int>(c, "n", "mean"), require<int>(c, "m", "mean")};
            table.mean_statistic[key] = require<double>(c, "mean", "mean");
            table.degenerate[key] = get_or(c, "degenerate", 0);
        }
    }
    table.degenerate_count = get_or(j, "degenerate_count", 0);
    table.fit_failures = get_or(j, "fit_failures", 0);
    table.elapsed = get_or(j, "elapsed_seconds", 0.0);
    return table;
}

void write_plot_csv(std::ostream& out, const McTable& table) {
    // Reorder so each (statistic, n, level) curve is contiguous in m.
    std::map<std::tuple<StatName, int, double, int>, double> curves;
    for (const auto& [key, cell] : table.cells) {
        const auto& [stat, n, m, level] = key;
        curves[{stat, n, level, m}] = cell.frequency();
    }
    out << "statistic,n,level,m,frequency\n";
    for (const auto& [key, freq] : curves) {
        const auto& [stat, n, level, m] = key;
        out << to_string(stat) << ',' << n << ',' << fmt_double(level) << ',' << m << ','
            << fmt_double(freq) << '\n';
    }
}

}  // namespace pmt
