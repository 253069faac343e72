#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>

#include "portmanteau/montecarlo.hpp"

namespace pmt {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// All readers reject unknown keys with InvalidConfig.

[[nodiscard]] json to_json(const ModelSpec& spec);
[[nodiscard]] ModelSpec model_spec_from_json(const json& j);

[[nodiscard]] json to_json(const FitterSpec& fitter);
[[nodiscard]] FitterSpec fitter_from_json(const json& j);

/// Experiment config; requires "schema_version": 1.
[[nodiscard]] json to_json(const Experiment& exp);
[[nodiscard]] Experiment experiment_from_json(const json& j);

/**
 * Parses command-line fit specs: "none", "ar:p", "ar-aic:pmax", "arma:p,q",
 * "arch:b", "garch:b,a", "ar-arch:p,b", "ar-garch:p,b,a", "true". Mean-equation
 * fits estimate a mean; `format_fit_option` does not encode `include_mean`.
 */
[[nodiscard]] FitterSpec parse_fit_option(const std::string& text);
[[nodiscard]] std::string format_fit_option(const FitterSpec& fitter);

// McTable output. CSV has one row per cell:
//   statistic,n,m,level,rejections,replications,frequency
void write_mc_csv(std::ostream& out, const McTable& table);
[[nodiscard]] McTable read_mc_csv(std::istream& in);
[[nodiscard]] json to_json(const McTable& table);
[[nodiscard]] McTable mc_table_from_json(const json& j);

/// Rejection frequency against m, one curve per (statistic, n, level):
///   statistic,n,level,m,frequency
void write_plot_csv(std::ostream& out, const McTable& table);

}  // namespace pmt
