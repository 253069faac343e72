#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pmt {

enum class ReturnsMode { Price, Return, Value };

/**
 * @brief A univariate series read from CSV.
 *
 * Accepted headers (case-insensitive):
 *  - `date,price`: strictly increasing ISO-8601 dates, positive prices;
 *    `values` holds natural-log returns, so it is one shorter than the file.
 *  - `date,return`: returns taken as given.
 *  - `t,value` or a single `value` column: as written by `portmanteau simulate`.
 */
struct ReturnsFile {
    ReturnsMode mode = ReturnsMode::Value;
    std::vector<std::string> dates;  ///< dates aligned with `values` (empty without a date column)
    std::vector<double> values;
};

/// Throws Error(MalformedInput) naming the offending line.
[[nodiscard]] ReturnsFile read_returns_csv(std::istream& in);
[[nodiscard]] ReturnsFile read_returns_file(const std::string& path);

/// Writes `t,value` rows, t counting from 1.
void write_series_csv(std::ostream& out, const std::vector<double>& values);

}  // namespace pmt
