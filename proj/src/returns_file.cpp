#include "portmanteau/returns_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

#include "portmanteau/error.hpp"

namespace pmt {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& text, int line) {
    double x = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, x);
    if (text.empty() || ec != std::errc{} || ptr != end) fail(line, "not a number: '" + text + "'");
    if (!std::isfinite(x)) fail(line, "non-finite value");
    return x;
}

bool valid_iso_date(const std::string& s) {
    static const std::regex pattern(
        R"(\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?)");
    if (!std::regex_match(s, pattern)) return false;
    const int month = std::stoi(s.substr(5, 2));
    const int day = std::stoi(s.substr(8, 2));
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

}  // namespace

ReturnsFile read_returns_csv(std::istream& in) {
    std::string line;
    int line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        header = split(line);
        break;
    }
    if (header.empty()) throw Error(ErrorCode::MalformedInput, "line 1: missing header row");
    for (auto& h : header) h = lower(h);

    ReturnsFile file;
    int date_col = -1;
    int value_col = 0;
    if (header.size() == 2 && header[0] == "date" && header[1] == "price") {
        file.mode = ReturnsMode::Price;
        date_col = 0;
        value_col = 1;
    } else if (header.size() == 2 && header[0] == "date" && header[1] == "return") {
        file.mode = ReturnsMode::Return;
        date_col = 0;
        value_col = 1;
    } else if (header.size() == 2 && header[0] == "t" && header[1] == "value") {
        file.mode = ReturnsMode::Value;
        value_col = 1;
    } else if (header.size() == 1 && header[0] == "value") {
        file.mode = ReturnsMode::Value;
    } else {
        fail(line_no, "unrecognized header; expected date,price | date,return | t,value | value");
    }

    std::vector<std::string> dates;
    std::vector<double> raw;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        if (fields.size() != header.size()) {
            fail(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        }
        if (date_col >= 0) {
            const auto& d = fields[static_cast<std::size_t>(date_col)];
            if (!valid_iso_date(d)) fail(line_no, "invalid ISO-8601 date '" + d + "'");
            if (!dates.empty() && !(dates.back() < d)) fail(line_no, "dates must be strictly increasing");
            dates.push_back(d);
        }
        const double x = parse_real(fields[static_cast<std::size_t>(value_col)], line_no);
        if (file.mode == ReturnsMode::Price && x <= 0.0) fail(line_no, "price must be positive");
        raw.push_back(x);
    }

    if (file.mode == ReturnsMode::Price) {
        if (raw.size() < 2) throw Error(ErrorCode::MalformedInput, "price file needs at least two rows");
        for (std::size_t t = 1; t < raw.size(); ++t) file.values.push_back(std::log(raw[t] / raw[t - 1]));
        file.dates.assign(dates.begin() + 1, dates.end());
    } else {
        file.values = std::move(raw);
        file.dates = std::move(dates);
    }
    if (file.values.empty()) throw Error(ErrorCode::MalformedInput, "no data rows");
    return file;
}

ReturnsFile read_returns_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MalformedInput, "cannot open '" + path + "'");
    return read_returns_csv(in);
}

void write_series_csv(std::ostream& out, const std::vector<double>& values) {
    out << "t,value\n";
    char buf[32];
    for (std::size_t t = 0; t < values.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%.17g", values[t]);
        out << t + 1 << ',' << buf << '\n';
    }
}

}  // namespace pmt
