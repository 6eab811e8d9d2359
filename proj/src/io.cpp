#include "fceval/io.hpp"

#include "fceval/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fceval {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (const char ch : s) {
        if (ch == sep) {
            parts.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    parts.push_back(trim(current));
    return parts;
}

std::optional<long long> parse_integer(const std::string& text) {
    long long value = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

std::optional<std::uint64_t> parse_unsigned(const std::string& text) {
    std::uint64_t value = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

double require_real(const std::string& key, const std::string& text) {
    const auto v = parse_real(text);
    if (!v) throw ParseError("'" + key + "': '" + text + "' is not a number");
    return *v;
}

long require_positive(const std::string& key, const std::string& text) {
    const auto v = parse_integer(text);
    if (!v || *v < 1) throw ParseError("'" + key + "': '" + text + "' is not a positive integer");
    return static_cast<long>(*v);
}

}  // namespace

std::optional<double> parse_real(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    double value = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

void apply_config_value(RunConfig& config, const std::string& key, const std::string& value) {
    const std::vector<std::string> items = split(value, ',');
    if (key == "dgp") {
        if (value != "location_model") throw ParseError("'dgp': only location_model is supported, got '" + value + "'");
    } else if (key == "sigma") {
        config.grid.sigmas.clear();
        for (const auto& item : items) {
            const double s = require_real(key, item);
            if (!(s > 0.0)) throw ParseError("'sigma': values must be positive, got '" + item + "'");
            config.grid.sigmas.push_back(s);
        }
    } else if (key == "m") {
        config.grid.ms.clear();
        for (const auto& item : items) config.grid.ms.push_back(require_positive(key, item));
    } else if (key == "n") {
        config.grid.ns.clear();
        for (const auto& item : items) config.grid.ns.push_back(require_positive(key, item));
    } else if (key == "replications") {
        config.base.replications = require_positive(key, value);
    } else if (key == "tests") {
        config.base.tests.clear();
        for (const auto& item : items) {
            try {
                config.base.tests.push_back(TestSpec::parse(item));
            } catch (const DomainError& e) {
                throw ParseError("'tests': " + std::string(e.what()));
            }
        }
    } else if (key == "alpha") {
        const double a = require_real(key, value);
        if (!(a > 0.0 && a < 1.0)) throw ParseError("'alpha': must lie in (0, 1)");
        config.base.alpha = a;
    } else if (key == "lags") {
        if (value == "textbook") {
            config.base.lag_rule = LagRule::textbook();
        } else {
            const auto l = parse_integer(value);
            if (!l || *l < 0) throw ParseError("'lags': expected 'textbook' or a non-negative integer");
            config.base.lag_rule = LagRule::fixed(static_cast<int>(*l));
        }
    } else if (key == "seed") {
        const auto s = parse_unsigned(value);
        if (!s) throw ParseError("'seed': '" + value + "' is not an unsigned 64-bit integer");
        config.base.master_seed = *s;
        config.seed_given = true;
    } else if (key == "workers") {
        const auto w = parse_integer(value);
        if (!w || *w < 0) throw ParseError("'workers': expected a non-negative integer");
        config.base.workers = static_cast<unsigned>(*w);
    } else {
        throw ParseError("unknown configuration key '" + key + "'");
    }
}

RunConfig parse_run_config(std::istream& in) {
    RunConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        try {
            apply_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open configuration file '" + path + "'");
    return parse_run_config(in);
}

std::string format_real(double value) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", value);
    return buf.data();
}

std::vector<Table1CsvRow> table1_rows(const std::vector<Table1Cell>& cells) {
    std::vector<Table1CsvRow> rows;
    for (const auto& cell : cells) {
        for (const auto& t : cell.summary.tests) {
            rows.push_back({cell.sigma, cell.m, cell.n, t.test.label(), t.rejection_rate, t.mc_se, t.degenerate});
        }
    }
    return rows;
}

void write_table1_csv(std::ostream& out, const std::vector<Table1CsvRow>& rows) {
    out << table1_csv_header << '\n';
    for (const auto& r : rows) {
        out << format_real(r.sigma) << ',' << r.m << ',' << r.n << ',' << r.test << ',' << format_real(r.rejection_rate)
            << ',' << format_real(r.mc_se) << ',' << r.degenerate_count << '\n';
    }
}

std::vector<Table1CsvRow> read_table1_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != table1_csv_header) {
        throw ParseError("size-grid CSV must start with the header '" + std::string(table1_csv_header) + "'");
    }
    std::vector<Table1CsvRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        const auto fail = [&] { return ParseError("size-grid CSV line " + std::to_string(line_no) + " is malformed"); };
        if (f.size() != 7) throw fail();
        const auto sigma = parse_real(f[0]);
        const auto m = parse_integer(f[1]);
        const auto n = parse_integer(f[2]);
        const auto rate = parse_real(f[4]);
        const auto se = parse_real(f[5]);
        const auto deg = parse_integer(f[6]);
        if (!sigma || !m || !n || !rate || !se || !deg) throw fail();
        rows.push_back({*sigma, static_cast<long>(*m), static_cast<long>(*n), f[3], *rate, *se, static_cast<long>(*deg)});
    }
    return rows;
}

EvaluationInput parse_evaluation_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("evaluation file is empty");
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    const auto header = split(line, ',');
    std::array<int, 3> column{-1, -1, -1};  // y, f1, f2
    const std::array<std::string, 3> names{"y", "f1", "f2"};
    if (header.size() != 3) throw ParseError("header must name exactly the columns y, f1, f2");
    for (int c = 0; c < 3; ++c) {
        const auto it = std::find(names.begin(), names.end(), header[c]);
        if (it == names.end()) throw ParseError("unexpected column '" + header[c] + "' (expected y, f1, f2)");
        auto& slot = column[static_cast<std::size_t>(it - names.begin())];
        if (slot != -1) throw ParseError("column '" + header[c] + "' appears twice");
        slot = c;
    }

    std::array<std::vector<double>, 3> data;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 3) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 3 fields, found " +
                             std::to_string(cells.size()));
        }
        for (std::size_t k = 0; k < 3; ++k) {
            const auto c = static_cast<std::size_t>(column[k]);
            const auto v = parse_real(cells[c]);
            if (!v) {
                throw ParseError("line " + std::to_string(line_no) + ", column '" + names[k] + "': '" + cells[c] +
                                 "' is not a finite number");
            }
            data[k].push_back(*v);
        }
    }
    if (data[0].empty()) throw InsufficientDataError("evaluation file has no data rows");
    return {Series::from(data[0]), Series::from(data[1]), Series::from(data[2])};
}

EvaluationInput load_evaluation_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open evaluation file '" + path + "'");
    return parse_evaluation_csv(in);
}

}  // namespace fceval
