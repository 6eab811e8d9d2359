#pragma once

#include "fceval/harness.hpp"
#include "fceval/series.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fceval {

// ---------------------------------------------------------------------------
// Experiment configuration files
// ---------------------------------------------------------------------------
//
// Plain text, one `key = value` per line; `#` starts a comment; list values
// are comma separated. Recognized keys:
//
//   dgp          location_model (the only DGP the size grid uses)
//   sigma        lognormal shapes, e.g. 0.5, 1, 1.5
//   m            rolling windows, e.g. 3, 5, 10, 30
//   n            evaluation lengths, e.g. 100, 200, 1000
//   replications Monte Carlo replications per cell
//   tests        subset of GW, DM, SUB, SUB(K)
//   alpha        nominal level in (0, 1)
//   lags         textbook | non-negative integer
//   seed         unsigned 64-bit master seed
//   workers      thread count (0 = all cores); never changes results
//
// Unknown keys and malformed values raise ParseError naming the line.

struct RunConfig {
    Table1Grid grid;
    ExperimentConfig base;  // replications, tests, alpha, lags, workers, seed
    bool seed_given = false;
};

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

/// Applies a single `key = value` assignment; shared by the file parser and CLI overrides.
void apply_config_value(RunConfig& config, const std::string& key, const std::string& value);

// ---------------------------------------------------------------------------
// Size-grid CSV (table1)
// ---------------------------------------------------------------------------

struct Table1CsvRow {
    double sigma = 0.0;
    long m = 0;
    long n = 0;
    std::string test;
    double rejection_rate = 0.0;
    double mc_se = 0.0;
    long degenerate_count = 0;

    bool operator==(const Table1CsvRow&) const = default;
};

inline constexpr const char* table1_csv_header = "sigma,m,n,test,rejection_rate,mc_se,degenerate_count";

std::vector<Table1CsvRow> table1_rows(const std::vector<Table1Cell>& cells);
/// Header plus one row per cell per test; reals printed with 17 significant digits.
void write_table1_csv(std::ostream& out, const std::vector<Table1CsvRow>& rows);
std::vector<Table1CsvRow> read_table1_csv(std::istream& in);

/// Formats a real with 17 significant digits (round-trips exactly).
std::string format_real(double value);

// ---------------------------------------------------------------------------
// Forecast evaluation files
// ---------------------------------------------------------------------------

/// Comma-separated, header row naming exactly the columns y, f1 and f2 in
/// any order; decimal point only. Row numbers in errors count the header as
/// line 1.
struct EvaluationInput {
    Series y;
    Series f1;
    Series f2;
};

EvaluationInput parse_evaluation_csv(std::istream& in);
EvaluationInput load_evaluation_csv(const std::string& path);

/// Locale-independent parse of a whole string as a finite double.
std::optional<double> parse_real(const std::string& text);

}  // namespace fceval
