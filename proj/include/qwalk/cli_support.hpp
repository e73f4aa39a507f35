#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qwalk/fusion.hpp"

namespace qwalk {

/// Parsed command-line configuration. All cutoffs are twice-spin integers.
struct RunConfig {
    std::string command;
    double q = 0.5;
    std::string phi_spec = "1:1.0";
    int target2 = 0;
    int s_max2 = 20;
    int r_max2 = 12;
    int n = 1;
    int k = 1;
    std::vector<int> window;  // --Y
    double tol_tail = 1e-8;
    double tol_assert = 1e-9;
    std::string format = "json";
    std::uint64_t seed = 42;
    std::string suite = "all";
    std::string balayage_input = "one";  // one | green
};

/// Grammar: pair (',' pair)*, pair := TWICE_SPIN ':' WEIGHT. Duplicate labels
/// are summed. Malformed tokens raise input_error naming the token.
WeightFunctional parse_phi(const std::string& spec);

/// Shortest decimal representation that parses back to the same double
/// (at most 17 significant digits).
std::string format_double(double value);

/// Row-table produced by the table-emitting commands. Every row carries the
/// schema columns s2/value/tail_bound; some commands append extra columns.
struct OutputTable {
    std::vector<std::string> extra_columns;
    struct Row {
        int s2 = 0;
        double value = 0.0;
        double tail = 0.0;
        std::vector<double> extra;
    };
    std::vector<Row> rows;
};

/// Computes the table for a table-emitting command (everything but `verify`).
OutputTable compute_table(const RunConfig& config);

std::string emit_json(const OutputTable& table, const RunConfig& config);
std::string emit_csv(const OutputTable& table, const RunConfig& config);

/// Dispatches a command, writing the table to `out` and diagnostics to `err`.
/// Exit code: 0 success / all checks pass, 1 assertion or numerical failure,
/// 2 invalid input.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qwalk
