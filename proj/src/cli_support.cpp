#include "qwalk/cli_support.hpp"

#include <charconv>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qwalk/martin_kernel.hpp"
#include "qwalk/verify.hpp"

namespace qwalk {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

bool parse_nonneg_int(const std::string& tok, int& out) {
    if (tok.empty()) return false;
    for (char c : tok)
        if (c < '0' || c > '9') return false;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && p == tok.data() + tok.size();
}

bool parse_nonneg_float(const std::string& tok, double& out) {
    if (tok.empty() || tok.front() == '-' || tok.front() == '+') return false;
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size() && out >= 0.0;
}

}  // namespace

WeightFunctional parse_phi(const std::string& spec) {
    std::vector<WeightFunctional::Entry> entries;
    for (const std::string& pair : split(spec, ',')) {
        const auto halves = split(pair, ':');
        if (halves.size() != 2)
            throw input_error("malformed weight pair '" + pair + "': expected TWICE_SPIN:WEIGHT");
        int s2 = 0;
        if (!parse_nonneg_int(halves[0], s2))
            throw input_error("malformed twice-spin '" + halves[0] +
                              "': expected a nonnegative decimal integer");
        double w = 0.0;
        if (!parse_nonneg_float(halves[1], w))
            throw input_error("malformed weight '" + halves[1] +
                              "': expected a nonnegative decimal float");
        entries.push_back({IrrepLabel{s2}, w});
    }
    return WeightFunctional(std::move(entries));  // merges duplicates, checks the norm
}

std::string format_double(double value) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, p);
}

OutputTable compute_table(const RunConfig& config) {
    const DeformationParams params(config.q, config.tol_tail, config.tol_assert);
    const WeightFunctional phi = parse_phi(config.phi_spec);
    if (config.s_max2 < 0 || config.r_max2 < 0 || config.n < 0 || config.k < 0)
        throw input_error("cutoffs must be nonnegative");

    OutputTable table;
    if (config.command == "green") {
        const GreenTable g = green_central(phi, {config.target2}, {config.s_max2}, params);
        for (const auto& row : g.rows)
            table.rows.push_back({row.s.twice_spin, row.value, row.tail_bound, {}});
    } else if (config.command == "delta") {
        const RenewalData renewal = solve_delta(phi, config.q);
        table.rows.push_back({0, renewal.delta, 0.0, {}});
        table.rows.push_back({1, renewal.drift, 0.0, {}});
    } else if (config.command == "ratio") {
        table.extra_columns = {"constant", "constant_tail"};
        for (const auto& row : asymptotic_report(phi, {config.s_max2}, params))
            table.rows.push_back({row.s.twice_spin,
                                  row.ratio,
                                  row.ratio_bound,
                                  {row.constant, row.constant_bound}});
    } else if (config.command == "martin-central") {
        for (const auto& row : martin_central(phi, {config.target2}, {config.s_max2}, params))
            table.rows.push_back({row.s.twice_spin, row.value, row.bound, {}});
    } else if (config.command == "martin-block") {
        CGCache cg(config.q);
        const DeviationReport report =
            boundary_deviation(phi, config.n, {0}, {config.r_max2}, params, cg);
        table.extra_columns = {"sup_entry"};
        for (const auto& row : report.rows)
            table.rows.push_back({row.r.twice_spin, row.deviation, row.tail, {row.sup_entry}});
    } else if (config.command == "podles") {
        for (int s2 = 0; s2 <= config.s_max2; ++s2)
            table.rows.push_back({s2, podles_residuals({s2}, config.q).max(), 0.0, {}});
    } else if (config.command == "balayage") {
        CentralElement x;
        if (config.balayage_input == "one") {
            x = CentralElement::constant(1.0, config.s_max2);
            if (!phi.is_state())
                throw input_error("constant input requires a state (unit is then harmonic)");
        } else if (config.balayage_input == "green") {
            const GreenTable g = green_central(phi, {0}, {config.s_max2}, params);
            x.values.reserve(g.rows.size());
            for (const auto& row : g.rows) x.values.push_back(row.value);
        } else {
            throw input_error("unknown balayage input '" + config.balayage_input + "'");
        }
        std::vector<IrrepLabel> window;
        for (int y2 : config.window.empty() ? std::vector<int>{0, 1} : config.window)
            window.push_back({y2});
        const BalayageResult result = balayage(phi, window, x, params);
        for (int s2 = 0; s2 <= result.reduced.cutoff(); ++s2)
            table.rows.push_back({s2, result.reduced.values[s2], result.drop_bound, {}});
    } else if (config.command == "zerotwo") {
        const auto profile = zero_two_profile(phi, std::max(config.n, 1), config.k,
                                              {config.s_max2}, config.q);
        for (int i = 0; i < static_cast<int>(profile.size()); ++i)
            table.rows.push_back({i + 1, profile[i], 0.0, {}});
    } else {
        throw input_error("unknown command '" + config.command + "'");
    }
    return table;
}

std::string emit_json(const OutputTable& table, const RunConfig& config) {
    nlohmann::ordered_json j;
    j["q"] = config.q;
    nlohmann::ordered_json phi = nlohmann::ordered_json::array();
    const WeightFunctional parsed = parse_phi(config.phi_spec);
    for (const auto& [s, w] : parsed.entries()) phi.push_back({s.twice_spin, w});
    j["phi"] = std::move(phi);
    j["command"] = config.command;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r;
        r["s2"] = row.s2;
        r["value"] = row.value;
        r["tail_bound"] = row.tail;
        for (std::size_t i = 0; i < table.extra_columns.size(); ++i)
            r[table.extra_columns[i]] = row.extra[i];
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump();
}

std::string emit_csv(const OutputTable& table, const RunConfig& config) {
    (void)config;
    std::ostringstream os;
    os << "s2,value,tail_bound";
    for (const auto& col : table.extra_columns) os << ',' << col;
    os << '\n';
    for (const auto& row : table.rows) {
        os << row.s2 << ',' << format_double(row.value) << ',' << format_double(row.tail);
        for (double v : row.extra) os << ',' << format_double(v);
        os << '\n';
    }
    return os.str();
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.command == "verify") {
            const auto results = run_checks(config.suite, config.q, config.seed);
            int failures = 0;
            for (const auto& r : results) {
                out << (r.pass ? "PASS" : "FAIL") << ' ' << r.suite << '/' << r.name << " ("
                    << r.detail << ")\n";
                if (!r.pass) ++failures;
            }
            out << (failures == 0 ? "all checks passed" : "checks failed") << " ("
                << results.size() - failures << '/' << results.size() << ")\n";
            return failures == 0 ? 0 : 1;
        }
        const OutputTable table = compute_table(config);
        if (config.format == "json")
            out << emit_json(table, config) << '\n';
        else if (config.format == "csv")
            out << emit_csv(table, config);
        else
            throw input_error("unknown output format '" + config.format + "'");
        return 0;
    } catch (const input_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace qwalk
