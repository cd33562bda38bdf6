// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Batch commands behind the `ccs` executable. Each command is a
/// deterministic function of a run_config; it writes CSV artifacts into
/// run_config::output_dir, prints a short report and returns an exit code.
///
/// Exit codes: 0 success, 1 arithmetic fault, 2 configuration,
/// 3 verification failure, 4 empty falsification.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ccs/classnum.hpp"
#include "ccs/counting.hpp"
#include "ccs/errors.hpp"
#include "ccs/honda.hpp"

namespace ccs {

enum exit_code : int {
    exit_ok = 0,
    exit_arithmetic = 1,
    exit_config = 2,
    exit_verification = 3,
    exit_empty_falsification = 4,
};

struct run_config {
    u64 x_max = 1'000'000;
    std::vector<u64> checkpoints = {100, 1'000, 10'000, 100'000, 1'000'000};
    u64 truth_x_max = default_truth_x_max;
    u64 scholz_bound = 1'000;
    unsigned workers = 1;
    std::filesystem::path output_dir = ".";
    bool shortcut_only = false;
    u64 n_max = enum_config{}.n_max;
    u64 u_cap = enum_config{}.u_cap;
    /// Slope window; fit_hi = 0 means x_max.
    u64 fit_lo = 1'000;
    u64 fit_hi = 0;
    bool audit_class_numbers = false;

    enum_config box() const { return {n_max, u_cap, workers, shortcut_only}; }
};

inline void validate(const run_config& c)
{
    if (c.workers < 1) {
        throw config_error("workers must be at least 1");
    }
    if (c.x_max < 2) {
        throw config_error("x-max must be at least 2");
    }
    require_increasing(c.checkpoints);
    if (c.checkpoints.back() > c.x_max) {
        throw config_error("checkpoint " + std::to_string(c.checkpoints.back()) + " exceeds x-max " + std::to_string(c.x_max));
    }
    if (c.truth_x_max < 2 || c.truth_x_max > oracle_max_d) {
        throw config_error("truth-x-max must lie in [2, " + std::to_string(oracle_max_d) + "]");
    }
    if (c.scholz_bound < 1 || c.scholz_bound > oracle_max_d) {
        throw config_error("scholz-bound must lie in [1, " + std::to_string(oracle_max_d) + "]");
    }
    plan_box(c.x_max, c.box());
}

namespace detail {

inline std::ofstream open_output(const run_config& c, std::string_view name)
{
    std::filesystem::create_directories(c.output_dir);
    const auto path = c.output_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw config_error("cannot write " + path.string());
    }
    return out;
}

}  // namespace detail

inline int cmd_enumerate(const run_config& c, std::ostream& report)
{
    validate(c);
    const auto rows = enumerate_discriminants(c.x_max, c.box());
    auto out = detail::open_output(c, "witnesses.csv");
    write_witness_csv(out, rows);
    out.close();
    report << "witnesses: " << rows.size() << '\n';
    return exit_ok;
}

inline int cmd_verify(const run_config& c, std::ostream& report)
{
    if (c.truth_x_max < 2 || c.truth_x_max > oracle_max_d) {
        throw config_error("truth-x-max must lie in [2, " + std::to_string(oracle_max_d) + "]");
    }
    const auto path = c.output_dir / "witnesses.csv";
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw config_error("cannot read " + path.string());
    }
    std::vector<witness_row> rows;
    try {
        rows = read_witness_csv(in);
    } catch (const std::runtime_error& e) {
        throw config_error(e.what());
    }
    u64 checked = 0;
    u64 passed = 0;
    u64 failed = 0;
    u64 oracle_checked = 0;
    for (const auto& row : rows) {
        ++checked;
        const auto& w = row.witness;
        const auto result = validate_witness(w.n, w.u, w.m, w.d);
        if (const auto* why = std::get_if<rejection>(&result)) {
            ++failed;
            report << "FAIL line " << row.line << ": " << row.text << " (" << to_string(*why) << ")\n";
            continue;
        }
        if (w.d <= c.truth_x_max) {
            ++oracle_checked;
            if (!three_divides_real_class_number(w.d)) {
                ++failed;
                report << "FAIL line " << row.line << ": " << row.text << " (oracle: 3 does not divide h+)\n";
                continue;
            }
        }
        ++passed;
    }
    report << "checked: " << checked << '\n'
           << "passed: " << passed << '\n'
           << "failed: " << failed << '\n'
           << "# oracle-checked (d <= " << c.truth_x_max << "): " << oracle_checked << '\n';
    return failed == 0 ? exit_ok : exit_verification;
}

inline int cmd_count(const run_config& c, std::ostream& report)
{
    validate(c);
    const auto honda = honda_count_series(c.checkpoints, c.box(), c.x_max);

    std::vector<u64> truth_xs;
    for (const u64 x : c.checkpoints) {
        if (x <= c.truth_x_max) {
            truth_xs.push_back(x);
        }
    }
    if (truth_xs.empty()) {
        throw config_error("no checkpoint lies within truth-x-max");
    }
    const auto truth = truth_count_series(truth_xs, c.truth_x_max, c.workers);
    {
        auto out = detail::open_output(c, "n_honda.csv");
        write_series_csv(out, honda);
    }
    {
        auto out = detail::open_output(c, "n_truth.csv");
        write_series_csv(out, truth);
    }
    if (c.audit_class_numbers) {
        std::vector<class_number_result> audit;
        for (u64 d = 2; d <= truth_xs.back(); ++d) {
            if (is_squarefree(d)) {
                audit.push_back(class_number_real_narrow(fundamental_discriminant(static_cast<i64>(d))));
            }
        }
        auto out = detail::open_output(c, "class_numbers.csv");
        write_class_number_csv(out, audit);
    }

    int code = exit_ok;
    for (const auto& t : truth.checkpoints) {
        for (const auto& h : honda.checkpoints) {
            if (h.x == t.x && t.count < h.count) {
                report << "FAIL containment at X=" << t.x << ": truth " << t.count << " < honda " << h.count << '\n';
                code = exit_verification;
            }
        }
    }

    const u64 hi = c.fit_hi == 0 ? c.x_max : c.fit_hi;
    slope_report fit;
    try {
        fit = fit_slope(honda, c.fit_lo, hi);
    } catch (const std::domain_error& e) {
        throw config_error(e.what());
    }
    const auto old_flags = report.flags();
    report << std::fixed << std::setprecision(4)
           << "slope: " << fit.slope << '\n'
           << "intercept: " << fit.intercept << '\n'
           << "residual_max: " << fit.residual_max << '\n'
           << "window: " << fit.x_lo << ',' << fit.x_hi << '\n'
           << "points: " << fit.points << '\n';
    report.flags(old_flags);
    return code;
}

inline int cmd_falsify_scholz(const run_config& c, std::ostream& report)
{
    if (c.scholz_bound < 1 || c.scholz_bound > oracle_max_d) {
        throw config_error("scholz-bound must lie in [1, " + std::to_string(oracle_max_d) + "]");
    }
    const auto found = scholz_counterexample_search(c.scholz_bound, c.workers);
    auto out = detail::open_output(c, "counterexamples.csv");
    write_counterexample_csv(out, found);
    out.close();
    report << "counterexamples: " << found.size() << '\n';
    return found.empty() ? exit_empty_falsification : exit_ok;
}

/// Runs one named command, mapping exceptions onto exit codes.
inline int run_command(std::string_view name, const run_config& c, std::ostream& report, std::ostream& errors)
{
    try {
        if (name == "enumerate") {
            return cmd_enumerate(c, report);
        }
        if (name == "verify") {
            return cmd_verify(c, report);
        }
        if (name == "count") {
            return cmd_count(c, report);
        }
        if (name == "falsify-scholz") {
            return cmd_falsify_scholz(c, report);
        }
        errors << "error: unknown command '" << name << "'\n";
        return exit_config;
    } catch (const config_error& e) {
        errors << "error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::filesystem::filesystem_error& e) {
        errors << "error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::range_error& e) {
        errors << "arithmetic fault: " << e.what() << '\n';
        return exit_arithmetic;
    } catch (const std::overflow_error& e) {
        errors << "arithmetic fault: " << e.what() << '\n';
        return exit_arithmetic;
    }
}

}  // namespace ccs
