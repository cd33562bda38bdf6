// SPDX-License-Identifier: Apache-2.0
//
// ccs: enumerate Honda witnesses, verify them against the class-number
// oracle, build count series and search for Scholz counterexamples.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccs/commands.hpp"

int main(int argc, char** argv)
{
    ccs::run_config config;
    std::string out_dir;

    CLI::App app{"Real quadratic fields with class number divisible by 3"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; command-line flags win");

    app.add_option("--x-max", config.x_max, "enumeration bound X")->capture_default_str();
    app.add_option("--checkpoints", config.checkpoints, "comma separated checkpoints")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--truth-x-max", config.truth_x_max, "oracle sweep bound")->capture_default_str();
    app.add_option("--scholz-bound", config.scholz_bound, "counterexample search bound")->capture_default_str();
    app.add_option("--workers", config.workers, "worker threads")->capture_default_str();
    auto* out_opt = app.add_option("--out", out_dir, "output directory (falls back to $CCS_OUT, then .)");
    app.add_flag("--shortcut-only", config.shortcut_only, "restrict to m = 1 mod 3, 3 not dividing n");
    app.add_option("--n-max", config.n_max, "search box: largest n")->capture_default_str();
    app.add_option("--u-cap", config.u_cap, "search box: largest u")->capture_default_str();
    app.add_option("--fit-lo", config.fit_lo, "slope window lower end")->capture_default_str();
    app.add_option("--fit-hi", config.fit_hi, "slope window upper end (0 = x-max)")->capture_default_str();
    app.add_flag("--audit-class-numbers", config.audit_class_numbers, "count: also write class_numbers.csv");

    auto* enumerate = app.add_subcommand("enumerate", "write witnesses.csv");
    auto* verify = app.add_subcommand("verify", "re-validate witnesses.csv and check 3 | h");
    auto* count = app.add_subcommand("count", "write n_honda.csv, n_truth.csv and fit the growth slope");
    auto* falsify = app.add_subcommand("falsify-scholz", "write counterexamples.csv");
    for (auto* sub : {enumerate, verify, count, falsify}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ccs::exit_config;
    }

    if (out_opt->count() > 0) {
        config.output_dir = out_dir;
    } else if (const char* env = std::getenv("CCS_OUT"); env != nullptr && *env != '\0') {
        config.output_dir = env;
    }

    std::string name;
    for (auto* sub : {enumerate, verify, count, falsify}) {
        if (sub->parsed()) {
            name = sub->get_name();
        }
    }
    return ccs::run_command(name, config, std::cout, std::cerr);
}
