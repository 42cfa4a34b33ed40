#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "magcat/commands.hpp"
#include "magcat/config.hpp"
#include "magcat/errors.hpp"
#include "magcat/parallel.hpp"
#include "magcat/validation.hpp"

namespace {

enum Exit { kOk = 0, kConfigError = 1, kNumericalError = 2, kValidationFailure = 3 };

void print_report(const magcat::CatReport& r) { std::cout << magcat::to_json(r) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Remote preparation of magnon cat states: correlations, cat preparation, parameter sweeps and lifetimes"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::string parity;
    int threads = -1;
    app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    app.add_option("--parity", parity, "cat parity")->check(CLI::IsMember({"odd", "even"}));
    app.add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

    auto* correlations = app.add_subcommand("correlations", "E_N and steering versus r");
    auto* cat = app.add_subcommand("cat", "prepare one cat: Wigner grid and figures of merit");
    auto* sweep_gamma = app.add_subcommand("sweep-gamma", "figures of merit versus magnon damping");
    auto* sweep_r = app.add_subcommand("sweep-r", "figures of merit versus squeezing parameter");
    auto* lifetime = app.add_subcommand("lifetime", "decay of delta and I after preparation");
    auto* validate = app.add_subcommand("validate", "run the oracle cross-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    try {
        magcat::RunConfig cfg = config_path.empty() ? magcat::RunConfig{} : magcat::parse_config(config_path);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (!parity.empty()) cfg.parity = magcat::parse_parity(parity);
        if (threads >= 0) cfg.threads = threads;
        magcat::set_num_threads(cfg.threads);
        for (const auto& w : cfg.params.validate()) std::cerr << "warning: " << w << '\n';

        if (*correlations) {
            for (const auto& row : magcat::cmd_correlations(cfg))
                std::cout << magcat::format_number(row.r) << ',' << magcat::format_number(row.log_negativity) << ','
                          << magcat::format_number(row.steering) << '\n';
        } else if (*cat) {
            print_report(magcat::cmd_cat(cfg));
        } else if (*sweep_gamma) {
            magcat::cmd_sweep_gamma(cfg);
        } else if (*sweep_r) {
            magcat::cmd_sweep_r(cfg);
        } else if (*lifetime) {
            const auto res = magcat::cmd_lifetime(cfg);
            std::printf("t_delta_us = %.4f\nt_I_us = %.4f\n", res.lifetimes.t_delta_us, res.lifetimes.t_I_us);
        } else if (*validate) {
            if (!magcat::print_report(magcat::cmd_validate(cfg), std::cout)) return kValidationFailure;
        }
    } catch (const magcat::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const magcat::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const magcat::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return kOk;
}
