#include "magcat/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "magcat/conditioning.hpp"
#include "magcat/errors.hpp"
#include "magcat/gaussian_measures.hpp"
#include "magcat/parallel.hpp"

namespace magcat {

namespace fs = std::filesystem;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_output(const RunConfig& config, const std::string& name) {
    fs::create_directories(config.output_dir);
    const fs::path path = config.output_dir / name;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

void write_sidecar(const RunConfig& config, const std::string& command) {
    open_output(config, command + ".config.json") << to_json(config) << '\n';
}

SweepRow run_point(const SystemParams& params, const RunConfig& config, Parity parity, double x) {
    SweepRow row{x, false, {}, {}};
    try {
        const PreparedCat cat = prepare_cat(params, parity, config.imperfections);
        row.report = cat_report(cat.state, parity, config.grid, cat.herald_weight);
        row.ok = true;
    } catch (const NumericalError& e) {
        row.error = e.what();
    }
    return row;
}

void write_sweep_csv(const RunConfig& config, const std::string& name, const char* x_column,
                     const std::vector<SweepRow>& rows) {
    auto out = open_output(config, name);
    out << x_column << ",alpha_sq,fidelity,delta,macroscopicity\n";
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& row : rows) {
        const CatReport& r = row.report;
        out << format_number(row.x) << ',' << format_number(row.ok ? r.alpha_sq : nan) << ','
            << format_number(row.ok ? r.fidelity : nan) << ',' << format_number(row.ok ? r.negativity : nan) << ','
            << format_number(row.ok ? r.macroscopicity : nan) << '\n';
    }
}

}  // namespace

std::vector<CorrelationRow> cmd_correlations(const RunConfig& config) {
    const SweepRange& range = config.sweep_r;
    std::vector<CorrelationRow> rows(range.count);
    parallel_for(rows.size(), [&](std::size_t i) {
        SystemParams p = config.params;
        p.tau_us.reset();
        p.r = range.at(static_cast<int>(i));
        const CovarianceMatrix V = output_covariance(p);
        rows[i] = {*p.r, log_negativity(V), steering(V, SteeringDirection::MagnonToOptical)};
    });
    auto out = open_output(config, "correlations.csv");
    out << "r,E_N,steering\n";
    for (const auto& row : rows)
        out << format_number(row.r) << ',' << format_number(row.log_negativity) << ',' << format_number(row.steering)
            << '\n';
    write_sidecar(config, "correlations");
    return rows;
}

CatReport cmd_cat(const RunConfig& config) {
    const PreparedCat cat = prepare_cat(config.params, config.parity, config.imperfections);
    const CatReport report = cat_report(cat.state, config.parity, config.grid, cat.herald_weight);
    const std::string stem = "cat_" + to_string(config.parity);
    auto grid_out = open_output(config, stem + "_wigner.csv");
    write_grid_csv(eval_grid(cat.state, config.grid, true), grid_out);
    open_output(config, stem + "_report.json") << to_json(report) << '\n';
    write_sidecar(config, "cat");
    return report;
}

std::vector<SweepRow> sweep_gamma(const RunConfig& config, Parity parity) {
    const SweepRange& range = config.sweep_gamma;
    std::vector<SweepRow> rows(range.count);
    parallel_for(rows.size(), [&](std::size_t i) {
        SystemParams p = config.params;
        p.gamma_mhz = range.at(static_cast<int>(i));
        rows[i] = run_point(p, config, parity, p.gamma_mhz);
    });
    return rows;
}

void cmd_sweep_gamma(const RunConfig& config) {
    for (Parity parity : {Parity::Odd, Parity::Even})
        write_sweep_csv(config, "sweep_gamma_" + to_string(parity) + ".csv", "gamma_mhz", sweep_gamma(config, parity));
    write_sidecar(config, "sweep-gamma");
}

std::vector<SweepRow> sweep_r(const RunConfig& config, Parity parity) {
    const SweepRange& range = config.sweep_r;
    std::vector<SweepRow> rows(range.count);
    parallel_for(rows.size(), [&](std::size_t i) {
        SystemParams p = config.params;
        p.tau_us.reset();
        p.r = range.at(static_cast<int>(i));
        rows[i] = run_point(p, config, parity, *p.r);
    });
    return rows;
}

void cmd_sweep_r(const RunConfig& config) {
    for (Parity parity : {Parity::Odd, Parity::Even})
        write_sweep_csv(config, "sweep_r_" + to_string(parity) + ".csv", "r", sweep_r(config, parity));
    write_sidecar(config, "sweep-r");
}

LifetimeResult cmd_lifetime(const RunConfig& config) {
    const PreparedCat cat = prepare_cat(config.params, config.parity, config.imperfections);
    LifetimeOptions opt;
    opt.threshold_delta = config.lifetime_threshold_delta;
    opt.threshold_I = config.lifetime_threshold_I;
    opt.t_max_us = config.lifetime_t_max_us;
    opt.coarse_step_us = config.lifetime_step_us;
    opt.lab_frame = config.lab_frame;
    opt.axes = config.grid;
    const double gamma = config.params.gamma_mhz;
    const double omega = config.params.omega_m_ghz;

    std::vector<double> times(config.series_t.count);
    for (int i = 0; i < config.series_t.count; ++i) times[i] = config.series_t.at(i);
    LifetimeResult result{lifetime(cat.state, gamma, omega, opt), decay_series(cat.state, gamma, omega, times, opt)};

    const std::string stem = "lifetime_" + to_string(config.parity);
    auto series_out = open_output(config, stem + ".csv");
    write_decay_csv(result.series, series_out);
    nlohmann::ordered_json j;
    j["parity"] = to_string(config.parity);
    j["gamma_mhz"] = gamma;
    j["t_delta_us"] = result.lifetimes.t_delta_us;
    j["t_I_us"] = result.lifetimes.t_I_us;
    open_output(config, stem + ".json") << j.dump(2) << '\n';
    write_sidecar(config, "lifetime");
    return result;
}

}  // namespace magcat
