#pragma once

// Command drivers. Each command writes its data files and a
// `<command>.config.json` sidecar with the resolved configuration into
// config.output_dir, and returns the computed rows.

#include <string>
#include <vector>

#include "magcat/catmetrics.hpp"
#include "magcat/config.hpp"
#include "magcat/decoherence.hpp"

namespace magcat {

struct CorrelationRow {
    double r;
    double log_negativity;
    double steering;
};

struct SweepRow {
    double x;
    bool ok;
    CatReport report;
    std::string error;
};

struct LifetimeResult {
    Lifetimes lifetimes;
    std::vector<DecaySample> series;
};

std::vector<CorrelationRow> cmd_correlations(const RunConfig& config);
CatReport cmd_cat(const RunConfig& config);
/// One sweep per parity; files sweep_gamma_odd.csv and sweep_gamma_even.csv.
std::vector<SweepRow> sweep_gamma(const RunConfig& config, Parity parity);
void cmd_sweep_gamma(const RunConfig& config);
std::vector<SweepRow> sweep_r(const RunConfig& config, Parity parity);
void cmd_sweep_r(const RunConfig& config);
LifetimeResult cmd_lifetime(const RunConfig& config);

/// 17 significant digits, "nan" for NaN.
std::string format_number(double v);

}  // namespace magcat
