#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "magcat/catmetrics.hpp"
#include "magcat/conditioning.hpp"
#include "magcat/dynamics.hpp"
#include "magcat/phasespace.hpp"

namespace magcat {

struct SweepRange {
    double start;
    double stop;
    int count;

    double at(int i) const { return count == 1 ? start : start + (stop - start) * i / (count - 1); }
};

struct RunConfig {
    SystemParams params;
    Imperfections imperfections;
    Parity parity = Parity::Odd;
    GridAxes grid;
    std::filesystem::path output_dir = ".";
    int threads = 1;

    SweepRange sweep_r{0.01, 0.5, 50};
    SweepRange sweep_gamma{0.0, 0.24, 25};

    double lifetime_t_max_us = 10.0;
    double lifetime_threshold_delta = 1e-3;
    double lifetime_threshold_I = 1e-3;
    double lifetime_step_us = 0.05;
    SweepRange series_t{0.0, 1.5, 31};
    bool lab_frame = false;
};

/// `key = value` lines, `#` starts a comment. Unknown keys, unparsable values
/// and violated ranges raise ConfigError naming the key and line.
RunConfig parse_config(std::istream& in);
RunConfig parse_config(const std::filesystem::path& path);

/// Every resolved field as a flat JSON object.
std::string to_json(const RunConfig& config);

}  // namespace magcat
