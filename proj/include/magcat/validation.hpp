#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "magcat/config.hpp"

namespace magcat {

struct Check {
    std::string name;
    bool passed;
    double measured;
    double tolerance;
};

/// Oracle cross-checks of the whole library at the configured parameters.
std::vector<Check> run_validation(const RunConfig& config);

/// W(x) of a single-mode characteristic PolyGaussian by trapezoidal
/// quadrature of (2 pi)^-2 \int C(k) e^{-i k.x} d^2k over [-L, L]^2.
double wigner_by_quadrature(const PolyGaussian& c, double x, double y, double half_width = 16.0, int points = 321);

/// Writes one line per check, returns true when all passed.
bool print_report(const std::vector<Check>& checks, std::ostream& out);

/// Runs the checks, writes validate.json and validate.config.json.
std::vector<Check> cmd_validate(const RunConfig& config);

}  // namespace magcat
