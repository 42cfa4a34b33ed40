#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "magcat/phasespace.hpp"

namespace test {

inline double at(const magcat::PolyGaussianMixture& m, double x, double y) {
    const double p[2] = {x, y};
    return m.evaluate(p).real();
}

inline double at(const magcat::PolyGaussian& f, double x, double y) {
    const double p[2] = {x, y};
    return f.evaluate(p).real();
}

inline magcat::PolyGaussianMixture wigner_of(const magcat::PolyGaussian& characteristic) {
    return magcat::PolyGaussianMixture(magcat::char_to_wigner(characteristic)).normalized();
}

inline magcat::GridAxes square_grid(double half_width, int n) {
    magcat::GridAxes ax;
    ax.x_min = ax.y_min = -half_width;
    ax.x_max = ax.y_max = half_width;
    ax.nx = ax.ny = n;
    return ax;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("magcat_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace test
