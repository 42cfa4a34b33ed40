#pragma once

// Zero-temperature magnon damping of a prepared single-mode state.
// gamma is gamma/2pi in MHz, omega_m is omega_m/2pi in GHz, times in us.

#include <iosfwd>
#include <vector>

#include "magcat/phasespace.hpp"

namespace magcat {

/// Exact loss channel on the characteristic function:
///   C_t(k) = C_0(e^{-gamma t} R(omega_m t) k) exp(-(1 - e^{-2 gamma t}) |k|^2 / 4).
PolyGaussian damp_channel(const PolyGaussian& state, double gamma_mhz, double omega_m_ghz, double t_us);
PolyGaussianMixture damp_channel(const PolyGaussianMixture& state, double gamma_mhz, double omega_m_ghz,
                                 double t_us);

/// Explicit RK4 integration of the Fokker-Planck equation
///   dW/dt = gamma (div(x W) + lap(W) / 2) + omega (X d_Y - Y d_X) W
/// with 4th-order central differences and zero boundary values.
WignerGrid fp_evolve_grid(const WignerGrid& grid, double gamma_mhz, double omega_m_ghz, double dt_us, int steps);

struct LifetimeOptions {
    double threshold_delta = 1e-3;
    double threshold_I = 1e-3;
    double t_max_us = 10.0;
    double coarse_step_us = 0.05;
    double resolution_us = 0.01;
    bool lab_frame = false;  ///< rotate at omega_m instead of the rotating frame
    GridAxes axes{};
};

struct Lifetimes {
    double t_delta_us;
    double t_I_us;
};

Lifetimes lifetime(const PolyGaussianMixture& state, double gamma_mhz, double omega_m_ghz,
                   const LifetimeOptions& options = {});

struct DecaySample {
    double t_us;
    double delta;
    double macroscopicity;
};

std::vector<DecaySample> decay_series(const PolyGaussianMixture& state, double gamma_mhz, double omega_m_ghz,
                                      const std::vector<double>& times_us, const LifetimeOptions& options = {});

void write_decay_csv(const std::vector<DecaySample>& samples, std::ostream& out);

}  // namespace magcat
