#pragma once

// Pulsed optomagnonic two-mode squeezing with magnon damping and thermal
// noise. User-facing rates are nu = omega / 2pi in MHz (omega_m in GHz);
// internally everything is in rad/us and us.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "magcat/errors.hpp"

namespace magcat {

/// Quadrature covariance over u = (X_C, Y_C, X_M, Y_M); vacuum is I/2.
using CovarianceMatrix = Eigen::Matrix4d;

struct SystemParams {
    double g0_mhz = 0.1;      ///< single-photon coupling g0/2pi
    double beta_amp = 50.0;   ///< intracavity amplitude |beta|
    double g_mhz = 5.0;       ///< effective coupling g/2pi = g0 |beta| / 2pi
    double kappa_mhz = 100.0; ///< optical decay kappa/2pi
    double gamma_mhz = 0.1;   ///< magnon decay gamma/2pi
    double omega_m_ghz = 10.0;
    /// Exactly one of tau_us and r must be set.
    std::optional<double> tau_us;
    std::optional<double> r = 0.2;
    double temperature_k = 0.0;
    double n_m = 0.0;
    double n_c = 0.0;
    double s_total = 1e10;

    /// Throws ParameterError for malformed values and UnstableRegimeError when
    /// G = g^2/kappa - gamma <= 0. Returns human-readable warnings (adiabatic
    /// regime violated).
    std::vector<std::string> validate() const;
};

struct Rates {
    double G;       ///< rad/us
    double G_mhz;   ///< G / 2pi
    double r;
    double tau_us;
};

Rates derive_rates(const SystemParams& params);

/// Bose-Einstein occupation at frequency nu (GHz) and temperature T (K).
double thermal_occupation(double nu_ghz, double temperature_k);

/// Second moments of the filtered input modes C_in, C~_in (optical white
/// noise) and M_m, M~_m (magnon white noise). The two kernels of a family
/// overlap by r / sinh r; modes of different families are independent.
struct TemporalOverlaps {
    double r = 0.0;
    double n_c = 0.0;
    double n_m = 0.0;
    double cross = 1.0;  ///< r / sinh(r)

    /// <A A^dag> for two filtered modes of one family (same = A equals B).
    double anti_normal(bool same, bool magnon) const { return (same ? 1.0 : cross) * (1.0 + (magnon ? n_m : n_c)); }
    /// <A^dag B>.
    double normal(bool same, bool magnon) const { return (same ? 1.0 : cross) * (magnon ? n_m : n_c); }
};

TemporalOverlaps temporal_overlaps(double r, double n_c, double n_m);

/// Output mode expressed in the input basis
///   {M_in, C_in, C~_in, M_m, M~_m}:  O = sum_j (u_j a_j + v_j a_j^dag).
struct LinearMode {
    std::array<std::complex<double>, 5> u{};
    std::array<std::complex<double>, 5> v{};
};

struct OutputModes {
    LinearMode c_out;
    LinearMode m_out;
    TemporalOverlaps overlaps;
};

/// Bogoliubov relations of the output modes at the end of the pulse, with
/// the cavity adiabatically eliminated.
OutputModes output_modes(const SystemParams& params);

/// [A, B^dag] evaluated with the kernel overlaps of the input basis.
std::complex<double> commutator(const LinearMode& a, const LinearMode& b, const TemporalOverlaps& overlaps);

CovarianceMatrix output_covariance(const SystemParams& params);

enum class OracleModel {
    Adiabatic,  ///< magnon Langevin equation with the cavity eliminated
    Full,       ///< coupled magnon-cavity Langevin equations
};

/// Integrates the second-moment ODE of (magnon, [cavity,] filtered output
/// accumulator) over the pulse with classical RK4 and assembles V.
CovarianceMatrix covariance_oracle_ode(const SystemParams& params, OracleModel model = OracleModel::Full,
                                       int steps = 20000);

/// <m^dag m> / (2 S). Warns (via the returned flag) above 1e-3.
struct HpValidity {
    double ratio;
    bool warn;
};
HpValidity hp_validity(double magnon_number, double s_total);

}  // namespace magcat
