#include "magcat/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "magcat/catmetrics.hpp"
#include "magcat/errors.hpp"
#include "magcat/parallel.hpp"

namespace magcat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double gamma_rate(double gamma_mhz) { return kTwoPi * gamma_mhz; }
double omega_rate(double omega_m_ghz) { return kTwoPi * 1e3 * omega_m_ghz; }

void check_inputs(double gamma_mhz, double t_us) {
    if (!(gamma_mhz >= 0.0) || !std::isfinite(gamma_mhz)) throw ParameterError("gamma must be finite and >= 0");
    if (!(t_us >= 0.0) || !std::isfinite(t_us)) throw ParameterError("time must be finite and >= 0");
}

}  // namespace

PolyGaussian damp_channel(const PolyGaussian& state, double gamma_mhz, double omega_m_ghz, double t_us) {
    check_inputs(gamma_mhz, t_us);
    if (state.n_vars() != 2) throw DimensionError("damping acts on a single-mode state");
    const bool wigner = state.domain() == Domain::Wigner;
    const PolyGaussian c = wigner ? wigner_to_char(state) : state;
    const double decay = std::exp(-gamma_rate(gamma_mhz) * t_us);
    const double phi = std::fmod(omega_rate(omega_m_ghz) * t_us, kTwoPi);
    Eigen::MatrixXcd M(2, 2);
    M << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    M *= decay;
    const PolyGaussian contracted = affine_substitute(c, M, Eigen::VectorXcd::Zero(2));
    const double noise = -std::expm1(-2.0 * gamma_rate(gamma_mhz) * t_us);
    const PolyGaussian out = multiply_gaussian(contracted, Eigen::MatrixXcd::Identity(2, 2) * (0.5 * noise));
    return wigner ? char_to_wigner(out) : out;
}

PolyGaussianMixture damp_channel(const PolyGaussianMixture& state, double gamma_mhz, double omega_m_ghz,
                                 double t_us) {
    PolyGaussianMixture out;
    for (const auto& term : state.terms)
        out.terms.push_back({term.weight, damp_channel(term.state, gamma_mhz, omega_m_ghz, t_us)});
    return out;
}

namespace {

struct Stencil {
    const GridAxes& axes;
    double gamma;
    double omega;

    // 4th-order central first and second differences along one axis; the
    // points next to the boundary fall back to 2nd order, the boundary itself
    // is held at zero.
    static void diffs(const double* f, int stride, int n, double h, int i, double& d1, double& d2) {
        auto at = [&](int k) { return f[k * stride]; };
        if (i >= 2 && i + 2 < n) {
            d1 = (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
            d2 = (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) + 16.0 * at(i + 1) - at(i + 2)) / (12.0 * h * h);
        } else {
            d1 = (at(i + 1) - at(i - 1)) / (2.0 * h);
            d2 = (at(i - 1) - 2.0 * at(i) + at(i + 1)) / (h * h);
        }
    }

    Eigen::MatrixXd rhs(const Eigen::MatrixXd& W) const {
        const int nx = axes.nx, ny = axes.ny;
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ny, nx);
        // values(j, i) is column-major: stepping i moves by ny, stepping j by 1.
        const double* base = W.data();
        for (int i = 1; i + 1 < nx; ++i) {
            const double x = axes.x(i);
            for (int j = 1; j + 1 < ny; ++j) {
                const double y = axes.y(j);
                double wx, wxx, wy, wyy;
                diffs(base + j, ny, nx, axes.dx(), i, wx, wxx);
                diffs(base + static_cast<std::ptrdiff_t>(i) * ny, 1, ny, axes.dy(), j, wy, wyy);
                out(j, i) = gamma * (2.0 * W(j, i) + x * wx + y * wy + 0.5 * (wxx + wyy)) + omega * (x * wy - y * wx);
            }
        }
        return out;
    }
};

}  // namespace

WignerGrid fp_evolve_grid(const WignerGrid& grid, double gamma_mhz, double omega_m_ghz, double dt_us, int steps) {
    check_inputs(gamma_mhz, dt_us);
    if (steps < 0) throw ParameterError("steps must be >= 0");
    if (grid.axes.nx < 5 || grid.axes.ny < 5) throw DimensionError("grid too small for the stencil");
    const Stencil st{grid.axes, gamma_rate(gamma_mhz), omega_rate(omega_m_ghz)};
    WignerGrid out = grid;
    const double limit = 10.0 * grid.values.cwiseAbs().maxCoeff();
    Eigen::MatrixXd& W = out.values;
    for (int s = 0; s < steps; ++s) {
        const Eigen::MatrixXd k1 = st.rhs(W);
        const Eigen::MatrixXd k2 = st.rhs(W + 0.5 * dt_us * k1);
        const Eigen::MatrixXd k3 = st.rhs(W + 0.5 * dt_us * k2);
        const Eigen::MatrixXd k4 = st.rhs(W + dt_us * k3);
        W += dt_us / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!(W.cwiseAbs().maxCoeff() <= limit)) throw StabilityError("Fokker-Planck integration diverged");
    }
    out.trace_weight = out.integral();
    return out;
}

namespace {

DecaySample sample_at(const PolyGaussianMixture& state, double gamma_mhz, double omega_m_ghz, double t,
                      const LifetimeOptions& opt) {
    const double omega = opt.lab_frame ? omega_m_ghz : 0.0;
    const PolyGaussianMixture evolved = damp_channel(state, gamma_mhz, omega, t).normalized();
    const WignerGrid g = eval_grid(evolved, opt.axes, true);
    return {t, wigner_negativity(g), macroscopicity(evolved, opt.axes)};
}

// First time in (lo, hi] where metric(t) <= threshold, given metric(lo) above it.
template <class Metric>
double bisect(Metric metric, double lo, double hi, double threshold, double resolution) {
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        if (metric(mid) <= threshold)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace

Lifetimes lifetime(const PolyGaussianMixture& state, double gamma_mhz, double omega_m_ghz,
                   const LifetimeOptions& opt) {
    check_inputs(gamma_mhz, 0.0);
    const DecaySample start = sample_at(state, gamma_mhz, omega_m_ghz, 0.0, opt);
    if (!(start.delta > opt.threshold_delta)) throw ParameterError("initial negativity already below threshold");
    // Without damping the state is stationary in the rotating frame.
    if (gamma_mhz == 0.0) throw HorizonError("no decay: thresholds never crossed");

    const int n = static_cast<int>(std::ceil(opt.t_max_us / opt.coarse_step_us));
    double prev = 0.0;
    bool have_delta = false, have_I = false;
    Lifetimes out{0.0, 0.0};
    auto delta_at = [&](double t) { return sample_at(state, gamma_mhz, omega_m_ghz, t, opt).delta; };
    auto I_at = [&](double t) { return sample_at(state, gamma_mhz, omega_m_ghz, t, opt).macroscopicity; };
    bool I_start_below = !(start.macroscopicity > opt.threshold_I);
    if (I_start_below) {
        out.t_I_us = 0.0;
        have_I = true;
    }
    const int batch = std::max(1, num_threads());
    for (int k0 = 1; k0 <= n && !(have_delta && have_I); k0 += batch) {
        const int count = std::min(batch, n - k0 + 1);
        std::vector<double> times(count);
        for (int i = 0; i < count; ++i) times[i] = std::min(opt.t_max_us, (k0 + i) * opt.coarse_step_us);
        const std::vector<DecaySample> samples = decay_series(state, gamma_mhz, omega_m_ghz, times, opt);
        for (const DecaySample& s : samples) {
            if (!have_delta && s.delta <= opt.threshold_delta) {
                out.t_delta_us = bisect(delta_at, prev, s.t_us, opt.threshold_delta, opt.resolution_us);
                have_delta = true;
            }
            if (!have_I && s.macroscopicity <= opt.threshold_I) {
                out.t_I_us = bisect(I_at, prev, s.t_us, opt.threshold_I, opt.resolution_us);
                have_I = true;
            }
            prev = s.t_us;
            if (have_delta && have_I) break;
        }
    }
    if (!(have_delta && have_I)) throw HorizonError("thresholds not crossed within the time horizon");
    return out;
}

std::vector<DecaySample> decay_series(const PolyGaussianMixture& state, double gamma_mhz, double omega_m_ghz,
                                      const std::vector<double>& times_us, const LifetimeOptions& options) {
    std::vector<DecaySample> out(times_us.size());
    parallel_for(times_us.size(), [&](std::size_t i) {
        out[i] = sample_at(state, gamma_mhz, omega_m_ghz, times_us[i], options);
    });
    return out;
}

void write_decay_csv(const std::vector<DecaySample>& samples, std::ostream& out) {
    out << "t_us,delta,macroscopicity\n";
    char buf[96];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.t_us, s.delta, s.macroscopicity);
        out << buf;
    }
}

}  // namespace magcat
