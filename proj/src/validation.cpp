#include "magcat/validation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>

#include <json.hpp>

#include "magcat/catmetrics.hpp"
#include "magcat/conditioning.hpp"
#include "magcat/decoherence.hpp"
#include "magcat/dynamics.hpp"

namespace magcat {

namespace {

constexpr double kPi = std::numbers::pi;

Check make(std::string name, double measured, double tolerance) {
    return {std::move(name), measured <= tolerance, measured, tolerance};
}

double max_abs_diff(const CovarianceMatrix& a, const CovarianceMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

SystemParams with_r(SystemParams p, double r) {
    p.tau_us.reset();
    p.r = r;
    return p;
}

Eigen::Matrix2d random_single_mode_cov(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double s = 0.5 * u(rng), phi = kPi * u(rng), n = 0.5 * u(rng);
    Eigen::Matrix2d S;
    S << std::exp(s), 0.0, 0.0, std::exp(-s);
    Eigen::Matrix2d R;
    R << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return (n + 0.5) * R * S * S * R.transpose();
}

}  // namespace

double wigner_by_quadrature(const PolyGaussian& c, double x, double y, double half_width, int points) {
    const double h = 2.0 * half_width / (points - 1);
    std::complex<double> sum = 0.0;
    for (int j = 0; j < points; ++j) {
        const double ky = -half_width + j * h;
        for (int i = 0; i < points; ++i) {
            const double kx = -half_width + i * h;
            const double k[2] = {kx, ky};
            const double wx = (i == 0 || i == points - 1) ? 0.5 : 1.0;
            const double wy = (j == 0 || j == points - 1) ? 0.5 : 1.0;
            sum += wx * wy * c.evaluate(k) * std::exp(std::complex<double>(0.0, -(kx * x + ky * y)));
        }
    }
    return (sum * h * h).real() / (4.0 * kPi * kPi);
}

std::vector<Check> run_validation(const RunConfig& config) {
    std::vector<Check> checks;
    const SystemParams base = config.params;

    {
        double worst = 0.0;
        for (int i = 1; i <= 8; ++i) {
            const SystemParams p = with_r(base, 0.05 * i);
            worst = std::max(worst, max_abs_diff(output_covariance(p), covariance_oracle_ode(p, OracleModel::Adiabatic)));
        }
        checks.push_back(make("covariance vs eliminated-cavity moment ODE", worst, 1e-5));
    }
    {
        // The coupled-cavity ODE carries the O(1/kappa) elimination residual;
        // it must shrink tenfold when kappa grows tenfold at fixed g^2/kappa.
        SystemParams p = with_r(base, 0.2);
        const double d1 = max_abs_diff(output_covariance(p), covariance_oracle_ode(p, OracleModel::Full));
        p.kappa_mhz *= 10.0;
        p.g_mhz *= std::sqrt(10.0);
        const double d2 = max_abs_diff(output_covariance(p), covariance_oracle_ode(p, OracleModel::Full));
        checks.push_back(make("coupled-cavity ODE residual scales as 1/kappa", std::abs(d2 / d1 - 0.1), 0.03));
    }
    {
        double worst = 0.0;
        for (int i = 1; i <= 10; ++i) {
            SystemParams p = with_r(base, 0.04 * i);
            p.n_m = 0.02 * (i % 4);
            const OutputModes m = output_modes(p);
            worst = std::max(worst, std::abs(commutator(m.m_out, m.m_out, m.overlaps) - 1.0));
            worst = std::max(worst, std::abs(commutator(m.c_out, m.c_out, m.overlaps) - 1.0));
            worst = std::max(worst, std::abs(commutator(m.c_out, m.m_out, m.overlaps)));
        }
        checks.push_back(make("output-mode commutators", worst, 1e-10));
    }
    {
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        double worst = 0.0;
        for (int n = 0; n < 20; ++n) {
            PolyGaussian c = gaussian_char_from_cov(random_single_mode_cov(rng));
            if (n % 3 != 0) c = apply_subtraction(c, 0);
            if (n % 2 == 0) c = apply_addition(c, 0);
            const PolyGaussian w = char_to_wigner(c);
            const double x = u(rng), y = u(rng);
            const double pt[2] = {x, y};
            worst = std::max(worst, std::abs(w.evaluate(pt).real() - wigner_by_quadrature(c, x, y)));
        }
        checks.push_back(make("char_to_wigner vs Fourier quadrature", worst, 1e-6));
    }

    const PreparedCat odd = prepare_cat(with_r(base, 0.2), Parity::Odd);
    {
        GridAxes ax = config.grid;
        ax.nx = ax.ny = 121;
        const double t = 0.5, gamma = base.gamma_mhz > 0.0 ? base.gamma_mhz : 0.1;
        const WignerGrid fp = fp_evolve_grid(eval_grid(odd.state, ax), gamma, 0.0, t / 500, 500);
        const WignerGrid exact = eval_grid(damp_channel(odd.state, gamma, 0.0, t), ax);
        checks.push_back(make("damp_channel vs Fokker-Planck (L1)", (fp.values - exact.values).cwiseAbs().sum() * fp.cell_area, 1e-3));
    }
    {
        // Wide enough that the truncated tails are far below the tolerance.
        GridAxes wide;
        wide.x_min = wide.y_min = -10.0;
        wide.x_max = wide.y_max = 10.0;
        wide.nx = wide.ny = 401;
        double worst = 0.0;
        const PolyGaussian joint = gaussian_char_from_cov(output_covariance(with_r(base, 0.2)));
        for (Parity parity : {Parity::Odd, Parity::Even}) {
            PolyGaussianMixture h = apply_subtraction(PolyGaussianMixture(joint), 0);
            if (parity == Parity::Even) h = apply_addition(h, 0);
            const PolyGaussianMixture w = char_to_wigner(h);
            worst = std::max(worst, std::abs(w.trace() / h.trace() - 1.0));
            const Projection proj = homodyne_project_exact(w, 0, 0.0);
            const PolyGaussianMixture magnon = proj.state.normalized();
            worst = std::max(worst, std::abs(eval_grid(magnon, wide, false).integral() - 1.0));
            const PolyGaussianMixture damped = damp_channel(magnon, 0.1, 0.0, 0.3);
            worst = std::max(worst, std::abs(damped.trace() - 1.0));
            worst = std::max(worst, std::abs(eval_grid(damped, wide, false).integral() - 1.0));
        }
        checks.push_back(make("normalization through pipeline stages", worst, 1e-6));
    }
    {
        int violations = 0;
        for (int i = 1; i <= 8; ++i) {
            for (Parity parity : {Parity::Odd, Parity::Even}) {
                const PreparedCat cat = prepare_cat(with_r(base, 0.05 * i), parity);
                const double origin[2] = {0.0, 0.0};
                const double w0 = cat.state.evaluate(origin).real();
                if ((parity == Parity::Odd) != (w0 < 0.0)) ++violations;
            }
        }
        checks.push_back(make("parity sign of W(0,0)", violations, 0));
    }
    {
        const CatReport ref = cat_report(odd.state, Parity::Odd, config.grid);
        double worst = 0.0;
        for (double theta : {kPi / 6, kPi / 4, kPi / 2}) {
            Imperfections imp;
            imp.theta = theta;
            const PreparedCat cat = prepare_cat(with_r(base, 0.2), Parity::Odd, imp);
            const CatReport r = cat_report(cat.state, Parity::Odd, config.grid);
            worst = std::max({worst, std::abs(r.alpha_sq - ref.alpha_sq), std::abs(r.fidelity - ref.fidelity),
                              std::abs(r.negativity - ref.negativity), std::abs(r.macroscopicity - ref.macroscopicity)});
        }
        checks.push_back(make("homodyne angle invariance of metrics", worst, 1e-4));
    }
    {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        double worst = 0.0;
        for (int n = 0; n < 10; ++n) {
            const Eigen::Vector2d mean(u(rng), u(rng));
            const PolyGaussianMixture g(gaussian_wigner_from_cov(random_single_mode_cov(rng), mean));
            worst = std::max(worst, wigner_negativity(eval_grid(g, config.grid)));
            const PolyGaussianMixture coherent(gaussian_wigner_from_cov(Eigen::Matrix2d::Identity() * 0.5, mean));
            worst = std::max(worst, std::abs(macroscopicity(coherent, config.grid)));
        }
        checks.push_back(make("Gaussian delta = 0 and coherent I = 0", worst, 1e-6));
    }
    return checks;
}

bool print_report(const std::vector<Check>& checks, std::ostream& out) {
    bool all = true;
    char buf[256];
    for (const auto& c : checks) {
        std::snprintf(buf, sizeof buf, "%s  %-48s measured %.3e  tolerance %.1e\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                      c.measured, c.tolerance);
        out << buf;
        all = all && c.passed;
    }
    return all;
}

std::vector<Check> cmd_validate(const RunConfig& config) {
    const std::vector<Check> checks = run_validation(config);
    std::filesystem::create_directories(config.output_dir);
    nlohmann::ordered_json j;
    for (const auto& c : checks) j[c.name] = c.passed;
    std::ofstream(config.output_dir / "validate.json") << j.dump(2) << '\n';
    std::ofstream(config.output_dir / "validate.config.json") << to_json(config) << '\n';
    return checks;
}

}  // namespace magcat
