#include "magcat/dynamics.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace magcat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// h / k_B in K per GHz.
constexpr double kPlanckOverBoltzmann = 6.62607015e-34 * 1e9 / 1.380649e-23;

using cplx = std::complex<double>;

double r_over_sinh(double r) {
    if (std::abs(r) < 1e-4) return 1.0 - r * r / 6.0;
    return r / std::sinh(r);
}

struct RadRates {
    double g, kappa, gamma, G, r;
};

RadRates rad_rates(const SystemParams& p) {
    const Rates rates = derive_rates(p);
    return {kTwoPi * p.g_mhz, kTwoPi * p.kappa_mhz, kTwoPi * p.gamma_mhz, rates.G, rates.r};
}

}  // namespace

std::vector<std::string> SystemParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(name) + " must be positive");
    };
    auto non_negative = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError(std::string(name) + " must be non-negative");
    };
    positive(g_mhz, "g");
    positive(kappa_mhz, "kappa");
    non_negative(gamma_mhz, "gamma");
    non_negative(omega_m_ghz, "omega_m");
    non_negative(temperature_k, "temperature");
    non_negative(n_m, "n_m");
    non_negative(n_c, "n_c");
    positive(s_total, "total spin");
    if (tau_us.has_value() == r.has_value()) throw ParameterError("exactly one of tau and r must be given");
    if (tau_us) non_negative(*tau_us, "tau");
    if (r) non_negative(*r, "r");

    const double G = g_mhz * g_mhz / kappa_mhz - gamma_mhz;
    if (!(G > 0.0)) {
        throw UnstableRegimeError("G = g^2/kappa - gamma must be positive (got G/2pi = " + std::to_string(G) + " MHz)");
    }
    std::vector<std::string> warnings;
    if (kappa_mhz < 10.0 * g_mhz) warnings.push_back("adiabatic regime violated: kappa < 10 g");
    if (kappa_mhz < 10.0 * gamma_mhz) warnings.push_back("adiabatic regime violated: kappa < 10 gamma");
    return warnings;
}

Rates derive_rates(const SystemParams& p) {
    p.validate();
    const double g = kTwoPi * p.g_mhz;
    const double kappa = kTwoPi * p.kappa_mhz;
    const double gamma = kTwoPi * p.gamma_mhz;
    Rates out{};
    out.G = g * g / kappa - gamma;
    out.G_mhz = out.G / kTwoPi;
    if (p.r) {
        out.r = *p.r;
        out.tau_us = out.r / out.G;
    } else {
        out.tau_us = *p.tau_us;
        out.r = out.G * out.tau_us;
    }
    return out;
}

double thermal_occupation(double nu_ghz, double temperature_k) {
    if (temperature_k < 0.0) throw ParameterError("temperature must be non-negative");
    if (temperature_k == 0.0) return 0.0;
    const double x = kPlanckOverBoltzmann * nu_ghz / temperature_k;
    return 1.0 / std::expm1(x);
}

TemporalOverlaps temporal_overlaps(double r, double n_c, double n_m) {
    if (r < 0.0) throw ParameterError("r must be non-negative");
    TemporalOverlaps t;
    t.r = r;
    t.n_c = n_c;
    t.n_m = n_m;
    t.cross = r_over_sinh(r);
    return t;
}

OutputModes output_modes(const SystemParams& params) {
    const RadRates k = rad_rates(params);
    OutputModes out;
    out.overlaps = temporal_overlaps(k.r, params.n_c, params.n_m);
    const cplx I(0.0, 1.0);
    const double E = std::exp(k.r);
    // sqrt((e^{2r} - 1) / (2G)), finite as r -> 0.
    const double K = std::sqrt(std::expm1(2.0 * k.r) / (2.0 * k.G));
    const double s = k.g * std::sqrt(2.0 / k.kappa);
    const double g2 = k.g * k.g / (k.G * k.kappa);
    const double mix = (k.g / k.G) * std::sqrt(k.gamma / k.kappa);
    enum { Min = 0, Cin = 1, CinT = 2, Mm = 3, MmT = 4 };

    // M_out = e^r M_in + K (i s C_in^dag - sqrt(2 gamma) M_m)
    out.m_out.u[Min] = E;
    out.m_out.u[Mm] = -K * std::sqrt(2.0 * k.gamma);
    out.m_out.v[Cin] = I * s * K;

    // C_out = -i s K M_in^dag - C~_in - g^2/(G kappa) (e^r C_in - C~_in)
    //         + i (g/G) sqrt(gamma/kappa) (e^r M_m^dag - M~_m^dag)
    out.c_out.v[Min] = -I * s * K;
    out.c_out.u[CinT] = -1.0 + g2;
    out.c_out.u[Cin] = -g2 * E;
    out.c_out.v[Mm] = I * mix * E;
    out.c_out.v[MmT] = -I * mix;
    return out;
}

namespace {

// Overlap S_ij and occupation n_i of the input basis.
struct Basis {
    Eigen::Matrix<double, 5, 5> S;
    std::array<double, 5> n;
};

Basis basis(const TemporalOverlaps& o) {
    Basis b;
    b.S.setIdentity();
    b.S(1, 2) = b.S(2, 1) = o.cross;
    b.S(3, 4) = b.S(4, 3) = o.cross;
    b.n = {o.n_m, o.n_c, o.n_c, o.n_m, o.n_m};
    return b;
}

// Hermitian quadrature q = sum_j (A_j a_j + conj(A_j) a_j^dag).
using Quadrature = std::array<cplx, 5>;

Quadrature quadrature_x(const LinearMode& m) {
    Quadrature q;
    for (int j = 0; j < 5; ++j) q[j] = (m.u[j] + std::conj(m.v[j])) / std::sqrt(2.0);
    return q;
}

Quadrature quadrature_y(const LinearMode& m) {
    Quadrature q;
    const cplx I(0.0, 1.0);
    for (int j = 0; j < 5; ++j) q[j] = (m.u[j] - std::conj(m.v[j])) / (I * std::sqrt(2.0));
    return q;
}

}  // namespace

std::complex<double> commutator(const LinearMode& a, const LinearMode& b, const TemporalOverlaps& overlaps) {
    const Basis B = basis(overlaps);
    cplx c{};
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            c += (a.u[i] * std::conj(b.u[j]) - a.v[i] * std::conj(b.v[j])) * B.S(i, j);
        }
    }
    return c;
}

CovarianceMatrix output_covariance(const SystemParams& params) {
    const OutputModes modes = output_modes(params);
    const Basis B = basis(modes.overlaps);
    const std::array<Quadrature, 4> q = {quadrature_x(modes.c_out), quadrature_y(modes.c_out), quadrature_x(modes.m_out),
                                         quadrature_y(modes.m_out)};
    CovarianceMatrix V;
    for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
            cplx m{};
            for (int i = 0; i < 5; ++i) {
                for (int j = 0; j < 5; ++j) {
                    if (B.S(i, j) == 0.0) continue;
                    // <a_i a_j^dag> = (n+1) S_ij,  <a_i^dag a_j> = n S_ij
                    m += q[k][i] * std::conj(q[l][j]) * (B.n[i] + 1.0) * B.S(i, j);
                    m += std::conj(q[k][i]) * q[l][j] * B.n[i] * B.S(i, j);
                }
            }
            V(k, l) = m.real();
        }
    }
    return 0.5 * (V + V.transpose());
}

namespace {

// Symmetrized-moment ODE  dS/dt = A S + S A^T + B N B^T  for a linear SDE
// dz = A(t) z dt + B(t) dxi with white noises of symmetrized intensity N.
template <int Dim>
struct MomentSystem {
    using Mat = Eigen::Matrix<double, Dim, Dim>;
    using NoiseMat = Eigen::Matrix<double, Dim, 4>;
    std::function<void(double, Mat&, NoiseMat&)> coefficients;
    Eigen::Vector4d noise;

    Mat rhs(double t, const Mat& S) const {
        Mat A;
        NoiseMat Bn;
        coefficients(t, A, Bn);
        return A * S + S * A.transpose() + Bn * noise.asDiagonal() * Bn.transpose();
    }

    Mat integrate(Mat S, double t_end, int steps) const {
        const double h = t_end / steps;
        for (int i = 0; i < steps; ++i) {
            const double t = i * h;
            const Mat k1 = rhs(t, S);
            const Mat k2 = rhs(t + 0.5 * h, S + 0.5 * h * k1);
            const Mat k3 = rhs(t + 0.5 * h, S + 0.5 * h * k2);
            const Mat k4 = rhs(t + h, S + h * k3);
            S += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!S.allFinite()) throw NumericalError("moment ODE integration diverged");
        }
        return S;
    }
};

}  // namespace

CovarianceMatrix covariance_oracle_ode(const SystemParams& params, OracleModel model, int steps) {
    if (steps < 1) throw ParameterError("ODE oracle needs at least one step");
    const RadRates k = rad_rates(params);
    const double tau = k.r / k.G;
    const Eigen::Vector4d noise(params.n_c + 0.5, params.n_c + 0.5, params.n_m + 0.5, params.n_m + 0.5);
    CovarianceMatrix V = CovarianceMatrix::Zero();
    if (k.r == 0.0) {
        V.diagonal() << params.n_c + 0.5, params.n_c + 0.5, params.n_m + 0.5, params.n_m + 0.5;
        return V;
    }
    // Output filter normalization of C_out.
    const double norm = std::sqrt(2.0 * k.G / std::expm1(2.0 * k.r));
    const double sg = std::sqrt(2.0 * k.gamma);
    // Noise order: (xi_x, xi_y) optical input, (eta_x, eta_y) magnon input.
    if (model == OracleModel::Adiabatic) {
        // z = (x_m, y_m, x_A, y_A), A(t) = int_0^t e^{Gs} c_out(s) ds,
        // c_out = -c_in - i s m^dag.
        const double s = k.g * std::sqrt(2.0 / k.kappa);
        MomentSystem<4> sys;
        sys.noise = noise;
        sys.coefficients = [&](double t, MomentSystem<4>::Mat& A, MomentSystem<4>::NoiseMat& B) {
            const double e = std::exp(k.G * t);
            A.setZero();
            B.setZero();
            A(0, 0) = k.G;
            A(1, 1) = k.G;
            A(2, 1) = -e * s;
            A(3, 0) = -e * s;
            B(0, 1) = s;
            B(0, 2) = -sg;
            B(1, 0) = s;
            B(1, 3) = -sg;
            B(2, 0) = -e;
            B(3, 1) = -e;
        };
        MomentSystem<4>::Mat S0 = MomentSystem<4>::Mat::Zero();
        S0(0, 0) = S0(1, 1) = params.n_m + 0.5;
        const auto S = sys.integrate(S0, tau, steps);
        const int idx[4] = {2, 3, 0, 1};
        const double f[4] = {norm, norm, 1.0, 1.0};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) V(a, b) = f[a] * f[b] * S(idx[a], idx[b]);
    } else {
        // z = (x_m, y_m, x_c, y_c, x_A, y_A), c_out = c_in + sqrt(2 kappa) c.
        const double sk = std::sqrt(2.0 * k.kappa);
        MomentSystem<6> sys;
        sys.noise = noise;
        sys.coefficients = [&](double t, MomentSystem<6>::Mat& A, MomentSystem<6>::NoiseMat& B) {
            const double e = std::exp(k.G * t);
            A.setZero();
            B.setZero();
            A(0, 0) = -k.gamma;
            A(0, 3) = -k.g;
            A(1, 1) = -k.gamma;
            A(1, 2) = -k.g;
            A(2, 2) = -k.kappa;
            A(2, 1) = -k.g;
            A(3, 3) = -k.kappa;
            A(3, 0) = -k.g;
            A(4, 2) = e * sk;
            A(5, 3) = e * sk;
            B(0, 2) = -sg;
            B(1, 3) = -sg;
            B(2, 0) = -sk;
            B(3, 1) = -sk;
            B(4, 0) = e;
            B(5, 1) = e;
        };
        MomentSystem<6>::Mat S0 = MomentSystem<6>::Mat::Zero();
        S0(0, 0) = S0(1, 1) = params.n_m + 0.5;
        S0(2, 2) = S0(3, 3) = params.n_c + 0.5;
        const auto S = sys.integrate(S0, tau, steps);
        const int idx[4] = {4, 5, 0, 1};
        const double f[4] = {norm, norm, 1.0, 1.0};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) V(a, b) = f[a] * f[b] * S(idx[a], idx[b]);
    }
    return 0.5 * (V + V.transpose());
}

HpValidity hp_validity(double magnon_number, double s_total) {
    if (!(s_total > 0.0)) throw ParameterError("total spin must be positive");
    const double ratio = magnon_number / (2.0 * s_total);
    return {ratio, ratio > 1e-3};
}

}  // namespace magcat
