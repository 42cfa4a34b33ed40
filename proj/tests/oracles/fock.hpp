#pragma once

// Truncated Fock-basis reference: states as density matrices, Wigner
// functions from the displaced-parity formula with closed-form displacement
// matrix elements. Shares nothing with the phase-space library.

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline double log_factorial(int n) { return std::lgamma(n + 1.0); }

/// <m|D(beta)|n> for m, n < dim.
inline Mat displacement(cplx beta, int dim) {
    const double x = std::norm(beta);
    const double damp = std::exp(-0.5 * x);
    Mat d(dim, dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            const int lo = std::min(m, n), hi = std::max(m, n);
            const double ratio = std::exp(0.5 * (log_factorial(lo) - log_factorial(hi)));
            const double lag = std::assoc_laguerre(lo, hi - lo, x);
            const cplx base = m >= n ? beta : -std::conj(beta);
            d(m, n) = ratio * std::pow(base, hi - lo) * damp * lag;
        }
    }
    return d;
}

/// W(X, Y) with X = (a + a^dag)/sqrt2, normalized over dX dY:
/// W = (1/pi) sum_k (-1)^k <k| D^dag rho D |k>.
inline double wigner(const Mat& rho, double X, double Y, int work_dim = 90) {
    const cplx beta(X / std::numbers::sqrt2, Y / std::numbers::sqrt2);
    const Mat D = displacement(beta, work_dim);
    Mat big = Mat::Zero(work_dim, work_dim);
    big.topLeftCorner(rho.rows(), rho.cols()) = rho;
    const Mat m = D.adjoint() * big * D;
    double w = 0.0;
    for (int k = 0; k < work_dim; ++k) w += (k % 2 ? -1.0 : 1.0) * m(k, k).real();
    return w / std::numbers::pi;
}

inline Mat annihilation(int dim) {
    Mat a = Mat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

inline Mat pure(const Vec& psi) { return psi * psi.adjoint() / psi.squaredNorm(); }

/// S(s)|0> squeezed along X: variance e^{-2s}/2.
inline Vec squeezed_vacuum(double s, int dim) {
    Vec v = Vec::Zero(dim);
    const double t = std::tanh(s);
    for (int k = 0; 2 * k < dim; ++k)
        v(2 * k) = std::pow(-t, k) * std::exp(0.5 * log_factorial(2 * k) - log_factorial(k)) / std::pow(2.0, k) /
                   std::sqrt(std::cosh(s));
    return v;
}

inline Mat thermal(double nbar, int dim) {
    Mat rho = Mat::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) rho(n, n) = std::pow(nbar, n) / std::pow(1.0 + nbar, n + 1);
    return rho;
}

/// <x = 0|n> for the X quadrature eigenstates.
inline Eigen::VectorXd position_zero(int dim) {
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(dim);
    phi(0) = std::pow(std::numbers::pi, -0.25);
    for (int n = 1; n + 1 < dim; n += 2) phi(n + 1) = -std::sqrt(double(n) / (n + 1)) * phi(n - 1);
    return phi;
}

/// Magnon state left by TMSV sum_n lambda^n |n>_C |n>_M after a^k_C (or
/// a^dag a on C when `add_after` is set) and projection onto X_C = 0.
inline Mat tmsv_heralded_magnon(double s, bool add_after, int dim) {
    const double lambda = std::tanh(s);
    const Eigen::VectorXd phi = position_zero(dim + 1);
    Vec chi = Vec::Zero(dim);
    for (int n = 1; n < dim; ++n) {
        const double amp = std::pow(lambda, n);
        chi(n) = add_after ? amp * n * phi(n) : amp * std::sqrt(double(n)) * phi(n - 1);
    }
    return pure(chi);
}

}  // namespace oracle
