#include "magcat/gaussian_measures.hpp"

#include <cmath>
#include <complex>

#include "magcat/errors.hpp"

namespace magcat {

namespace {

// Radicands above this (negative) level are rounding noise and get clamped.
constexpr double kRadicandFloor = -1e-12;

double clamped_sqrt(double x, const char* what) {
    if (x < kRadicandFloor) throw NumericalError(std::string("negative radicand in ") + what);
    return std::sqrt(std::max(x, 0.0));
}

}  // namespace

bool physicality_check(const Eigen::MatrixXd& V) {
    if (V.rows() != V.cols() || V.rows() % 2 != 0) throw DimensionError("covariance matrix must be square, even-sized");
    Eigen::MatrixXcd H = V.cast<std::complex<double>>();
    for (Eigen::Index k = 0; k < V.rows() / 2; ++k) {
        H(2 * k, 2 * k + 1) += std::complex<double>(0.0, 0.5);
        H(2 * k + 1, 2 * k) -= std::complex<double>(0.0, 0.5);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (H + H.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-10;
}

double smallest_pt_symplectic_eigenvalue(const CovarianceMatrix& V) {
    const double det_c = V.block<2, 2>(0, 0).determinant();
    const double det_m = V.block<2, 2>(2, 2).determinant();
    const double det_cm = V.block<2, 2>(0, 2).determinant();
    const double sigma = det_c + det_m - 2.0 * det_cm;
    const double inner = clamped_sqrt(sigma * sigma - 4.0 * V.determinant(), "log-negativity discriminant");
    return clamped_sqrt(sigma - inner, "log-negativity eigenvalue") / std::sqrt(2.0);
}

double log_negativity(const CovarianceMatrix& V) {
    const double eta = smallest_pt_symplectic_eigenvalue(V);
    if (!(eta > 0.0)) throw NumericalError("partially transposed symplectic eigenvalue vanishes");
    return std::max(0.0, -std::log(2.0 * eta));
}

double renyi2_entropy(const Eigen::MatrixXd& V) {
    if (V.rows() != V.cols() || V.rows() % 2 != 0) throw DimensionError("covariance matrix must be square, even-sized");
    const double det = V.determinant();
    if (!(det > 0.0)) throw NumericalError("Renyi-2 entropy of a singular covariance block");
    return 0.5 * std::log(det);
}

double steering(const CovarianceMatrix& V, SteeringDirection direction) {
    const Eigen::Matrix2d local = direction == SteeringDirection::MagnonToOptical ? Eigen::Matrix2d(V.block<2, 2>(2, 2))
                                                                                  : Eigen::Matrix2d(V.block<2, 2>(0, 0));
    const Eigen::MatrixXd full = 2.0 * V;
    return std::max(0.0, renyi2_entropy(2.0 * local) - renyi2_entropy(full));
}

}  // namespace magcat
