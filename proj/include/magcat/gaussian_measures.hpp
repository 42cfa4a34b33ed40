#pragma once

#include <Eigen/Dense>

#include "magcat/dynamics.hpp"

namespace magcat {

/// V + (i/2) Omega >= 0 up to an eigenvalue tolerance of 1e-10.
bool physicality_check(const Eigen::MatrixXd& V);

/// E_N = max{0, -ln 2 eta^-} from the smallest partially transposed
/// symplectic eigenvalue, Sigma = det V_C + det V_M - 2 det V_CM.
double log_negativity(const CovarianceMatrix& V);

/// Symplectic eigenvalue eta^- of the partial transpose.
double smallest_pt_symplectic_eigenvalue(const CovarianceMatrix& V);

/// S(V) = 1/2 ln det V.
double renyi2_entropy(const Eigen::MatrixXd& V);

enum class SteeringDirection { MagnonToOptical, OpticalToMagnon };

/// G^{M->C} = max{0, S(2 V_M) - S(2 V)} (and the mirrored C->M quantity).
double steering(const CovarianceMatrix& V, SteeringDirection direction = SteeringDirection::MagnonToOptical);

}  // namespace magcat
