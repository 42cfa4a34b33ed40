#pragma once

// Heralding on the optical output: photon subtraction/addition followed by
// homodyne projection of the optical quadrature, with detector flaws.

#include <vector>

#include "magcat/catmetrics.hpp"
#include "magcat/dynamics.hpp"
#include "magcat/phasespace.hpp"

namespace magcat {

enum class DarkCountModel {
    PerClick,     ///< every click is genuine with probability xi independently
    AllOrNothing, ///< xi * ideal + (1 - xi) * no operation at all
};

struct Imperfections {
    double epsilon = 0.0;  ///< homodyne acceptance half-width
    double xi = 1.0;       ///< fraction of genuine clicks
    double theta = 0.0;    ///< homodyne phase error (rad)
    int window_nodes = 21; ///< Gauss-Legendre nodes across [-epsilon, epsilon]
    DarkCountModel dark_counts = DarkCountModel::PerClick;

    void validate() const;
};

struct Projection {
    PolyGaussianMixture state;  ///< unnormalized conditional Wigner function
    double weight;              ///< outcome density (exact) or window probability
};

/// Measures X_theta = cos(theta) X + sin(theta) Y of `mode` and keeps the
/// outcome x0. The remaining modes keep their order.
Projection homodyne_project_exact(const PolyGaussianMixture& wigner, int mode, double theta, double x0 = 0.0);

/// Accepts outcomes |X_theta| <= epsilon, integrated by Gauss-Legendre.
Projection homodyne_project_window(const PolyGaussianMixture& wigner, int mode, double theta, double epsilon,
                                   int nodes = 21);

/// A branch of the click record: the state after the operations that were
/// genuine, with the number of genuine and dark clicks it assumes.
struct HeraldBranch {
    PolyGaussianMixture state;
    int genuine = 0;
    int dark = 0;
};

/// Weights each branch by xi^genuine (1 - xi)^dark. Branch states keep their
/// heralding traces, so the result is an unnormalized mixture whose trace is
/// the click probability up to detector efficiency.
PolyGaussianMixture dark_count_mixture(const std::vector<HeraldBranch>& branches, double xi);

/// Characteristic-domain branches for the requested click pattern (one
/// subtraction for odd, subtraction then addition for even) on `mode`.
std::vector<HeraldBranch> herald_branches(const PolyGaussian& gaussian_char, int mode, Parity parity,
                                          const Imperfections& imp);

struct PreparedCat {
    PolyGaussianMixture state;  ///< normalized magnon Wigner function
    double herald_weight = 0.0; ///< heralding trace times projection weight
    CovarianceMatrix covariance;
    Parity parity = Parity::Odd;
};

PreparedCat prepare_cat(const SystemParams& params, Parity parity, const Imperfections& imp = {});

}  // namespace magcat
