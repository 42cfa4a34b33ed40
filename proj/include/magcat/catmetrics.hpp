#pragma once

// Figures of merit for a prepared single-mode state, in the (X, Y)
// quadrature convention of phasespace.hpp (W normalized over dX dY, so
// Tr(rho sigma) = 2 pi \int W_rho W_sigma).

#include <string>

#include "magcat/phasespace.hpp"

namespace magcat {

enum class Parity { Even, Odd };

std::string to_string(Parity p);
Parity parse_parity(const std::string& s);

/// Wigner function of N (|alpha> +- |-alpha>) for real alpha > 0: two
/// coherent bumps at X = +-sqrt(2) alpha plus the interference term.
class IdealCat {
  public:
    IdealCat(double alpha, Parity parity);

    double alpha() const { return alpha_; }
    Parity parity() const { return parity_; }
    double norm_sq() const { return norm_sq_; }
    double operator()(double x, double y) const;
    WignerGrid grid(const GridAxes& axes) const;

  private:
    double alpha_;
    Parity parity_;
    double norm_sq_;
};

IdealCat ideal_cat_wigner(double alpha, Parity parity);

/// F = 2 pi \int W_state W_cat. The grid must integrate to 1 within 1e-6.
double fidelity(const WignerGrid& state, double alpha, Parity parity);

struct CatSize {
    double alpha_sq;       ///< fidelity-maximizing |alpha|^2
    double fidelity;       ///< F at that alpha
    double alpha_sq_peak;  ///< X_peak^2 / 2 from the positive-X maximum of the X marginal
};

/// Maximizes fidelity over alpha in [0.05, 3] (scan to bracket, then
/// golden-section search to 1e-4 in alpha).
CatSize estimate_cat_size(const WignerGrid& state, Parity parity);

/// delta = \int (|W| - W).
double wigner_negativity(const WignerGrid& grid);

/// I = (pi/2) \int W (-d^2/dalpha dalpha^* - 1) W d^2alpha, with the
/// Laplacian taken symbolically on the PolyGaussian terms. In quadrature
/// coordinates d^2/dalpha dalpha^* = (1/2)(d_X^2 + d_Y^2).
double macroscopicity(const PolyGaussianMixture& state, const GridAxes& axes = {});

/// Same functional with a 4th-order finite-difference Laplacian of the grid.
double macroscopicity_fd(const WignerGrid& grid);

/// Orientation of the long axis of W from its second moments, in (-pi/2, pi/2].
double principal_axis_angle(const WignerGrid& grid);

/// Rotates every term so the long axis of the state lies along X.
PolyGaussianMixture align_to_x(const PolyGaussianMixture& state, const GridAxes& axes = {});

struct CatReport {
    double alpha_sq = 0.0;
    double fidelity = 0.0;
    double negativity = 0.0;
    double macroscopicity = 0.0;
    int parity_sign = 0;      ///< sign of W(0, 0)
    double peak_overlap = 0.0;  ///< exp(-2 alpha_sq)
    double herald_weight = 0.0;
    double alpha_sq_peak = 0.0;  ///< cross-check estimate, not serialized
};

/// Normalizes a single-mode Wigner mixture, aligns it with X, grids it and
/// computes every metric on the shared grid.
CatReport cat_report(const PolyGaussianMixture& state, Parity parity, const GridAxes& axes = {},
                     double herald_weight = 0.0);

/// Flat JSON object with keys alpha_sq, fidelity, negativity,
/// macroscopicity, parity_sign, peak_overlap, herald_weight.
std::string to_json(const CatReport& report);

}  // namespace magcat
