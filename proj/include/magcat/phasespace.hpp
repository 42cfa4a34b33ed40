#pragma once

// Polynomial-times-Gaussian phase-space functions.
//
// Coordinates are real quadratures. A mode k owns the variable pair
// (2k, 2k+1). In the Wigner domain these are (X_k, Y_k) with
// X = (a + a^dag)/sqrt(2), vacuum variance 1/2 and W normalized to 1 over
// dX dY. In the characteristic domain they are k = sqrt(2) (Re beta, Im beta)
// so that C(k) = Tr[rho exp(i (k_x X + k_y Y))] = Tr[rho exp(i beta^* a + i beta a^dag)].
//
// The Fourier pair is
//   W(x) = (2 pi)^{-d} \int C(k) exp(-i k.x) d^d k,   C(k) = \int W(x) exp(i k.x) d^d x.

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "magcat/polynomial.hpp"

namespace magcat {

enum class Domain { Characteristic, Wigner };

/// Coefficients below this fraction of the largest coefficient are dropped
/// after every operation.
inline constexpr double kCoefficientDropThreshold = 1e-14;

/// f(v) = scale * poly(v) * exp(-1/2 v^T Q v + b^T v) over n real variables.
class PolyGaussian {
  public:
    PolyGaussian(Domain domain, Eigen::MatrixXcd Q, Eigen::VectorXcd b, Polynomial poly, cplx scale = 1.0);

    Domain domain() const { return domain_; }
    int n_vars() const { return static_cast<int>(b_.size()); }
    /// Modes only make sense while variables still come in (X, Y) pairs.
    int n_modes() const;

    const Eigen::MatrixXcd& quadratic() const { return Q_; }
    const Eigen::VectorXcd& linear() const { return b_; }
    const Polynomial& poly() const { return poly_; }
    cplx scale() const { return scale_; }

    cplx evaluate(std::span<const double> point) const;
    cplx evaluate(std::span<const cplx> point) const;

    /// Tr(rho) of the underlying operator: value at 0 (characteristic) or the
    /// full integral (Wigner).
    cplx trace() const;

    /// Absorbs a scalar factor into scale.
    PolyGaussian scaled(cplx factor) const;

  private:
    Domain domain_;
    Eigen::MatrixXcd Q_;
    Eigen::VectorXcd b_;
    Polynomial poly_;
    cplx scale_;

    void normalize_representation();
};

/// Convex combination of PolyGaussian terms with non-negative weights.
struct PolyGaussianMixture {
    struct Term {
        double weight;
        PolyGaussian state;
    };
    std::vector<Term> terms;

    PolyGaussianMixture() = default;
    explicit PolyGaussianMixture(PolyGaussian single);

    Domain domain() const;
    int n_vars() const;
    /// sum_i weight_i * Re Tr(state_i).
    double trace() const;
    /// Rescales every term to unit trace and the weights to sum to one.
    PolyGaussianMixture normalized() const;
    cplx evaluate(std::span<const double> point) const;
};

// --- construction -------------------------------------------------------

/// Zero-mean Gaussian characteristic function exp(-1/2 k^T V k).
PolyGaussian gaussian_char_from_cov(const Eigen::MatrixXd& V);

/// Displaced variant exp(-1/2 k^T V k + i k^T mean); only used for tests of
/// displaced reference states.
PolyGaussian gaussian_char_from_cov(const Eigen::MatrixXd& V, const Eigen::VectorXd& mean);

/// Gaussian Wigner function with covariance V (and optional mean).
PolyGaussian gaussian_wigner_from_cov(const Eigen::MatrixXd& V);
PolyGaussian gaussian_wigner_from_cov(const Eigen::MatrixXd& V, const Eigen::VectorXd& mean);

// --- generic closure operations ------------------------------------------

/// g(u) = f(M u + t).
PolyGaussian affine_substitute(const PolyGaussian& f, const Eigen::MatrixXcd& M, const Eigen::VectorXcd& t);

/// Integrates f over the listed variables (each over the whole real line).
/// Remaining variables keep their relative order.
PolyGaussian integrate_out(const PolyGaussian& f, std::span<const int> vars);

/// Fixes one variable to a value and removes it.
PolyGaussian substitute(const PolyGaussian& f, int var, double value);

/// Rotates a mode in phase space: g(R(theta) v) = f(v), i.e. a feature of f at
/// point p moves to R(theta) p.
PolyGaussian rotate_mode(const PolyGaussian& f, int mode, double theta);

/// g(v) = f(factor_k * v) on every variable of mode k.
PolyGaussian scale_arguments(const PolyGaussian& f, std::span<const double> factor_per_mode);

/// g = f * exp(-1/2 v^T extra v).
PolyGaussian multiply_gaussian(const PolyGaussian& f, const Eigen::MatrixXcd& extra);

/// Partial derivative with respect to one variable, taken symbolically.
PolyGaussian derivative(const PolyGaussian& f, int var);

/// sum_j d_j/dv_j (f) * grad[j] + sum_j mult[j] v_j f.
PolyGaussian apply_first_order(const PolyGaussian& f, std::span<const cplx> grad, std::span<const cplx> mult);

// --- physics ------------------------------------------------------------

/// C -> -(d_beta + beta^*/2)(d_beta^* + beta/2) C on one mode. The result is
/// unnormalized; its trace is Tr(a rho a^dag).
PolyGaussian apply_subtraction(const PolyGaussian& state, int mode);
/// C -> -(d_beta - beta^*/2)(d_beta^* - beta/2) C; trace Tr(a^dag rho a).
PolyGaussian apply_addition(const PolyGaussian& state, int mode);
PolyGaussianMixture apply_subtraction(const PolyGaussianMixture& state, int mode);
PolyGaussianMixture apply_addition(const PolyGaussianMixture& state, int mode);

PolyGaussian char_to_wigner(const PolyGaussian& state);
PolyGaussian wigner_to_char(const PolyGaussian& state);
PolyGaussianMixture char_to_wigner(const PolyGaussianMixture& state);
PolyGaussianMixture wigner_to_char(const PolyGaussianMixture& state);

// --- grids --------------------------------------------------------------

struct GridAxes {
    double x_min = -6.0;
    double x_max = 6.0;
    int nx = 257;
    double y_min = -6.0;
    double y_max = 6.0;
    int ny = 257;

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dy() const { return (y_max - y_min) / (ny - 1); }
    double x(int i) const { return x_min + i * dx(); }
    double y(int j) const { return y_min + j * dy(); }
    /// Same extent, 2n-1 points per axis.
    GridAxes refined() const;
};

/// Sampled single-mode Wigner function. values(j, i) sits at (x(i), y(j)).
struct WignerGrid {
    GridAxes axes;
    Eigen::MatrixXd values;
    double cell_area = 0.0;
    /// Raw sum(values) * cell_area before any renormalization.
    double trace_weight = 0.0;

    double integral() const { return values.sum() * cell_area; }
};

/// Dense evaluation of a single-mode Wigner object. Throws if the imaginary
/// residue exceeds 1e-10 of the largest real value.
WignerGrid eval_grid(const PolyGaussianMixture& state, const GridAxes& axes, bool renormalize = true);
WignerGrid eval_grid(const PolyGaussian& state, const GridAxes& axes, bool renormalize = true);

/// Header `# x_min,x_max,nx,y_min,y_max,ny,trace_weight`, a second `# ` line
/// with those values, then ny rows of nx values, 17 significant digits.
void write_grid_csv(const WignerGrid& grid, std::ostream& out);
WignerGrid read_grid_csv(std::istream& in);

}  // namespace magcat
