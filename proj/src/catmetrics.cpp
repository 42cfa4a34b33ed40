#include "magcat/catmetrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <json.hpp>

#include "magcat/errors.hpp"

namespace magcat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNormalizationTolerance = 1e-6;

void require_normalized(const WignerGrid& g) {
    const double integral = g.integral();
    if (std::abs(integral - 1.0) > kNormalizationTolerance) {
        throw NormalizationError("state grid is not normalized (integral " + std::to_string(integral) + ")");
    }
}

}  // namespace

std::string to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

Parity parse_parity(const std::string& s) {
    if (s == "even") return Parity::Even;
    if (s == "odd") return Parity::Odd;
    throw ParameterError("parity must be 'odd' or 'even', got '" + s + "'");
}

IdealCat::IdealCat(double alpha, Parity parity) : alpha_(alpha), parity_(parity) {
    if (!(alpha > 0.0)) throw ParameterError("cat amplitude must be positive");
    const double overlap = std::expm1(-2.0 * alpha * alpha);  // e^{-2a^2} - 1
    norm_sq_ = parity == Parity::Even ? 1.0 / (2.0 * (2.0 + overlap)) : -1.0 / (2.0 * overlap);
}

double IdealCat::operator()(double x, double y) const {
    const double x0 = std::sqrt(2.0) * alpha_;
    const double sign = parity_ == Parity::Even ? 1.0 : -1.0;
    // e^{-(x-x0)^2} + e^{-(x+x0)^2} = 2 e^{-x^2 - x0^2} cosh(2 x x0)
    const double bumps = std::exp(-x0 * x0) * std::cosh(2.0 * x * x0);
    const double fringe = std::cos(2.0 * x0 * y);
    return norm_sq_ * 2.0 * std::exp(-x * x - y * y) * (bumps + sign * fringe) / kPi;
}

WignerGrid IdealCat::grid(const GridAxes& axes) const {
    WignerGrid g;
    g.axes = axes;
    g.cell_area = axes.dx() * axes.dy();
    g.values.resize(axes.ny, axes.nx);
    for (int j = 0; j < axes.ny; ++j)
        for (int i = 0; i < axes.nx; ++i) g.values(j, i) = (*this)(axes.x(i), axes.y(j));
    g.trace_weight = g.integral();
    return g;
}

IdealCat ideal_cat_wigner(double alpha, Parity parity) { return IdealCat(alpha, parity); }

namespace {

// The cat Wigner function is a sum of separable terms, so the overlap with a
// grid reduces to row/column weighted sums.
double fidelity_unchecked(const WignerGrid& g, double alpha, Parity parity) {
    const IdealCat cat(alpha, parity);
    const double x0 = std::sqrt(2.0) * alpha;
    const double sign = parity == Parity::Even ? 1.0 : -1.0;
    const auto& a = g.axes;
    Eigen::VectorXd bumps_x(a.nx), gauss_x(a.nx), gauss_y(a.ny), fringe_y(a.ny);
    for (int i = 0; i < a.nx; ++i) {
        const double x = a.x(i);
        gauss_x(i) = std::exp(-x * x);
        bumps_x(i) = std::exp(-(x - x0) * (x - x0)) + std::exp(-(x + x0) * (x + x0));
    }
    for (int j = 0; j < a.ny; ++j) {
        const double y = a.y(j);
        gauss_y(j) = std::exp(-y * y);
        fringe_y(j) = gauss_y(j) * std::cos(2.0 * x0 * y);
    }
    const double bumps = gauss_y.dot(g.values * bumps_x);
    const double fringe = fringe_y.dot(g.values * gauss_x);
    return 2.0 * cat.norm_sq() * (bumps + 2.0 * sign * fringe) * g.cell_area;
}

}  // namespace

double fidelity(const WignerGrid& state, double alpha, Parity parity) {
    require_normalized(state);
    return fidelity_unchecked(state, alpha, parity);
}

CatSize estimate_cat_size(const WignerGrid& state, Parity parity) {
    require_normalized(state);
    constexpr double lo = 0.05, hi = 3.0;
    constexpr int scan = 60;
    auto F = [&](double a) { return fidelity_unchecked(state, a, parity); };
    int best = 0;
    double best_f = -std::numeric_limits<double>::infinity();
    std::vector<double> grid(scan + 1);
    for (int i = 0; i <= scan; ++i) {
        grid[i] = lo + (hi - lo) * i / scan;
        const double f = F(grid[i]);
        if (f > best_f) {
            best_f = f;
            best = i;
        }
    }
    if (best == 0 || best == scan) throw DegenerateCatError("fidelity has no interior maximum in alpha");
    double a = grid[best - 1], b = grid[best + 1];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = F(c), fd = F(d);
    while (b - a > 1e-4) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = F(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = F(d);
        }
    }
    const double alpha = 0.5 * (a + b);

    // Positive-X maximum of the X marginal, refined by a parabola through the
    // neighbours. The marginal sees the two bumps but hardly the fringes.
    const auto& ax = state.axes;
    const Eigen::RowVectorXd marginal = state.values.colwise().sum();
    int bi = -1;
    for (int i = 0; i < ax.nx; ++i)
        if (ax.x(i) > 0.0 && (bi < 0 || marginal(i) > marginal(bi))) bi = i;
    double x_peak = ax.x(bi);
    if (bi > 0 && bi + 1 < ax.nx) {
        const double fm = marginal(bi - 1), f0 = marginal(bi), fp = marginal(bi + 1);
        const double denom = fm - 2.0 * f0 + fp;
        if (denom < 0.0) x_peak += 0.5 * ax.dx() * (fm - fp) / denom;
    }
    return {alpha * alpha, F(alpha), 0.5 * x_peak * x_peak};
}

double wigner_negativity(const WignerGrid& grid) {
    return (grid.values.cwiseAbs() - grid.values).sum() * grid.cell_area;
}

double macroscopicity(const PolyGaussianMixture& state, const GridAxes& axes) {
    const PolyGaussianMixture normalized = state.normalized();
    PolyGaussianMixture dxx, dyy;
    for (const auto& term : normalized.terms) {
        dxx.terms.push_back({term.weight, derivative(derivative(term.state, 0), 0)});
        dyy.terms.push_back({term.weight, derivative(derivative(term.state, 1), 1)});
    }
    const WignerGrid w = eval_grid(normalized, axes, false);
    const Eigen::MatrixXd laplacian = eval_grid(dxx, axes, false).values + eval_grid(dyy, axes, false).values;
    // pi/2 \int W(-L - 1)W d^2alpha with W_alpha = 2 W, d^2alpha = dX dY / 2
    // becomes pi \int W(-laplacian/2 - W) dX dY.
    return kPi * (w.values.cwiseProduct(-0.5 * laplacian - w.values)).sum() * w.cell_area;
}

double macroscopicity_fd(const WignerGrid& grid) {
    const auto& a = grid.axes;
    const Eigen::MatrixXd& W = grid.values;
    const double hx2 = a.dx() * a.dx(), hy2 = a.dy() * a.dy();
    double sum = 0.0;
    for (int j = 2; j + 2 < a.ny; ++j) {
        for (int i = 2; i + 2 < a.nx; ++i) {
            const double dxx = (-W(j, i - 2) + 16 * W(j, i - 1) - 30 * W(j, i) + 16 * W(j, i + 1) - W(j, i + 2)) / (12 * hx2);
            const double dyy = (-W(j - 2, i) + 16 * W(j - 1, i) - 30 * W(j, i) + 16 * W(j + 1, i) - W(j + 2, i)) / (12 * hy2);
            sum += W(j, i) * (-0.5 * (dxx + dyy) - W(j, i));
        }
    }
    return kPi * sum * grid.cell_area;
}

double principal_axis_angle(const WignerGrid& grid) {
    const auto& a = grid.axes;
    double m = 0, mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
    for (int j = 0; j < a.ny; ++j) {
        const double y = a.y(j);
        for (int i = 0; i < a.nx; ++i) {
            const double x = a.x(i), w = grid.values(j, i);
            m += w;
            mx += w * x;
            my += w * y;
            mxx += w * x * x;
            myy += w * y * y;
            mxy += w * x * y;
        }
    }
    mx /= m;
    my /= m;
    const double sxx = mxx / m - mx * mx, syy = myy / m - my * my, sxy = mxy / m - mx * my;
    if (std::abs(sxx - syy) < 1e-12 && std::abs(sxy) < 1e-12) return 0.0;
    return 0.5 * std::atan2(2.0 * sxy, sxx - syy);
}

PolyGaussianMixture align_to_x(const PolyGaussianMixture& state, const GridAxes& axes) {
    const double phi = principal_axis_angle(eval_grid(state, axes, false));
    if (phi == 0.0) return state;
    PolyGaussianMixture out;
    for (const auto& term : state.terms) out.terms.push_back({term.weight, rotate_mode(term.state, 0, -phi)});
    return out;
}

CatReport cat_report(const PolyGaussianMixture& state, Parity parity, const GridAxes& axes, double herald_weight) {
    const PolyGaussianMixture normalized = align_to_x(state.normalized(), axes);
    const WignerGrid grid = eval_grid(normalized, axes, true);
    CatReport r;
    const CatSize size = estimate_cat_size(grid, parity);
    r.alpha_sq = size.alpha_sq;
    r.fidelity = size.fidelity;
    r.alpha_sq_peak = size.alpha_sq_peak;
    r.negativity = wigner_negativity(grid);
    r.macroscopicity = macroscopicity(normalized, axes);
    const double origin[2] = {0.0, 0.0};
    r.parity_sign = normalized.evaluate(origin).real() >= 0.0 ? 1 : -1;
    r.peak_overlap = std::exp(-2.0 * r.alpha_sq);
    r.herald_weight = herald_weight;
    return r;
}

std::string to_json(const CatReport& report) {
    nlohmann::ordered_json j;
    j["alpha_sq"] = report.alpha_sq;
    j["fidelity"] = report.fidelity;
    j["negativity"] = report.negativity;
    j["macroscopicity"] = report.macroscopicity;
    j["parity_sign"] = report.parity_sign;
    j["peak_overlap"] = report.peak_overlap;
    j["herald_weight"] = report.herald_weight;
    return j.dump(2);
}

}  // namespace magcat
