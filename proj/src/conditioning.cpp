#include "magcat/conditioning.hpp"

#include <cmath>
#include <memory>

#include <gsl/gsl_integration.h>

#include "magcat/errors.hpp"

namespace magcat {

namespace {

constexpr double kZeroProbability = 1e-14;

}  // namespace

void Imperfections::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ParameterError("epsilon must be finite and >= 0");
    if (!(xi > 0.0 && xi <= 1.0)) throw ParameterError("xi must lie in (0, 1]");
    if (!std::isfinite(theta)) throw ParameterError("theta must be finite");
    if (epsilon > 0.0 && (window_nodes < 3 || window_nodes % 2 == 0))
        throw ParameterError("window_nodes must be odd and >= 3");
}

Projection homodyne_project_exact(const PolyGaussianMixture& wigner, int mode, double theta, double x0) {
    if (wigner.domain() != Domain::Wigner) throw DomainError("homodyne projection needs a Wigner function");
    if (mode < 0 || 2 * mode + 1 >= wigner.n_vars()) throw DimensionError("measured mode out of range");
    Projection out{{}, 0.0};
    const int y_var[1] = {2 * mode};
    for (const auto& term : wigner.terms) {
        // Rotate so that the measured quadrature X_theta becomes the X variable.
        const PolyGaussian rotated = rotate_mode(term.state, mode, -theta);
        PolyGaussian reduced = integrate_out(substitute(rotated, 2 * mode, x0), y_var);
        out.weight += term.weight * reduced.trace().real();
        out.state.terms.push_back({term.weight, std::move(reduced)});
    }
    if (!(out.weight > kZeroProbability)) throw ZeroProbabilityError("homodyne outcome has vanishing probability");
    return out;
}

Projection homodyne_project_window(const PolyGaussianMixture& wigner, int mode, double theta, double epsilon,
                                   int nodes) {
    if (epsilon == 0.0) return homodyne_project_exact(wigner, mode, theta, 0.0);
    if (nodes < 1) throw ParameterError("window needs at least one node");
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(static_cast<size_t>(nodes)), &gsl_integration_glfixed_table_free);
    Projection out{{}, 0.0};
    for (int k = 0; k < nodes; ++k) {
        double x = 0.0, w = 0.0;
        gsl_integration_glfixed_point(-epsilon, epsilon, static_cast<size_t>(k), &x, &w, table.get());
        Projection slice{{}, 0.0};
        try {
            slice = homodyne_project_exact(wigner, mode, theta, x);
        } catch (const ZeroProbabilityError&) {
            continue;
        }
        for (auto& term : slice.state.terms) out.state.terms.push_back({term.weight * w, std::move(term.state)});
        out.weight += w * slice.weight;
    }
    if (!(out.weight > kZeroProbability)) throw ZeroProbabilityError("homodyne window has vanishing probability");
    return out;
}

PolyGaussianMixture dark_count_mixture(const std::vector<HeraldBranch>& branches, double xi) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw ParameterError("xi must lie in [0, 1]");
    PolyGaussianMixture out;
    for (const auto& branch : branches) {
        const double p = std::pow(xi, branch.genuine) * std::pow(1.0 - xi, branch.dark);
        if (p == 0.0) continue;
        for (const auto& term : branch.state.terms) out.terms.push_back({p * term.weight, term.state});
    }
    if (out.terms.empty() || !(out.trace() > 0.0)) throw DegenerateHeraldError("no branch carries weight");
    return out;
}

std::vector<HeraldBranch> herald_branches(const PolyGaussian& c, int mode, Parity parity, const Imperfections& imp) {
    const PolyGaussianMixture vac(c);
    std::vector<HeraldBranch> out;
    if (imp.dark_counts == DarkCountModel::AllOrNothing || imp.xi == 1.0) {
        PolyGaussianMixture ideal = apply_subtraction(vac, mode);
        if (parity == Parity::Even) ideal = apply_addition(ideal, mode);
        out.push_back({std::move(ideal), 1, 0});
        if (imp.xi < 1.0) out.push_back({vac, 0, 1});
        return out;
    }
    if (parity == Parity::Odd) {
        out.push_back({apply_subtraction(vac, mode), 1, 0});
        out.push_back({vac, 0, 1});
        return out;
    }
    // A dark subtraction click still leaves a genuine addition possible, and
    // the reverse, so each click is an independent Bernoulli trial.
    const PolyGaussianMixture sub = apply_subtraction(vac, mode);
    out.push_back({apply_addition(sub, mode), 2, 0});
    out.push_back({sub, 1, 1});
    out.push_back({apply_addition(vac, mode), 1, 1});
    out.push_back({vac, 0, 2});
    return out;
}

PreparedCat prepare_cat(const SystemParams& params, Parity parity, const Imperfections& imp) {
    imp.validate();
    PreparedCat out;
    out.parity = parity;
    out.covariance = output_covariance(params);
    const PolyGaussian joint = gaussian_char_from_cov(out.covariance);
    const auto branches = herald_branches(joint, 0, parity, imp);
    const PolyGaussianMixture heralded = dark_count_mixture(branches, imp.xi);
    const PolyGaussianMixture wigner = char_to_wigner(heralded);
    const Projection proj = homodyne_project_window(wigner, 0, imp.theta, imp.epsilon, imp.window_nodes);
    out.herald_weight = proj.weight;
    out.state = proj.state.normalized();
    return out;
}

}  // namespace magcat
