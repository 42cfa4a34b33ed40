#include <doctest.h>

#include <cmath>
#include <numbers>

#include "magcat/conditioning.hpp"
#include "oracles/fock.hpp"
#include "oracles/gaussian.hpp"
#include "support.hpp"

using namespace magcat;
using test::at;

namespace {

SystemParams at_r(double r) {
    SystemParams p;
    p.r = r;
    return p;
}

double max_metric_gap(const CatReport& a, const CatReport& b) {
    return std::max({std::abs(a.alpha_sq - b.alpha_sq), std::abs(a.fidelity - b.fidelity),
                     std::abs(a.negativity - b.negativity), std::abs(a.macroscopicity - b.macroscopicity)});
}

}  // namespace

TEST_CASE("homodyne projection of a Gaussian equals the Schur complement") {
    const CovarianceMatrix V = output_covariance(at_r(0.3));
    const PolyGaussianMixture w(gaussian_wigner_from_cov(V));
    const Projection proj = homodyne_project_exact(w, 0, 0.0);
    CHECK(proj.weight == doctest::Approx(1.0 / std::sqrt(2 * std::numbers::pi * V(0, 0))).epsilon(1e-12));
    const PolyGaussianMixture m = proj.state.normalized();
    const Eigen::Matrix2d Vc = oracle::homodyne_conditional_cov(V);
    for (auto [x, y] : {std::pair{0.0, 0.0}, {0.8, -0.4}, {-1.5, 1.0}})
        CHECK(at(m, x, y) == doctest::Approx(oracle::gaussian_density(Vc, x, y)).epsilon(1e-10));
}

TEST_CASE("heralded TMSV matches the Fock-basis conditional state") {
    const double s = 0.35;
    const PolyGaussian c = gaussian_char_from_cov(oracle::tmsv_cov(s));
    for (bool even : {false, true}) {
        PolyGaussianMixture h = apply_subtraction(PolyGaussianMixture(c), 0);
        if (even) h = apply_addition(h, 0);
        const PolyGaussianMixture m = homodyne_project_exact(char_to_wigner(h), 0, 0.0).state.normalized();
        const oracle::Mat rho = oracle::tmsv_heralded_magnon(s, even, 50);
        for (auto [x, y] : {std::pair{0.0, 0.0}, {0.7, 0.0}, {-0.4, 1.1}, {1.8, -0.6}})
            CHECK(std::abs(at(m, x, y) - oracle::wigner(rho, x, y)) < 1e-9);
    }
}

TEST_CASE("windowed projection tends to the exact one") {
    const PolyGaussianMixture w = char_to_wigner(apply_subtraction(PolyGaussianMixture(gaussian_char_from_cov(output_covariance(at_r(0.2)))), 0));
    const PolyGaussianMixture exact = homodyne_project_exact(w, 0, 0.0).state.normalized();
    const PolyGaussianMixture narrow = homodyne_project_window(w, 0, 0.0, 1e-4).state.normalized();
    for (double x : {0.0, 0.9, 2.0}) CHECK(std::abs(at(narrow, x, 0.3) - at(exact, x, 0.3)) < 1e-8);
    const Projection zero = homodyne_project_window(w, 0, 0.0, 0.0);
    CHECK(at(zero.state.normalized(), 0.5, 0.5) == doctest::Approx(at(exact, 0.5, 0.5)).epsilon(1e-12));
}

TEST_CASE("window probability integrates the outcome density") {
    const CovarianceMatrix V = output_covariance(at_r(0.2));
    const PolyGaussianMixture w(gaussian_wigner_from_cov(V));
    const double eps = 0.5;
    const double expected = std::erf(eps / std::sqrt(2 * V(0, 0)));
    CHECK(homodyne_project_window(w, 0, 0.0, eps).weight == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("improbable homodyne outcomes are rejected") {
    const PolyGaussianMixture w(gaussian_wigner_from_cov(output_covariance(at_r(0.2))));
    CHECK_THROWS_AS(homodyne_project_exact(w, 0, 0.0, 40.0), ZeroProbabilityError);
    CHECK_THROWS_AS(homodyne_project_exact(w, 3, 0.0), DimensionError);
}

TEST_CASE("imperfection validation") {
    Imperfections imp;
    imp.xi = 0.0;
    CHECK_THROWS_AS(imp.validate(), ParameterError);
    imp = {};
    imp.epsilon = 0.1;
    imp.window_nodes = 4;
    CHECK_THROWS_AS(imp.validate(), ParameterError);
    imp.window_nodes = 21;
    CHECK_NOTHROW(imp.validate());
}

TEST_CASE("dark-count branches") {
    const PolyGaussian c = gaussian_char_from_cov(output_covariance(at_r(0.2)));
    Imperfections imp;
    imp.xi = 0.9;
    CHECK(herald_branches(c, 0, Parity::Odd, imp).size() == 2);
    CHECK(herald_branches(c, 0, Parity::Even, imp).size() == 4);
    imp.dark_counts = DarkCountModel::AllOrNothing;
    CHECK(herald_branches(c, 0, Parity::Even, imp).size() == 2);

    imp = {};
    const auto ideal = herald_branches(c, 0, Parity::Odd, imp);
    const PolyGaussianMixture mixed = dark_count_mixture(ideal, 1.0);
    CHECK(mixed.trace() == doctest::Approx(ideal.front().state.trace()));
}

TEST_CASE("xi -> 1 and epsilon -> 0 recover the ideal pipeline") {
    const SystemParams p = at_r(0.2);
    for (Parity parity : {Parity::Odd, Parity::Even}) {
        const CatReport ideal = cat_report(prepare_cat(p, parity).state, parity);
        Imperfections imp;
        imp.xi = 1.0 - 1e-7;
        imp.epsilon = 1e-4;
        CHECK(max_metric_gap(cat_report(prepare_cat(p, parity, imp).state, parity), ideal) < 1e-5);
    }
}

TEST_CASE("doubling the window nodes changes nothing") {
    const SystemParams p = at_r(0.2);
    Imperfections imp;
    imp.epsilon = 0.1;
    for (Parity parity : {Parity::Odd, Parity::Even}) {
        const CatReport base = cat_report(prepare_cat(p, parity, imp).state, parity);
        Imperfections twice = imp;
        twice.window_nodes = 43;
        CHECK(max_metric_gap(cat_report(prepare_cat(p, parity, twice).state, parity), base) < 1e-5);
    }
}

TEST_CASE("parity sign law at the origin") {
    for (int i = 1; i <= 10; ++i) {
        for (Parity parity : {Parity::Odd, Parity::Even}) {
            const PreparedCat cat = prepare_cat(at_r(0.05 * i), parity);
            const double w0 = at(cat.state, 0.0, 0.0);
            CHECK((parity == Parity::Odd ? w0 < 0.0 : w0 > 0.0));
            CHECK(cat.herald_weight > 0.0);
        }
    }
}

TEST_CASE("odd pipeline from vacuum is degenerate") {
    CHECK_THROWS_AS(prepare_cat(at_r(0.0), Parity::Odd), DegenerateHeraldError);
}

TEST_CASE("projection angle rotates the state but not its metrics") {
    const SystemParams p = at_r(0.2);
    const CatReport ref = cat_report(prepare_cat(p, Parity::Even).state, Parity::Even);
    for (double theta : {std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 2}) {
        Imperfections imp;
        imp.theta = theta;
        CHECK(max_metric_gap(cat_report(prepare_cat(p, Parity::Even, imp).state, Parity::Even), ref) < 1e-4);
    }
}
