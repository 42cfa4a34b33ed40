#include <doctest.h>

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "magcat/catmetrics.hpp"
#include "magcat/conditioning.hpp"
#include "magcat/errors.hpp"
#include "oracles/gaussian.hpp"
#include "support.hpp"

using namespace magcat;

namespace {

constexpr double kPi = std::numbers::pi;

/// The ideal cat as a PolyGaussian mixture: two coherent bumps plus the two
/// complex-exponential fringe terms. Only pointwise evaluation is meaningful,
/// since an odd cat's fringe terms carry negative trace.
PolyGaussianMixture cat_mixture(double alpha, Parity parity) {
    const double x0 = std::sqrt(2.0) * alpha;
    const double sign = parity == Parity::Odd ? -1.0 : 1.0;
    const double n2 = 1.0 / (2.0 * (1.0 + sign * std::exp(-2 * alpha * alpha)));
    PolyGaussianMixture m;
    for (double side : {1.0, -1.0})
        m.terms.push_back({n2, gaussian_wigner_from_cov(Eigen::Matrix2d::Identity() * 0.5, Eigen::Vector2d(side * x0, 0.0))});
    const Eigen::MatrixXcd Q = Eigen::MatrixXcd::Identity(2, 2) * 2.0;
    for (double side : {1.0, -1.0}) {
        Eigen::VectorXcd b(2);
        b << 0.0, cplx(0.0, 2.0 * side * x0);
        m.terms.push_back({n2, PolyGaussian(Domain::Wigner, Q, b, Polynomial::constant(2, 1.0), sign / kPi)});
    }
    return m;
}

double mean_photons(double alpha, Parity parity) {
    const double a2 = alpha * alpha;
    return parity == Parity::Odd ? a2 / std::tanh(a2) : a2 * std::tanh(a2);
}

}  // namespace

TEST_CASE("parity names") {
    CHECK(parse_parity("odd") == Parity::Odd);
    CHECK(to_string(Parity::Even) == "even");
    CHECK_THROWS_AS(parse_parity("both"), ParameterError);
}

TEST_CASE("ideal cat is a normalized pure state") {
    const GridAxes ax = test::square_grid(7.0, 281);
    for (Parity parity : {Parity::Odd, Parity::Even}) {
        const IdealCat cat(1.2, parity);
        const WignerGrid g = cat.grid(ax);
        CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(fidelity(g, 1.2, parity) == doctest::Approx(1.0).epsilon(1e-9));
        const PolyGaussianMixture m = cat_mixture(1.2, parity);
        for (auto [x, y] : {std::pair{0.0, 0.0}, {1.3, 0.2}, {-0.5, 0.9}})
            CHECK(test::at(m, x, y) == doctest::Approx(cat(x, y)).epsilon(1e-12));
    }
    CHECK(ideal_cat_wigner(1.0, Parity::Odd)(0.0, 0.0) == doctest::Approx(-1.0 / kPi));
}

TEST_CASE("cat size estimator recovers ideal amplitudes") {
    for (auto [a2, parity] : {std::pair{1.44, Parity::Odd}, {3.42, Parity::Even}, {0.8, Parity::Even}}) {
        const CatSize size = estimate_cat_size(IdealCat(std::sqrt(a2), parity).grid({}), parity);
        CHECK(size.alpha_sq == doctest::Approx(a2).epsilon(1e-3));
        CHECK(size.fidelity == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(size.alpha_sq_peak > 0.5 * a2);
    }
}

TEST_CASE("ill-posed cat fits") {
    const WignerGrid vacuum = eval_grid(gaussian_wigner_from_cov(Eigen::Matrix2d::Identity() * 0.5), {});
    CHECK_THROWS_AS(estimate_cat_size(vacuum, Parity::Even), DegenerateCatError);
    WignerGrid half = vacuum;
    half.values *= 0.5;
    CHECK_THROWS_AS(fidelity(half, 1.0, Parity::Even), NormalizationError);
}

TEST_CASE("Fock |1> negativity and macroscopicity") {
    const GridAxes ax = test::square_grid(7.0, 281);
    const PolyGaussianMixture fock1 = test::wigner_of(apply_addition(gaussian_char_from_cov(Eigen::Matrix2d::Identity() * 0.5), 0));
    const WignerGrid g = eval_grid(fock1, ax);
    CHECK(test::at(fock1, 0.4, -0.9) == doctest::Approx(oracle::fock1_wigner(0.4, -0.9)).epsilon(1e-12));
    CHECK(wigner_negativity(g) == doctest::Approx(2.0 * (2.0 * std::exp(-0.5) - 1.0)).epsilon(1e-4));
    CHECK(macroscopicity(fock1, ax) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(macroscopicity_fd(g) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("macroscopicity of Gaussian states") {
    const GridAxes ax = test::square_grid(8.0, 321);
    CHECK(std::abs(macroscopicity(PolyGaussianMixture(gaussian_wigner_from_cov(Eigen::Matrix2d::Identity() * 0.5)), ax)) < 1e-10);
    for (double nbar : {0.2, 1.0}) {
        const double s2 = nbar + 0.5;
        const PolyGaussianMixture th(gaussian_wigner_from_cov(Eigen::Matrix2d::Identity() * s2));
        CHECK(macroscopicity(th, ax) == doctest::Approx((1 - 2 * s2) / (8 * s2 * s2)).epsilon(1e-8));
    }
}

TEST_CASE("ideal cats: I equals the mean photon number and grows with alpha") {
    const GridAxes ax = test::square_grid(8.0, 641);
    for (Parity parity : {Parity::Odd, Parity::Even}) {
        double last = -1.0;
        for (double alpha : {0.6, 1.0, 1.4, 1.8}) {
            const double I = macroscopicity_fd(IdealCat(alpha, parity).grid(ax));
            CHECK(I == doctest::Approx(mean_photons(alpha, parity)).epsilon(1e-5));
            CHECK(I > last);
            last = I;
        }
    }
}

TEST_CASE("finite-difference and symbolic macroscopicity agree on a prepared cat") {
    SystemParams p;
    const PreparedCat cat = prepare_cat(p, Parity::Even);
    const GridAxes ax = test::square_grid(7.0, 281);
    CHECK(macroscopicity_fd(eval_grid(cat.state, ax)) == doctest::Approx(macroscopicity(cat.state, ax)).epsilon(1e-4));
}

TEST_CASE("principal axis and alignment") {
    const double phi = 0.6;
    Eigen::Matrix2d R;
    R << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    const Eigen::Matrix2d V = R * Eigen::Vector2d(1.5, 0.3).asDiagonal() * R.transpose();
    const PolyGaussianMixture w(gaussian_wigner_from_cov(V));
    CHECK(principal_axis_angle(eval_grid(w, {})) == doctest::Approx(phi).epsilon(1e-6));
    CHECK(std::abs(principal_axis_angle(eval_grid(align_to_x(w), {}))) < 1e-6);
}

TEST_CASE("grid refinement leaves the report unchanged") {
    SystemParams p;
    for (Parity parity : {Parity::Odd, Parity::Even}) {
        const PreparedCat cat = prepare_cat(p, parity);
        const CatReport coarse = cat_report(cat.state, parity);
        const CatReport fine = cat_report(cat.state, parity, GridAxes{}.refined());
        CHECK(fine.alpha_sq == doctest::Approx(coarse.alpha_sq).epsilon(1e-5));
        CHECK(std::abs(fine.fidelity - coarse.fidelity) < 1e-4);
        CHECK(std::abs(fine.negativity - coarse.negativity) < 1e-3);
        CHECK(std::abs(fine.macroscopicity - coarse.macroscopicity) < 1e-5);
    }
}

TEST_CASE("report serialization") {
    SystemParams p;
    const PreparedCat cat = prepare_cat(p, Parity::Odd);
    const CatReport r = cat_report(cat.state, Parity::Odd, {}, cat.herald_weight);
    CHECK(r.parity_sign == -1);
    CHECK(r.peak_overlap == doctest::Approx(std::exp(-2 * r.alpha_sq)));
    const auto j = nlohmann::json::parse(to_json(r));
    CHECK(j.size() == 7);
    for (const char* key : {"alpha_sq", "fidelity", "negativity", "macroscopicity", "parity_sign", "peak_overlap", "herald_weight"})
        CHECK(j.contains(key));
    CHECK(j["herald_weight"].get<double>() == cat.herald_weight);
}
