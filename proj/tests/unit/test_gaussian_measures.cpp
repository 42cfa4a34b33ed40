#include <doctest.h>

#include <cmath>

#include "magcat/dynamics.hpp"
#include "magcat/gaussian_measures.hpp"
#include "oracles/gaussian.hpp"

using namespace magcat;

TEST_CASE("two-mode squeezed vacuum anchors") {
    for (double s : {0.05, 0.3, 1.0}) {
        const CovarianceMatrix V = oracle::tmsv_cov(s);
        CHECK(log_negativity(V) == doctest::Approx(2 * s).epsilon(1e-10));
        CHECK(steering(V) == doctest::Approx(std::log(std::cosh(2 * s))).epsilon(1e-10));
        CHECK(steering(V, SteeringDirection::OpticalToMagnon) == doctest::Approx(std::log(std::cosh(2 * s))).epsilon(1e-10));
        CHECK(smallest_pt_symplectic_eigenvalue(V) == doctest::Approx(0.5 * std::exp(-2 * s)).epsilon(1e-10));
        CHECK(renyi2_entropy(2 * V) == doctest::Approx(0.0).epsilon(1e-10));
    }
}

TEST_CASE("product states carry no correlations") {
    CovarianceMatrix V = CovarianceMatrix::Identity() * 0.5;
    V(2, 2) = V(3, 3) = 1.3;
    CHECK(log_negativity(V) == 0.0);
    CHECK(steering(V) == 0.0);
}

TEST_CASE("physicality") {
    CHECK(physicality_check(oracle::tmsv_cov(0.4)));
    CHECK_FALSE(physicality_check(Eigen::Matrix2d::Identity() * 0.3));
}

TEST_CASE("without magnon damping the output is a two-mode squeezed vacuum") {
    double last = 0.0;
    for (int i = 1; i <= 50; ++i) {
        SystemParams p;
        p.gamma_mhz = 0.0;
        p.r = 0.01 * i;
        const CovarianceMatrix V = output_covariance(p);
        const double two_s = std::acosh(2 * std::exp(2 * *p.r) - 1);
        CHECK(log_negativity(V) == doctest::Approx(two_s).epsilon(1e-10));
        CHECK(steering(V) == doctest::Approx(std::log(std::cosh(two_s))).epsilon(1e-10));
        CHECK(log_negativity(V) > last);
        last = log_negativity(V);
    }
}

TEST_CASE("correlations stay positive with magnon damping") {
    for (int i = 1; i <= 50; ++i) {
        SystemParams p;
        p.r = 0.01 * i;
        const CovarianceMatrix V = output_covariance(p);
        CHECK(log_negativity(V) > 0.0);
        CHECK(steering(V) > 0.0);
    }
}

TEST_CASE("odd-sized matrices are rejected") {
    CHECK_THROWS_AS(renyi2_entropy(Eigen::Matrix3d::Identity()), DimensionError);
}
