#include <doctest.h>

#include <cmath>

#include "magcat/dynamics.hpp"
#include "magcat/gaussian_measures.hpp"
#include "oracles/gaussian.hpp"

using namespace magcat;

namespace {

SystemParams at_r(double r, double gamma = 0.1, double n_m = 0.0) {
    SystemParams p;
    p.r = r;
    p.gamma_mhz = gamma;
    p.n_m = n_m;
    return p;
}

}  // namespace

TEST_CASE("rate derivation uses G = g^2/kappa - gamma") {
    SystemParams p = at_r(0.2);
    const Rates k = derive_rates(p);
    CHECK(k.G_mhz == doctest::Approx(0.15));
    CHECK(k.tau_us == doctest::Approx(0.2 / (2 * M_PI * 0.15)));

    p.r.reset();
    p.tau_us = k.tau_us;
    CHECK(derive_rates(p).r == doctest::Approx(0.2));
}

TEST_CASE("parameter validation") {
    SystemParams p = at_r(0.2);
    p.gamma_mhz = 0.25;
    CHECK_THROWS_AS(p.validate(), UnstableRegimeError);
    p.gamma_mhz = -0.1;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = at_r(0.2);
    p.tau_us = 1.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = at_r(0.2);
    p.kappa_mhz = 20.0;
    CHECK_FALSE(p.validate().empty());
}

TEST_CASE("thermal occupation") {
    CHECK(thermal_occupation(10.0, 0.0) == 0.0);
    CHECK(thermal_occupation(10.0, 0.3) == doctest::Approx(1.0 / std::expm1(6.62607015e-34 * 1e10 / (1.380649e-23 * 0.3))));
    CHECK_THROWS_AS(thermal_occupation(10.0, -1.0), ParameterError);
}

TEST_CASE("output modes keep bosonic commutators") {
    for (double r : {0.01, 0.2, 0.5}) {
        for (double n_m : {0.0, 0.2}) {
            const OutputModes m = output_modes(at_r(r, 0.1, n_m));
            CHECK(std::abs(commutator(m.m_out, m.m_out, m.overlaps) - 1.0) < 1e-10);
            CHECK(std::abs(commutator(m.c_out, m.c_out, m.overlaps) - 1.0) < 1e-10);
            CHECK(std::abs(commutator(m.c_out, m.m_out, m.overlaps)) < 1e-10);
        }
    }
}

TEST_CASE("lossless magnon amplification") {
    for (double r : {0.1, 0.3}) {
        const CovarianceMatrix V = output_covariance(at_r(r, 0.0));
        CHECK(V(2, 2) == doctest::Approx(std::exp(2 * r) - 0.5).epsilon(1e-12));
        CHECK(V(3, 3) == doctest::Approx(std::exp(2 * r) - 0.5).epsilon(1e-12));
        CHECK(physicality_check(V));
    }
}

TEST_CASE("r = 0 leaves vacuum") {
    const CovarianceMatrix V = output_covariance(at_r(0.0));
    CHECK((V - 0.5 * CovarianceMatrix::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("closed form agrees with the eliminated-cavity moment ODE") {
    for (double r : {0.05, 0.2, 0.45}) {
        for (double n_m : {0.0, 0.2}) {
            const SystemParams p = at_r(r, 0.1, n_m);
            CHECK((output_covariance(p) - covariance_oracle_ode(p, OracleModel::Adiabatic)).cwiseAbs().maxCoeff() < 1e-5);
        }
    }
}

TEST_CASE("coupled-cavity ODE residual shrinks as 1/kappa at fixed g^2/kappa") {
    SystemParams p = at_r(0.2);
    const double d1 = (output_covariance(p) - covariance_oracle_ode(p, OracleModel::Full)).cwiseAbs().maxCoeff();
    p.kappa_mhz *= 10.0;
    p.g_mhz *= std::sqrt(10.0);
    const double d2 = (output_covariance(p) - covariance_oracle_ode(p, OracleModel::Full)).cwiseAbs().maxCoeff();
    CHECK(d2 / d1 == doctest::Approx(0.1).epsilon(0.3));
}

TEST_CASE("Holstein-Primakoff validity ratio") {
    CHECK(hp_validity(1.0, 1e10).ratio == doctest::Approx(5e-11));
    CHECK_FALSE(hp_validity(1.0, 1e10).warn);
    CHECK(hp_validity(10.0, 10.0).warn);
}
