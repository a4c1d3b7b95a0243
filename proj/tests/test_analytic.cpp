#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "qgas/analytic.hpp"
#include "qgas/ensemble.hpp"

using namespace qgas;
using namespace qgas::analytic;
using std::complex;

TEST_CASE("partition_closed_n1 pinned values") {
    CHECK(partition_closed_n1(ComplexTemperature(0.0, 0.0), {1.0, 2.0}) ==
          complex<double>(2.0, 0.0));
    const double deps = 1.3;
    const ComplexTemperature at_zero(0.0, std::numbers::pi / deps);
    CHECK(std::abs(partition_closed_n1(at_zero, {0.2, 0.2 + deps})) <= 1e-12 * 2.0);
}

TEST_CASE("closed forms match the ensemble enumeration") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> beta_dist(0.0, 1.2);
    std::uniform_real_distribution<double> beta1_dist(-5.0, 5.0);
    std::uniform_real_distribution<double> eps_dist(-1.0, 1.5);
    std::uniform_real_distribution<double> q_dist(0.4, 2.5);
    for (int i = 0; i < 200; ++i) {
        const double eps1 = eps_dist(rng), eps2 = eps_dist(rng);
        const double q = q_dist(rng);
        const ComplexTemperature bt(beta_dist(rng), beta1_dist(rng));

        const SystemSpec one({eps1, eps2}, 1, DeformationParam(q), 1.0);
        const auto closed_z = partition_closed_n1(bt, {eps1, eps2});
        const auto summed_z = partition(one, bt);
        CHECK(std::abs(closed_z - summed_z) <= 1e-13 * std::abs(summed_z));

        const SystemSpec three({eps1, eps2}, 3, DeformationParam(q), 1.0);
        const auto closed_c = zc_closed_n3(bt, {eps1, eps2}, DeformationParam(q));
        const auto summed_c = zc(three, bt);
        CHECK(std::abs(closed_c - summed_c) <=
              1e-13 * std::max(std::abs(summed_c), 1e-300));
    }
}

TEST_CASE("zc_closed_n3 pinned values") {
    const DeformationParam q(2.0);
    CHECK(zc_closed_n3(ComplexTemperature(0.0, 0.0), {1.0, 0.0}, q) ==
          complex<double>(6.0, 0.0));
    const double deps = -1.0; // eps = (1, 0)
    const ComplexTemperature at_zero(0.0, std::numbers::pi / (2.0 * deps));
    CHECK(std::abs(zc_closed_n3(at_zero, {1.0, 0.0}, q)) <= 1e-12 * 6.0);
}

TEST_CASE("zeros_partition_n1 family") {
    const ZeroFamily family = zeros_partition_n1({0.0, 1.0}, -2, 2);
    CHECK(family.beta == 0.0);
    CHECK(family.beta1(0) == doctest::Approx(std::numbers::pi).epsilon(1e-15));

    const ZeroFamily family2 = zeros_partition_n1({0.0, 2.0}, -2, 2);
    CHECK(family2.beta1(-1) == doctest::Approx(-std::numbers::pi / 2).epsilon(1e-15));

    for (int n = family.n_min; n <= family.n_max; ++n) {
        const ComplexTemperature bt = family.member(n);
        CHECK(std::abs(partition_closed_n1(bt, {0.0, 1.0})) <= 1e-12 * 2.0);
        // beta = 0 makes |z| = |e^{-bt*eps1}| exactly 1
        CHECK(std::abs(std::abs(std::exp(-bt.value() * 0.7)) - 1.0) <= 1e-15);
    }
    CHECK_THROWS_AS(zeros_partition_n1({1.0, 1.0}), std::domain_error);
}

TEST_CASE("zeros_correlation_n3 family") {
    const DeformationParam q(2.0);
    const ZeroFamily family = zeros_correlation_n3({0.0, 1.0}, q, -3, 3);
    CHECK(family.beta1(0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    for (int n = family.n_min; n <= family.n_max; ++n) {
        const ComplexTemperature bt = family.member(n);
        CHECK(std::abs(zc_closed_n3(bt, {0.0, 1.0}, q)) <= 1e-12 * 6.0);
    }
    CHECK_THROWS_AS(zeros_correlation_n3({1.0, 1.0}, q), std::domain_error);
}

TEST_CASE("zero_times_n3 pinned values and the q -> 1 escape") {
    const auto times = zero_times_n3({0.0, 1.0}, DeformationParam(2.0), 1.0, 0, 0);
    REQUIRE(times.size() == 1);
    CHECK(times[0] == doctest::Approx(std::numbers::pi).epsilon(1e-15));

    CHECK_THROWS_AS(zero_times_n3({0.0, 1.0}, DeformationParam(1.0), 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(zero_times_n3({1.0, 1.0}, DeformationParam(2.0), 1.0),
                    std::domain_error);

    // tau(n=0) grows monotonically as q -> 1+
    double previous = 0.0;
    for (double q : {3.0, 2.0, 1.5, 1.1, 1.01}) {
        const auto tau = zero_times_n3({0.0, 1.0}, DeformationParam(q), 1.0, 0, 0);
        CHECK(tau[0] > previous);
        previous = tau[0];
    }
}

TEST_CASE("zero times land in the correlation-zero family") {
    // beta1 from evolution at a zero time satisfies beta1*q*deps = pi mod 2pi
    for (double q : {1.5, 2.0, 3.0}) {
        const DeformationParam dq(q);
        const double deps = 1.0;
        const auto times = zero_times_n3({0.0, 1.0}, dq, 1.0, -2, 2);
        for (double tau : times) {
            const ComplexTemperature bt = complex_beta(0.0, tau, dq, 1.0);
            const double phase = bt.beta1 * q * deps;
            const double wrapped =
                std::remainder(phase - std::numbers::pi, 2.0 * std::numbers::pi);
            CHECK(std::abs(wrapped) <= 1e-12);
        }
    }
}

TEST_CASE("end-to-end: the correlator vanishes at the zero times") {
    for (double q : {1.5, 2.0, 3.0}) {
        const SystemSpec spec({0.0, 1.0}, 3, DeformationParam(q), 1.0);
        const double beta = 1e-12;
        const double c0 = std::abs(correlator(spec, beta, 0.0, 0.0).value);
        const auto times = zero_times_n3({0.0, 1.0}, DeformationParam(q), 1.0, -1, 1);
        for (double tau : times) {
            CHECK(std::abs(correlator(spec, beta, tau, 0.0).value) <= 1e-10 * c0);
        }
    }
}
