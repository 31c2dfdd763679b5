#include <catch2/catch.hpp>

#include <cmath>

#include "gr24/bounds.hpp"
#include "gr24/rng.hpp"
#include "gr24/sampling.hpp"

using namespace gr24;

TEST_CASE("taylor coefficients c_{s,k}") {
    CHECK(csk(2.0, 0) == 1.0);
    CHECK(csk(0.7, 0) == 1.0);
    CHECK(csk(2.0, 2) == Approx(2.0)); // (1)_2
    CHECK(csk(0.0, 3) == Approx(1.0)); // 2!/2
    CHECK(csk(0.0, 1) == Approx(0.5));
    CHECK(csk(1.0, 2) == Approx(0.75)); // (1/2)(3/2)
}

TEST_CASE("A_{s,n}") {
    CHECK(asn(2.0, 1) == Approx(1.0));
    CHECK(asn(0.0, 2) == Approx(1.0));
    CHECK(asn(1.0, 1) == Approx(8.0 / 3.0));
    CHECK_THROWS_AS(asn(0.0, 1), InvalidParameterError);
    CHECK_THROWS_AS(asn(1.0, 0), InvalidParameterError);
}

TEST_CASE("lower bound constants") {
    CHECK(lower_bound_constant(2.0) == Approx(-2.5));
    CHECK(lower_bound_constant(0.0) == Approx(-0.8125));
    CHECK(lower_bound_constant(1.0) == Approx(-11.0 / 6.0));
    CHECK_THROWS_AS(lower_bound_constant(4.0), OutOfRangeError);
    for (double s : {0.0, 0.5, 1.0, 2.0, 3.0, 3.9}) CHECK(lower_bound_constant(s) < 0.0);
}

TEST_CASE("lower bound asymptote") {
    const double w2 = continuous_energy(EnergyKind::riesz(2.0));
    CHECK(riesz_lower_bound_asymptote(100.0, 2.0) ==
          Approx(w2 * 1e4 - 2.5 * std::pow(100.0, 1.5)));
    const double wlog = continuous_energy(EnergyKind::logarithmic());
    CHECK(riesz_lower_bound_asymptote(100.0, 0.0) ==
          Approx(wlog * 1e4 - 25.0 * std::log(100.0) - 81.25));
    for (double s : {0.0, 1.0, 2.5}) {
        const double w = s > 0 ? continuous_energy(EnergyKind::riesz(s)) : wlog;
        CHECK(riesz_lower_bound_asymptote(50.0, s) < w * 2500.0);
    }
}

TEST_CASE("exact LP lower bound: g(1,1) arithmetic and dual-method check") {
    QuadratureSpec spec;
    const LPBoundResult r = exact_lp_lower_bound(10.0, {2.0, 1, 1.0}, spec);
    CHECK(r.g11 == Approx(2.0).epsilon(1e-14)); // f_2(1) + c_{2,1} = 1 + 1

    // independent midpoint oracle for g00 = (1/4) II F(1-xy)
    auto minorant = [](double u) {
        return 1.0 / (u + 1.0) + 1.0 / ((u + 1.0) * (u + 1.0)); // F_{2,1,1}
    };
    const int cells = 1200;
    double acc = 0.0;
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            const double x = -1.0 + (i + 0.5) * 2.0 / cells;
            const double y = -1.0 + (j + 0.5) * 2.0 / cells;
            acc += minorant(1.0 - x * y);
        }
    const double g00_oracle = 0.25 * acc * (2.0 / cells) * (2.0 / cells);
    CHECK(r.g00 == Approx(g00_oracle).epsilon(1e-5));
    CHECK(r.bound == Approx(r.g00 * 100.0 - 20.0));
}

TEST_CASE("LP bound tracks its asymptote at delta = N^{-1/2}") {
    QuadratureSpec spec;
    for (double n : {100.0, 1000.0, 10000.0}) {
        const LPBoundResult r = exact_lp_lower_bound(n, {2.0, 1, 1.0 / std::sqrt(n)}, spec);
        const double asy = riesz_lower_bound_asymptote(n, 2.0);
        // same leading orders: deviation is o(N^{3/2})
        CHECK(std::abs(r.bound - asy) / std::pow(n, 1.5) < 0.5);
    }
    // and the deviation ratio shrinks with N
    const double d1 = std::abs(exact_lp_lower_bound(100.0, {2.0, 1, 0.1}, spec).bound -
                               riesz_lower_bound_asymptote(100.0, 2.0)) / std::pow(100.0, 1.5);
    const double d2 = std::abs(exact_lp_lower_bound(10000.0, {2.0, 1, 0.01}, spec).bound -
                               riesz_lower_bound_asymptote(10000.0, 2.0)) / std::pow(10000.0, 1.5);
    CHECK(d2 < d1);
}

TEST_CASE("hypersingular bound closed form") {
    const double n = 100.0;
    // delta = 1: psi00 = (1/4) log 3
    const double psi00 = std::log(3.0) / 4.0;
    CHECK(hypersingular_lower_bound(n, 1.0) == Approx(psi00 * n * n - n).epsilon(1e-12));
    // large-N defaults approach (1/4) N^2 log N + (log2/2 - 1) N^2
    const double big = 1e8;
    const double expect = 0.25 * big * big * std::log(big) + (0.5 * std::log(2.0) - 1.0) * big * big;
    CHECK(hypersingular_lower_bound(big) == Approx(expect).epsilon(1e-3));
}

TEST_CASE("moments: closed cases and nonnegativity") {
    RandomStream rng(53);
    Configuration single{{sample_uniform(rng)}};
    CHECK(moment(single, {2, 1}) == Approx(1.0).margin(1e-12));

    Configuration config;
    for (int i = 0; i < 14; ++i) config.points.push_back(sample_uniform(rng));
    const double n2 = 14.0 * 14.0;
    CHECK(moment(config, {0, 0}) == Approx(n2).margin(1e-9));

    // Lemma-backed nonnegativity over random configurations
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_double() * 28);
        Configuration c;
        for (int i = 0; i < n; ++i) c.points.push_back(sample_uniform(rng));
        for (const Partition& tau : partitions_up_to(6)) {
            CHECK(moment(c, tau) >= -1e-8 * n * n);
        }
    }
}

TEST_CASE("energy-Fourier identity") {
    RandomStream rng(59);
    Configuration config;
    for (int i = 0; i < 20; ++i) config.points.push_back(sample_uniform(rng));

    // g = 1
    CHECK(energy_fourier_identity_check(config, {{Partition{0, 0}, 1.0}}) <= 1e-12);

    // g = P_{(1,0)}
    CHECK(energy_fourier_identity_check(config, {{Partition{1, 0}, 1.0}}) <= 1e-10);

    // g = K_2 / d_2 as explicit coefficients: g^(tau) = d_tau / d_2 over |tau| <= 2
    std::vector<std::pair<Partition, double>> coeffs;
    for (const Partition& tau : partitions_up_to(2))
        coeffs.emplace_back(tau, static_cast<double>(partition_dim(tau)) / 45.0);
    CHECK(energy_fourier_identity_check(config, coeffs) <= 1e-10);

    // degree-8 polynomial kernel
    std::vector<std::pair<Partition, double>> high;
    for (const Partition& tau : partitions_up_to(8))
        high.emplace_back(tau, 1.0 / (1.0 + tau.degree()));
    CHECK(energy_fourier_identity_check(config, high) <= 1e-9);
}

TEST_CASE("coefficient nonnegativity of the LP minorant family") {
    QuadratureSpec spec;
    auto report = coefficient_nonnegativity_report(1.0, 0.5, 4, spec);
    for (const auto& entry : report) {
        if (entry.tau.degree() > 0) CHECK(entry.value >= -1e-8);
        if (entry.tau == Partition{1, 0}) CHECK(entry.value > 0.0);
        if (entry.tau == Partition{1, 1}) CHECK(entry.value >= -1e-8);
    }
    // log case: tau = (0,0) is exempt from the sign constraint
    auto logrep = coefficient_nonnegativity_report(0.0, 1.0, 3, spec);
    for (const auto& entry : logrep)
        if (entry.tau.degree() > 0) CHECK(entry.value >= -1e-8);
}
