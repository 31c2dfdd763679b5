#include <catch2/catch.hpp>

#include <cmath>

#include "gr24/quadrature.hpp"
#include "gr24/special_functions.hpp"

using namespace gr24;

TEST_CASE("gauss-legendre nodes and weights") {
    const GaussRule& r1 = gauss_legendre_nodes(1);
    CHECK(r1.nodes[0] == 0.0);
    CHECK(r1.weights[0] == 2.0);

    const GaussRule& r2 = gauss_legendre_nodes(2);
    CHECK(r2.nodes[0] == Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r2.nodes[1] == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r2.weights[0] == Approx(1.0).epsilon(1e-14));

    // extended-precision Legendre evaluation isolates node accuracy from
    // double-precision recurrence noise
    auto legendre_ld = [](int n, double x) {
        long double p0 = 1.0L, p1 = x;
        if (n == 0) return 1.0;
        for (int m = 1; m < n; ++m) {
            long double p2 = ((2 * m + 1) * x * p1 - m * p0) / (m + 1);
            p0 = p1;
            p1 = p2;
        }
        return static_cast<double>(p1);
    };
    for (int n : {4, 16, 24, 64, 128}) {
        const GaussRule& r = gauss_legendre_nodes(n);
        double wsum = 0.0;
        for (int i = 0; i < n; ++i) {
            wsum += r.weights[i];
            // residual of the stored double node: rounding the exact root to
            // a double already costs up to |P_n'| * ulp/2 ~ n^2 * 2.8e-17
            // near the boundary, so 1e-14 is only reachable for small n
            CHECK(std::abs(legendre_ld(n, r.nodes[i])) <= std::max(1e-14, 2.8e-17 * n * n));
        }
        CHECK(wsum == Approx(2.0).margin(1e-13));
    }

    // polynomial exactness 2n-1: n=16 integrates x^30 exactly
    const GaussRule& r16 = gauss_legendre_nodes(16);
    double acc = 0.0;
    for (int i = 0; i < 16; ++i) acc += r16.weights[i] * std::pow(r16.nodes[i], 30);
    CHECK(acc == Approx(2.0 / 31.0).margin(1e-13));
}

TEST_CASE("integrate_2d on smooth and singular integrands") {
    QuadratureSpec spec;

    auto one = [](double, double) { return 1.0; };
    CHECK(integrate_2d(one, Rect{-1, 1, -1, 1}, spec).value == Approx(4.0).epsilon(1e-14));

    // tensor monomial exactness per axis
    auto mono = [](double x, double y) { return std::pow(x, 8) * std::pow(y, 6); };
    CHECK(integrate_2d(mono, Rect{-1, 1, -1, 1}, spec).value ==
          Approx(4.0 / (9.0 * 7.0)).margin(1e-12));

    auto riesz2 = [](double x, double y) { return 1.0 / (1.0 - x * y); };
    IntegralResult r = integrate_2d(riesz2, Rect{-1, 1, -1, 1}, spec, std::make_pair(1.0, 1.0));
    CHECK(r.value == Approx(pi_const * pi_const / 2.0).margin(1e-6));

    auto logk = [](double x, double y) { return std::log(1.0 - x * y); };
    IntegralResult l = integrate_2d(logk, Rect{-1, 1, -1, 1}, spec, std::make_pair(1.0, 1.0));
    const double expected = -8.0 * (1.0 - pi_const * pi_const / 16.0 - 0.5 * std::log(2.0));
    CHECK(l.value == Approx(expected).margin(1e-6));
}

TEST_CASE("integrate_2d refinement monotonicity in max_depth") {
    auto riesz2 = [](double x, double y) { return 1.0 / (1.0 - x * y); };
    double prev_err = 1e300;
    for (int depth : {8, 16, 28, 40}) {
        QuadratureSpec spec;
        spec.max_depth = depth;
        spec.abs_tol = 1e-13; // force the depth cap to be binding near the corner
        spec.rel_tol = 1e-13;
        IntegralResult r;
        try {
            r = integrate_2d(riesz2, Rect{-1, 1, -1, 1}, spec, std::make_pair(1.0, 1.0));
        } catch (const QuadratureFailureError&) {
            continue; // shallow depths may exceed 10x tol; skip those
        }
        CHECK(r.err_estimate <= prev_err * 1.0000001);
        prev_err = r.err_estimate;
    }
    CHECK(prev_err < 1e-6);
}

TEST_CASE("integrate_2d symmetric split consistency") {
    // symmetric integrand integrated over symmetric half-domains
    QuadratureSpec spec;
    auto f = [](double x, double y) { return std::cos(3 * x * y) + x * x * y * y; };
    const double left = integrate_2d(f, Rect{-1, 0, -1, 1}, spec).value;
    const double right = integrate_2d(f, Rect{0, 1, -1, 1}, spec).value;
    CHECK(left == Approx(right).margin(1e-10));
}

TEST_CASE("integrate_2d failure paths") {
    QuadratureSpec bad;
    bad.base_rule_order = 2;
    auto one = [](double, double) { return 1.0; };
    CHECK_THROWS_AS(integrate_2d(one, Rect{-1, 1, -1, 1}, bad), InvalidParameterError);

    QuadratureSpec spec;
    auto nan_f = [](double, double) { return std::nan(""); };
    CHECK_THROWS_AS(integrate_2d(nan_f, Rect{-1, 1, -1, 1}, spec), QuadratureFailureError);

    // non-integrable singularity: (1-xy)^{-3} has infinite mass at the corner
    QuadratureSpec tight;
    tight.abs_tol = 1e-12;
    tight.rel_tol = 1e-12;
    auto hyper = [](double x, double y) { return std::pow(1.0 - x * y, -3.0); };
    CHECK_THROWS_AS(integrate_2d(hyper, Rect{-1, 1, 0, 1}, tight, std::make_pair(1.0, 1.0)),
                    QuadratureFailureError);
}

TEST_CASE("integrate_1d calibration integrals") {
    QuadratureSpec spec;
    // int_0^1 J1(x)^2/x dx = (1 - J0(1)^2 - J1(1)^2)/2
    auto f = [](double x) {
        if (x <= 0.0) return 0.0;
        const double j = bessel_j(1, x);
        return j * j / x;
    };
    const double j0 = bessel_j(0, 1.0), j1 = bessel_j(1, 1.0);
    CHECK(integrate_1d(f, 0.0, 1.0, spec).value ==
          Approx(0.5 * (1.0 - j0 * j0 - j1 * j1)).margin(1e-12));

    // int_0^inf J1(x)^2/x dx = 1/2: integrate to T, then add the smooth tail
    // int_T^inf dx/(pi x^2) = 1/(pi T) from J1(x)^2 ~ (1 - sin-term)/(pi x);
    // the oscillatory remainder is O(T^-2)
    double total = integrate_1d(f, 0.0, 1.0, spec).value;
    double t = 1.0;
    while (t < 150.0) {
        total += integrate_1d(f, t, t + pi_const, spec).value;
        t += pi_const;
    }
    CHECK(total + 1.0 / (pi_const * t) == Approx(0.5).margin(3e-5));
}

TEST_CASE("integrate_semi_infinite_2d reproduces the s=2 Bessel constant") {
    QuadratureSpec spec;
    spec.abs_tol = 3e-7;
    spec.rel_tol = 1e-7;
    auto f = [](double x, double y) {
        if (x <= 0.0 || y <= 0.0) return 0.0;
        const double jx = bessel_j(1, x), jy = bessel_j(1, y);
        return jx * jx * jy * jy / (x * y * (x * x + y * y));
    };
    IntegralResult q = integrate_semi_infinite_2d(f, 1.0, spec, 1.0);
    const double c2_closed = -std::pow(2.0, 3.5) * (4.0 - 24.0 * catalan_constant + 3.0 * pi_const) /
                             (48.0 * pi_const);
    CHECK(std::pow(2.0, 3.5) * q.value == Approx(c2_closed).margin(1e-3));
}
