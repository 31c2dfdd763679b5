#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gr24/errors.hpp"
#include "gr24/frame.hpp"
#include "gr24/harmonic_kernel.hpp"
#include "gr24/quadrature.hpp"
#include "gr24/special_functions.hpp"

namespace gr24 {

/// Pair-interaction kernel selector: Riesz s-kernel d^-s (s > 0) or -log d.
struct EnergyKind {
    bool is_log = false;
    double s = 0.0;

    static EnergyKind riesz(double s) {
        if (s <= 0.0) throw InvalidParameterError("EnergyKind::riesz: s must be positive");
        return {false, s};
    }
    static EnergyKind logarithmic() { return {true, 0.0}; }
};

struct Configuration {
    std::vector<Frame> points;
    std::size_t size() const { return points.size(); }
};

/// Discrete energy sum_{i != j} K(P_i, P_j) over ordered pairs.
/// Returns +infinity if two points coincide (chordal distance < 1e-12).
inline double discrete_energy(const Configuration& config, EnergyKind kind) {
    const std::size_t n = config.size();
    if (n < 2) throw InvalidParameterError("discrete_energy: need at least 2 points");
    double sum = 0.0, comp = 0.0; // Kahan, fixed (i,j) order
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double u = chordal_distance_sq(config.points[i], config.points[j]);
            if (u < 1e-24) return std::numeric_limits<double>::infinity();
            const double kij = kind.is_log ? -0.5 * std::log(u) : std::pow(u, -0.5 * kind.s);
            const double y = 2.0 * kij - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    return sum;
}

/// Continuous energy of the uniform measure, quadrature route:
/// (1/2) int_0^1 int_-1^1 of the kernel in the xi variables.
inline double continuous_energy_quadrature(EnergyKind kind, const QuadratureSpec& spec) {
    if (!kind.is_log && kind.s >= 4.0) throw OutOfRangeError("continuous energy undefined for s >= 4");
    if (kind.is_log) {
        auto f = [](double x, double y) { return std::log(1.0 - x * y); };
        IntegralResult r = integrate_2d(f, Rect{-1.0, 1.0, 0.0, 1.0}, spec, std::make_pair(1.0, 1.0));
        return -0.25 * r.value;
    }
    const double e = -0.5 * kind.s;
    auto f = [e](double x, double y) { return std::pow(1.0 - x * y, e); };
    IntegralResult r = integrate_2d(f, Rect{-1.0, 1.0, 0.0, 1.0}, spec, std::make_pair(1.0, 1.0));
    return 0.5 * r.value;
}

/// Continuous energy W of the uniform measure (the minimal continuous energy):
/// W_s = 3F2(1/2, s/4+1/2, s/4; 3/2, 3/2; 1), W_log = 1 - pi^2/16 - log(2)/2.
/// As s -> 4 the series tail cannot be certified at 1e-12 in doubles (the
/// partial-sum roundoff floor is ~K*eps), so the series is retried at 1e-9
/// before falling back to the quadrature representation.
inline double continuous_energy(EnergyKind kind) {
    if (kind.is_log) return 1.0 - pi_const * pi_const / 16.0 - 0.5 * std::log(2.0);
    if (kind.s >= 4.0) throw OutOfRangeError("continuous_energy: finite only for 0 < s < 4");
    const double a2 = 0.25 * kind.s + 0.5, a3 = 0.25 * kind.s;
    for (double tol : {1e-12, 1e-9}) {
        try {
            return hypergeom_3f2_unit(0.5, a2, a3, 1.5, 1.5, tol).value;
        } catch (const SlowConvergenceError&) {
        }
    }
    QuadratureSpec spec;
    spec.abs_tol = 1e-9;
    spec.rel_tol = 1e-8;
    return continuous_energy_quadrature(kind, spec);
}

/// Quadrature policy the expected-energy integrals can actually meet at the
/// default depth cap: the unresolved corner mass below the deepest cell
/// scales like h^(2-s/2), which caps the attainable accuracy for s > 2.
inline QuadratureSpec expected_energy_spec(EnergyKind kind) {
    QuadratureSpec spec;
    if (!kind.is_log && kind.s > 2.0 && kind.s < 4.0) {
        spec.abs_tol = 1e-6;
        spec.rel_tol = 1e-5;
    } else {
        spec.abs_tol = 1e-8;
        spec.rel_tol = 1e-8;
    }
    return spec;
}

/// Exact (quadrature) expected energy of the harmonic-ensemble DPP with
/// kernel degree k, which samples N = d_k points:
///   s < 4 : W_s N^2 - (1/2) II K^2 (1-xy)^{-s/2}
///   log   : W_log N^2 + (1/4) II K^2 log(1-xy)
///   s = 4 : (1/2) II (N^2 - K^2) (1-xy)^{-2}
/// with II over xi_plus in [-1,1], xi_minus in [0,1].
inline double expected_dpp_energy_exact(int k, EnergyKind kind, const QuadratureSpec& spec) {
    if (k < 1) throw InvalidParameterError("expected_dpp_energy_exact: k must be >= 1");
    if (!kind.is_log && kind.s > 4.0)
        throw OutOfRangeError("expected_dpp_energy_exact: only 0 < s <= 4 or log");
    const double n = static_cast<double>(kernel_dim(k));
    const Rect region{-1.0, 1.0, 0.0, 1.0};
    const auto corner = std::make_pair(1.0, 1.0);

    if (kind.is_log) {
        auto f = [k](double x, double y) {
            const double kk = kernel_eval(k, x, y);
            return kk * kk * std::log(1.0 - x * y);
        };
        IntegralResult r = integrate_2d(f, region, spec, corner);
        return continuous_energy(EnergyKind::logarithmic()) * n * n + 0.25 * r.value;
    }
    if (kind.s == 4.0) {
        auto f = [k, n](double x, double y) {
            const double kk = kernel_eval(k, x, y);
            const double u = 1.0 - x * y;
            return (n * n - kk * kk) / (u * u);
        };
        IntegralResult r = integrate_2d(f, region, spec, corner);
        return 0.5 * r.value;
    }
    const double e = -0.5 * kind.s;
    auto f = [k, e](double x, double y) {
        const double kk = kernel_eval(k, x, y);
        return kk * kk * std::pow(1.0 - x * y, e);
    };
    IntegralResult r = integrate_2d(f, region, spec, corner);
    return continuous_energy(kind) * n * n - 0.5 * r.value;
}

namespace detail {

/// J1(x)^2 J1(y)^2 / (x y (x^2+y^2)^p) with the removable origin limit.
inline double bessel_pair_kernel(double x, double y, double p) {
    if (x <= 0.0 || y <= 0.0) return 0.0;
    const double jx = bessel_j(1, x), jy = bessel_j(1, y);
    return jx * jx * jy * jy / (x * y * std::pow(x * x + y * y, p));
}

/// Blocks of [1,inf) x [y0,y1] until the analytic x-tail bound is spent.
template <class F>
double strip_blocks_x(F&& f, double y0, double y1, double p, const QuadratureSpec& spec) {
    auto tail = [&](double T) {
        // int_{x>T} (2/pi) x^{-2-2p} dx times the J1^2/y mass over [y0,y1]
        return j1sq_envelope_full_mass() * (2.0 / pi_const) * std::pow(T, -1.0 - 2.0 * p) / (1.0 + 2.0 * p);
    };
    double total = 0.0, T = 1.0;
    while (tail(T) > spec.abs_tol) {
        const double Tn = T + pi_const;
        total += integrate_2d(f, Rect{T, Tn, y0, y1}, spec).value;
        T = Tn;
    }
    return total;
}

} // namespace detail

/// Next-order constant of the expected DPP energy:
///   Riesz s < 4 : C_s = 2^{2+3s/4} II_{[0,inf)^2} J1^2 J1^2 / (xy (x^2+y^2)^{s/2})
///   log         : C_log = (1+2G)/pi + 1/4 - gamma + log(2)/4
///   s = 4       : C_4 = 7log2/4 + 2 II_{[0,1]^2} (x^2y^2 - 16 J1^2J1^2)/(xy(x^2+y^2)^2)
///                      - 32 II_{[1,inf)^2} - 64 II_{[1,inf)x[0,1]} of J1^2J1^2/(xy(x^2+y^2)^2).
inline double dpp_asymptotic_constant(EnergyKind kind, const QuadratureSpec& spec) {
    if (kind.is_log)
        return (1.0 + 2.0 * catalan_constant) / pi_const + 0.25 - euler_gamma + 0.25 * std::log(2.0);

    if (kind.s == 4.0) {
        auto inner = [](double x, double y) {
            if (x <= 0.0 || y <= 0.0) return 0.0;
            const double jx = bessel_j(1, x), jy = bessel_j(1, y);
            const double r2 = x * x + y * y;
            return (x * x * y * y - 16.0 * jx * jx * jy * jy) / (x * y * r2 * r2);
        };
        IntegralResult p1 = integrate_2d(inner, Rect{0.0, 1.0, 0.0, 1.0}, spec, std::make_pair(0.0, 0.0));
        auto far = [](double x, double y) { return detail::bessel_pair_kernel(x, y, 2.0); };
        // [1,inf)^2 assembled from an x-strip sweep: [T,T+pi] x [1,T+pi] rings
        double p2 = 0.0;
        {
            auto tail = [&](double T) {
                return 2.0 * detail::j1sq_envelope_full_mass() * (2.0 / pi_const) * std::pow(T, -5.0) / 5.0;
            };
            double T = 1.0;
            while (tail(T) > spec.abs_tol) {
                const double Tn = T + pi_const;
                p2 += integrate_2d(far, Rect{T, Tn, 1.0, Tn}, spec).value;
                if (T > 1.0) p2 += integrate_2d(far, Rect{1.0, T, T, Tn}, spec).value;
                T = Tn;
            }
        }
        const double p3 = detail::strip_blocks_x(far, 0.0, 1.0, 2.0, spec);
        return 1.75 * std::log(2.0) + 2.0 * p1.value - 32.0 * p2 - 64.0 * p3;
    }

    if (kind.s >= 4.0) throw OutOfRangeError("dpp_asymptotic_constant: only 0 < s <= 4 or log");
    const double p = 0.5 * kind.s;
    auto f = [p](double x, double y) { return detail::bessel_pair_kernel(x, y, p); };
    IntegralResult q = integrate_semi_infinite_2d(f, 1.0, spec, p);
    return std::pow(2.0, 2.0 + 0.75 * kind.s) * q.value;
}

/// Two-term asymptote of the expected DPP energy at N points; the caller
/// supplies the next-order constant (from dpp_asymptotic_constant).
inline double dpp_energy_asymptote(double n, EnergyKind kind, double constant) {
    if (n < 2.0) throw InvalidParameterError("dpp_energy_asymptote: N must be >= 2");
    if (kind.is_log)
        return continuous_energy(kind) * n * n - 0.25 * n * std::log(n) + constant * n;
    if (kind.s == 4.0) return 0.25 * n * n * std::log(n) + constant * n * n;
    if (kind.s > 4.0) throw OutOfRangeError("dpp_energy_asymptote: only 0 < s <= 4 or log");
    return continuous_energy(kind) * n * n - constant * std::pow(n, 1.0 + 0.25 * kind.s);
}

/// Coefficient of N^2 log N in the minimal Riesz 4-energy:
/// beta_4 / vol(Gr(2,4)) = (pi^2/2) / (2 pi^2) = 1/4.
inline double hypersingular_leading_coefficient() { return 0.25; }

} // namespace gr24
