#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gr24/energy.hpp"
#include "gr24/errors.hpp"
#include "gr24/harmonic_kernel.hpp"
#include "gr24/quadrature.hpp"

namespace gr24 {

// Throughout this module s = 0 encodes the logarithmic case, with
// f_0(u) = -(1/2) log u as the kernel profile.

/// Taylor coefficients of the kernel profile: f_s^{(k)} = (-1)^k c_{s,k} f_{s+2k}.
inline double csk(double s, int k) {
    if (s < 0.0 || k < 0) throw InvalidParameterError("csk: need s >= 0 and k >= 0");
    if (k == 0) return 1.0;
    if (s > 0.0) return pochhammer(0.5 * s, k);
    double f = 0.5;
    for (int i = 1; i < k; ++i) f *= i;
    return f; // (k-1)!/2
}

/// A_{s,n} = 2 / ((n + s/2)(n + s/2 - 1)); valid for n > 1 - s/2.
inline double asn(double s, int n) {
    if (s < 0.0) throw InvalidParameterError("asn: s must be >= 0");
    if (static_cast<double>(n) <= 1.0 - 0.5 * s)
        throw InvalidParameterError("asn: requires n > 1 - s/2");
    const double m = n + 0.5 * s;
    return 2.0 / (m * (m - 1.0));
}

/// Asymptotic lower-bound constants at the default Taylor order
/// (n = 1 for s > 0, n = 2 for s = 0):
///   C_{s,1} = -(A_{s,1} c_{s,2} / (4 (2 - s/2)) + 1 + c_{s,1})
///   C_{0,2} = -(A_{0,2} c_{0,3} / (8 2!) + c_{0,1} + c_{0,2}/2)
inline double lower_bound_constant(double s) {
    if (s < 0.0 || s >= 4.0) throw OutOfRangeError("lower_bound_constant: need 0 <= s < 4");
    if (s > 0.0)
        return -(asn(s, 1) * csk(s, 2) / (4.0 * (2.0 - 0.5 * s)) + 1.0 + csk(s, 1));
    return -(asn(0.0, 2) * csk(0.0, 3) / 16.0 + csk(0.0, 1) + 0.5 * csk(0.0, 2));
}

/// Two-term lower-bound asymptote for the minimal discrete energy.
inline double riesz_lower_bound_asymptote(double n, double s) {
    if (n < 2.0) throw InvalidParameterError("riesz_lower_bound_asymptote: N must be >= 2");
    if (s < 0.0 || s >= 4.0) throw OutOfRangeError("riesz_lower_bound_asymptote: need 0 <= s < 4");
    if (s > 0.0)
        return continuous_energy(EnergyKind::riesz(s)) * n * n +
               lower_bound_constant(s) * std::pow(n, 1.0 + 0.25 * s);
    return continuous_energy(EnergyKind::logarithmic()) * n * n - 0.25 * n * std::log(n) +
           lower_bound_constant(0.0) * n;
}

struct LPBoundParams {
    double s = 2.0;   ///< s = 0 encodes the log case
    int n = 1;        ///< Taylor order, must satisfy n > 1 - s/2
    double delta = 1.0;

    void validate() const {
        if (s < 0.0) throw InvalidParameterError("LPBoundParams: s must be >= 0");
        if (delta <= 0.0) throw InvalidParameterError("LPBoundParams: delta must be positive");
        if (static_cast<double>(n) <= 1.0 - 0.5 * s)
            throw InvalidParameterError("LPBoundParams: requires n > 1 - s/2");
    }
    static LPBoundParams with_default_order(double s, double delta) {
        return {s, s > 0.0 ? 1 : 2, delta};
    }
};

struct LPBoundResult {
    double g00 = 0.0;   ///< Fourier-Jacobi mean of the minorant
    double g11 = 0.0;   ///< value of the minorant at coincidence
    double bound = 0.0; ///< g00 N^2 - g11 N
    IntegralResult quad;
};

namespace detail {

/// F_{s,n,delta}(u): the Taylor minorant of the kernel profile, via the
/// explicit derivative formula (not numeric differentiation).
inline double taylor_minorant(double s, int n, double delta, double u) {
    const double v = u + delta;
    if (s > 0.0) {
        double acc = 0.0, dk = 1.0, fact = 1.0;
        for (int k = 0; k <= n; ++k) {
            if (k > 0) {
                dk *= delta;
                fact *= k;
            }
            acc += dk / fact * csk(s, k) * std::pow(v, -0.5 * s - k);
        }
        return acc;
    }
    double acc = -0.5 * std::log(v);
    double ratio = 1.0; // (delta / v)^k
    for (int k = 1; k <= n; ++k) {
        ratio *= delta / v;
        acc += ratio / (2.0 * k);
    }
    return acc;
}

} // namespace detail

/// Rigorous linear-programming lower bound for the discrete energy at every N:
/// E >= g00 N^2 - g11 N with g = F_{s,n,delta}(1-xy), whose Fourier-Jacobi
/// coefficients are nonnegative. g00 is computed by quadrature.
inline LPBoundResult exact_lp_lower_bound(double n_points, const LPBoundParams& params,
                                          const QuadratureSpec& spec) {
    params.validate();
    if (n_points < 2.0) throw InvalidParameterError("exact_lp_lower_bound: N must be >= 2");
    auto g = [&](double x, double y) {
        return detail::taylor_minorant(params.s, params.n, params.delta, 1.0 - x * y);
    };
    // (1/4) over [-1,1]^2 = (1/2) over [-1,1]x[0,1] by the (x,y) -> (-x,-y)
    // symmetry of 1-xy; the half-rectangle has (1,1) as its only steep corner
    IntegralResult q = integrate_2d(g, Rect{-1.0, 1.0, 0.0, 1.0}, spec, std::make_pair(1.0, 1.0));
    LPBoundResult res;
    res.g00 = 0.5 * q.value;
    res.g11 = detail::taylor_minorant(params.s, params.n, params.delta, 0.0);
    res.bound = res.g00 * n_points * n_points - res.g11 * n_points;
    res.quad = q;
    return res;
}

/// Hypersingular (s = 4) lower bound with the closed-form psi-hat(0,0):
/// psi(0,0)^ = log(1 + 2/delta) / (2 (1 + delta)); bound = psi^ N^2 - N/delta^2.
/// Default delta = N^{-1/2}.
inline double hypersingular_lower_bound(double n_points, std::optional<double> delta = std::nullopt) {
    if (n_points < 2.0) throw InvalidParameterError("hypersingular_lower_bound: N must be >= 2");
    const double d = delta.value_or(1.0 / std::sqrt(n_points));
    if (d <= 0.0) throw InvalidParameterError("hypersingular_lower_bound: delta must be positive");
    const double psi00 = std::log(1.0 + 2.0 / d) / (2.0 * (1.0 + d));
    return psi00 * n_points * n_points - n_points / (d * d);
}

/// tau-th moment of a configuration: sum over all ordered pairs, diagonal
/// included (each diagonal term contributes P_tau(1,1) = 1). Nonnegative.
inline double moment(const Configuration& config, Partition tau) {
    tau.validate();
    const std::size_t n = config.size();
    double acc = static_cast<double>(n); // diagonal
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const XiPair xi = xi_pair(config.points[i], config.points[j]);
            acc += 2.0 * jacobi_grass(tau, xi.plus, xi.minus);
        }
    return acc;
}

/// Residual of the energy-Fourier identity
///   E^g = g00^ N^2 - g(1,1) N + sum_{tau != 0} g^(tau) M_tau
/// for a finite Jacobi expansion g given by its coefficients.
inline double energy_fourier_identity_check(const Configuration& config,
                                            const std::vector<std::pair<Partition, double>>& coeffs) {
    const std::size_t n = config.size();
    if (n < 2) throw InvalidParameterError("energy_fourier_identity_check: need at least 2 points");
    auto g = [&](double x, double y) {
        double acc = 0.0;
        for (const auto& [tau, c] : coeffs) acc += c * jacobi_grass(tau, x, y);
        return acc;
    };
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const XiPair xi = xi_pair(config.points[i], config.points[j]);
            energy += 2.0 * g(xi.plus, xi.minus);
        }
    double rhs = 0.0;
    double g11 = 0.0;
    for (const auto& [tau, c] : coeffs) {
        g11 += c; // P_tau(1,1) = 1
        if (tau.degree() == 0)
            rhs += c * static_cast<double>(n) * static_cast<double>(n);
        else
            rhs += c * moment(config, tau);
    }
    rhs -= g11 * static_cast<double>(n);
    return std::abs(energy - rhs) / std::max(1.0, std::abs(energy));
}

struct CoefficientEntry {
    Partition tau;
    double value;
};

/// Fourier-Jacobi coefficients of f_{s,delta}(x,y) = (1-xy+delta)^{-s}
/// (or -log(1-xy+delta) for s = 0) for all |tau| <= k_max. Every tau != (0,0)
/// coefficient must be nonnegative; values below -10 * abs_tol fail.
inline std::vector<CoefficientEntry> coefficient_nonnegativity_report(double s, double delta, int k_max,
                                                                      const QuadratureSpec& spec) {
    if (s < 0.0 || delta <= 0.0) throw InvalidParameterError("coefficient_nonnegativity_report: bad s or delta");
    if (k_max < 0 || k_max > 12) throw InvalidParameterError("coefficient_nonnegativity_report: k_max must be in [0, 12]");
    auto f = [&](double x, double y) {
        const double v = 1.0 - x * y + delta;
        return s > 0.0 ? std::pow(v, -s) : -std::log(v);
    };
    std::vector<CoefficientEntry> out;
    for (const Partition& tau : partitions_up_to(k_max)) {
        const double c = fourier_jacobi_coefficient(f, tau, spec);
        if (tau.degree() > 0 && c < -10.0 * spec.abs_tol)
            throw QuadratureFailureError("coefficient_nonnegativity_report: negative coefficient " +
                                         std::to_string(c) + " at tau = (" + std::to_string(tau.tau1) +
                                         "," + std::to_string(tau.tau2) + ")");
        out.push_back({tau, c});
    }
    return out;
}

} // namespace gr24
