#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gr24/errors.hpp"
#include "gr24/frame.hpp"
#include "gr24/quadrature.hpp"
#include "gr24/special_functions.hpp"

namespace gr24 {

/// Index of a Laplace-Beltrami eigenspace of Gr(2,4): tau1 >= tau2 >= 0.
struct Partition {
    int tau1;
    int tau2;

    int degree() const { return tau1 + tau2; }
    void validate() const {
        if (tau2 < 0 || tau1 < tau2) throw InvalidParameterError("Partition: need tau1 >= tau2 >= 0");
    }
    bool operator==(const Partition& o) const { return tau1 == o.tau1 && tau2 == o.tau2; }
};

/// dim H_tau = (2 - delta_{0,tau2}) (2(tau1+tau2)+1) (2(tau1-tau2)+1)
inline long partition_dim(Partition tau) {
    tau.validate();
    const long mult = (tau.tau2 == 0) ? 1 : 2;
    return mult * (2L * (tau.tau1 + tau.tau2) + 1) * (2L * (tau.tau1 - tau.tau2) + 1);
}

/// All partitions of degree <= k, degree-major, tau1 descending within a degree.
inline std::vector<Partition> partitions_up_to(int k) {
    if (k < 0) throw InvalidParameterError("partitions_up_to: negative degree");
    std::vector<Partition> out;
    for (int deg = 0; deg <= k; ++deg)
        for (int t1 = deg; 2 * t1 >= deg; --t1) out.push_back({t1, deg - t1});
    return out;
}

/// dim H_k = (k+1)^2 (k^2+2k+2) / 2
inline long kernel_dim(int k) {
    if (k < 1) throw InvalidParameterError("kernel_dim: k must be >= 1");
    const long kp1 = k + 1;
    return kp1 * kp1 * (static_cast<long>(k) * k + 2L * k + 2) / 2;
}

/// Generalized Jacobi polynomial in the xi variables: a symmetrized product
/// of Legendre polynomials of degrees tau1+tau2 and tau1-tau2. P_tau(1,1)=1.
inline double jacobi_grass(Partition tau, double xi_plus, double xi_minus) {
    tau.validate();
    const int a = tau.tau1 + tau.tau2, b = tau.tau1 - tau.tau2;
    return 0.5 * (legendre(a, xi_plus) * legendre(b, xi_minus) + legendre(a, xi_minus) * legendre(b, xi_plus));
}

inline double jacobi_grass(Partition tau, const XiPair& xi) {
    return jacobi_grass(tau, xi.plus, xi.minus);
}

/// Closed-form squared L2 norm of P_tau over [-1,1]^2 (= 4 / d_tau).
inline double jacobi_norm_sq(Partition tau) { return 4.0 / static_cast<double>(partition_dim(tau)); }

/// Reproducing kernel of the degree-<=k eigenspace sum, evaluated through
/// Gegenbauer recurrences in O(k):
///   K_k = C_k^{3/2}(x) C_k^{3/2}(y) + C_{k-1}^{3/2}(x) C_{k-1}^{3/2}(y).
inline double kernel_eval(int k, double x, double y) {
    if (k < 1) throw InvalidParameterError("kernel_eval: k must be >= 1");
    double ckx, ckm1x, cky, ckm1y;
    gegenbauer32_pair(k, x, ckx, ckm1x);
    gegenbauer32_pair(k, y, cky, ckm1y);
    return ckx * cky + ckm1x * ckm1y;
}

/// Partition-sum oracle for kernel_eval: sum of d_tau P_tau over |tau| <= k.
/// O(k^2); kept as the independent test route.
inline double kernel_eval_brute(int k, double x, double y) {
    if (k < 1) throw InvalidParameterError("kernel_eval_brute: k must be >= 1");
    double acc = 0.0;
    for (const Partition& tau : partitions_up_to(k))
        acc += static_cast<double>(partition_dim(tau)) * jacobi_grass(tau, x, y);
    return acc;
}

/// Fourier-Jacobi coefficient <g, P_tau> / |P_tau|^2 over [-1,1]^2.
/// A corner singularity of g (typically (1,1)) may be declared by the caller.
template <class G>
double fourier_jacobi_coefficient(G&& g, Partition tau, const QuadratureSpec& spec,
                                  std::optional<std::pair<double, double>> singular_corner = std::nullopt) {
    tau.validate();
    auto integrand = [&](double x, double y) { return g(x, y) * jacobi_grass(tau, x, y); };
    IntegralResult num = integrate_2d(integrand, Rect{-1.0, 1.0, -1.0, 1.0}, spec, singular_corner);
    return num.value / jacobi_norm_sq(tau);
}

} // namespace gr24
