#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "gr24/energy.hpp"
#include "gr24/errors.hpp"
#include "gr24/frame.hpp"
#include "gr24/rng.hpp"
#include "gr24/sampling.hpp"

namespace gr24 {

struct OptimizerConfig {
    int max_iters = 5000;
    double initial_step = 1e-2;
    double armijo_c = 1e-4;
    double shrink = 0.5;
    double grad_tol = 1e-8;
    int restarts = 4;

    void validate() const {
        if (max_iters < 1 || initial_step <= 0.0 || grad_tol <= 0.0 || restarts < 1 ||
            armijo_c <= 0.0 || armijo_c >= 1.0 || shrink <= 0.0 || shrink >= 1.0)
            throw InvalidParameterError("OptimizerConfig: parameters out of range");
    }
};

struct OptimizeResult {
    Configuration config;
    double energy = std::numeric_limits<double>::infinity();
    double grad_norm = std::numeric_limits<double>::infinity();
    int iters = 0;
    bool converged = false;
    std::vector<std::pair<int, double>> history; ///< (iteration, energy), non-increasing
};

/// Euclidean gradient of E = sum_{i != j} f(u_ij), u_ij = 2 - |X_i^T X_j|_F^2:
/// dE/dX_i = -4 sum_{j != i} f'(u_ij) X_j X_j^T X_i (the 2 from ordered pairs
/// times the 2 from du/dX).
inline std::vector<Mat42> energy_gradient(const Configuration& config, EnergyKind kind) {
    const std::size_t n = config.size();
    if (n < 2) throw InvalidParameterError("energy_gradient: need at least 2 points");
    std::vector<Mat42> grad(n, Mat42::Zero());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Mat2 m = config.points[i].matrix().transpose() * config.points[j].matrix();
            const double u = std::max(0.0, 2.0 - m.squaredNorm());
            if (u < 1e-14)
                throw SingularConfigurationError("energy_gradient: coincident pair");
            const double fp = kind.is_log ? -0.5 / u : -0.5 * kind.s * std::pow(u, -0.5 * kind.s - 1.0);
            // d u_ij / d X_i = -2 X_j X_j^T X_i = -2 X_j M^T ; symmetric in j
            grad[i] += (-4.0 * fp) * (config.points[j].matrix() * m.transpose());
            grad[j] += (-4.0 * fp) * (config.points[i].matrix() * m);
        }
    }
    return grad;
}

namespace detail {

/// The same pair energy as a function of raw (not necessarily orthonormal)
/// matrices; this is the function the Euclidean gradient differentiates.
inline double ambient_energy(const std::vector<Mat42>& mats, EnergyKind kind) {
    double sum = 0.0;
    for (std::size_t i = 0; i < mats.size(); ++i)
        for (std::size_t j = i + 1; j < mats.size(); ++j) {
            const double u = 2.0 - (mats[i].transpose() * mats[j]).squaredNorm();
            sum += 2.0 * (kind.is_log ? -0.5 * std::log(u) : std::pow(u, -0.5 * kind.s));
        }
    return sum;
}

inline double horizontal_norm_sq(const Configuration& c, const std::vector<Mat42>& grad,
                                 std::vector<Mat42>& horiz) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Mat42& x = c.points[i].matrix();
        horiz[i] = grad[i] - x * (x.transpose() * grad[i]);
        acc += horiz[i].squaredNorm();
    }
    return acc;
}

} // namespace detail

/// Projected gradient descent with Armijo backtracking and QR retraction,
/// starting from the given configuration.
inline OptimizeResult minimize_from(Configuration config, EnergyKind kind, const OptimizerConfig& opt) {
    opt.validate();
    OptimizeResult res;
    double energy = discrete_energy(config, kind);
    std::vector<Mat42> horiz(config.size());
    double step = opt.initial_step;
    res.history.emplace_back(0, energy);

    int iter = 0;
    for (; iter < opt.max_iters; ++iter) {
        std::vector<Mat42> grad;
        try {
            grad = energy_gradient(config, kind);
        } catch (const SingularConfigurationError&) {
            break; // degenerate; report best so far
        }
        const double gn2 = detail::horizontal_norm_sq(config, grad, horiz);
        res.grad_norm = std::sqrt(gn2);
        if (res.grad_norm < opt.grad_tol) {
            res.converged = true;
            break;
        }
        // backtracking line search; trial step warm-started from the last accept
        double t = step;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            Configuration trial;
            trial.points.reserve(config.size());
            bool feasible = true;
            for (std::size_t i = 0; i < config.size(); ++i) {
                Mat42 moved = config.points[i].matrix() - t * horiz[i];
                try {
                    trial.points.push_back(Frame::orthonormalize(moved));
                } catch (const RankDeficientError&) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                const double e_trial = discrete_energy(trial, kind);
                if (e_trial <= energy - opt.armijo_c * t * gn2) {
                    config = std::move(trial);
                    energy = e_trial;
                    accepted = true;
                    step = std::min(2.0 * t, 1.0);
                    break;
                }
            }
            t *= opt.shrink;
        }
        if (!accepted) break; // no descent direction at machine resolution
        res.history.emplace_back(iter + 1, energy);
    }
    res.config = std::move(config);
    res.energy = energy;
    res.iters = iter;
    if (res.grad_norm < opt.grad_tol) res.converged = true;
    return res;
}

/// Best-of-restarts minimization from uniform random initial configurations,
/// each restart on its own substream.
inline OptimizeResult minimize_energy(int n_points, EnergyKind kind, const OptimizerConfig& opt,
                                      RandomStream& rng) {
    opt.validate();
    if (n_points < 2) throw InvalidParameterError("minimize_energy: N must be >= 2");
    OptimizeResult best;
    for (int r = 0; r < opt.restarts; ++r) {
        RandomStream sub = rng.substream(static_cast<std::uint64_t>(r));
        Configuration init;
        init.points.reserve(n_points);
        for (int i = 0; i < n_points; ++i) init.points.push_back(sample_uniform(sub));
        OptimizeResult run = minimize_from(std::move(init), kind, opt);
        if (run.energy < best.energy) best = std::move(run);
    }
    return best;
}

/// Max relative error of the analytic gradient against central differences
/// with step 1e-6 entrywise, on the ambient energy.
inline double gradient_check(const Configuration& config, EnergyKind kind) {
    const double h = 1e-6;
    const std::vector<Mat42> grad = energy_gradient(config, kind);
    double scale = 0.0;
    for (const Mat42& g : grad) scale = std::max(scale, g.cwiseAbs().maxCoeff());
    if (scale == 0.0) scale = 1.0;
    std::vector<Mat42> mats;
    mats.reserve(config.size());
    for (const Frame& f : config.points) mats.push_back(f.matrix());
    double worst = 0.0;
    for (std::size_t i = 0; i < mats.size(); ++i) {
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 2; ++c) {
                const double saved = mats[i](r, c);
                mats[i](r, c) = saved + h;
                const double ep = detail::ambient_energy(mats, kind);
                mats[i](r, c) = saved - h;
                const double em = detail::ambient_energy(mats, kind);
                mats[i](r, c) = saved;
                const double fd = (ep - em) / (2.0 * h);
                worst = std::max(worst, std::abs(fd - grad[i](r, c)) / scale);
            }
        }
    }
    return worst;
}

} // namespace gr24
