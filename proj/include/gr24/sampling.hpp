#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gr24/energy.hpp"
#include "gr24/errors.hpp"
#include "gr24/frame.hpp"
#include "gr24/harmonic_kernel.hpp"
#include "gr24/parallel.hpp"
#include "gr24/rng.hpp"
#include "gr24/special_functions.hpp"

namespace gr24 {

struct DppOptions {
    long max_rejections_per_point = 1'000'000;
    double degeneracy_floor = 1e-10;
    int max_restarts = 64;
};

/// Uniform point of Gr(2,4): the span of a 4x2 matrix of iid standard
/// Gaussians is invariant under O(4), hence sigma-distributed.
inline Frame sample_uniform(RandomStream& rng) {
    for (;;) {
        Mat42 raw;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 2; ++j) raw(i, j) = rng.next_gaussian();
        try {
            return Frame::orthonormalize(raw);
        } catch (const RankDeficientError&) {
            // probability-zero event; redraw
        }
    }
}

/// Harmonic-ensemble DPP draw of N = d_k points by sequential kernel
/// thinning. The conditional kernel K_i = K - sum_{j<i} g_j g_j is kept via
/// the Cholesky rows L[j][l] = g_l(x_j); a proposal x ~ sigma is accepted
/// with probability K_i(x,x)/N, which is an exact envelope since
/// K(x,x) = N everywhere.
inline Configuration sample_harmonic_dpp(int k, RandomStream& rng, const DppOptions& opts = {}) {
    if (k < 1) throw InvalidParameterError("sample_harmonic_dpp: k must be >= 1");
    if (opts.max_rejections_per_point <= 0 || opts.degeneracy_floor <= 0.0)
        throw InvalidParameterError("sample_harmonic_dpp: options must be positive");
    const long n = kernel_dim(k);
    const double nd = static_cast<double>(n);

    for (int attempt = 0; attempt < opts.max_restarts; ++attempt) {
        std::vector<Frame> pts;
        pts.reserve(n);
        std::vector<std::vector<double>> chol; // row i: g_0..g_{i-1}(x_i), then sqrt(K_i(x_i,x_i))
        std::vector<double> g;                 // workspace
        bool degenerate = false;

        for (long i = 0; i < n && !degenerate; ++i) {
            long tries = 0;
            for (;;) {
                if (++tries > opts.max_rejections_per_point)
                    throw RejectionBudgetError("sample_harmonic_dpp: rejection budget exhausted at point " +
                                               std::to_string(i));
                Frame x = sample_uniform(rng);
                // forward substitution: g_l(x) = (K(x,x_l) - sum_{m<l} L[l][m] g_m(x)) / L[l][l]
                g.assign(i, 0.0);
                double sumsq = 0.0;
                for (long l = 0; l < i; ++l) {
                    const XiPair xi = xi_pair(x, pts[l]);
                    double v = kernel_eval(k, xi.plus, xi.minus);
                    for (long m = 0; m < l; ++m) v -= chol[l][m] * g[m];
                    g[l] = v / chol[l][l];
                    sumsq += g[l] * g[l];
                }
                const double cond = nd - sumsq; // K_i(x,x)
                if (cond > 0.0 && rng.next_double() * nd < cond) {
                    if (cond < opts.degeneracy_floor * nd) {
                        degenerate = true; // restart the whole draw
                        break;
                    }
                    g.push_back(std::sqrt(cond));
                    chol.push_back(g);
                    pts.push_back(x);
                    break;
                }
            }
        }
        if (!degenerate) return Configuration{std::move(pts)};
    }
    throw RejectionBudgetError("sample_harmonic_dpp: too many degenerate restarts");
}

struct McEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    long replications = 0;
    long infinite_count = 0;
};

/// Mean and standard error of the energy over M iid replications of a
/// sampler. Each replication runs on its own substream, so the result does
/// not depend on scheduling. Infinite energies are excluded from the mean
/// and counted separately.
template <class Sampler>
McEstimate mc_expected_energy(Sampler&& sampler, EnergyKind kind, long m, RandomStream& rng) {
    if (m < 2) throw InvalidParameterError("mc_expected_energy: need M >= 2");
    std::vector<double> energies(m);
    parallel_for(m, [&](long i) {
        RandomStream sub = rng.substream(static_cast<std::uint64_t>(i));
        energies[i] = discrete_energy(sampler(sub), kind);
    });
    McEstimate est;
    est.replications = m;
    double sum = 0.0;
    long finite = 0;
    for (double e : energies) {
        if (std::isfinite(e)) {
            sum += e;
            ++finite;
        } else {
            ++est.infinite_count;
        }
    }
    if (finite == 0) throw SingularConfigurationError("mc_expected_energy: all replications infinite");
    est.mean = sum / finite;
    double ss = 0.0;
    for (double e : energies)
        if (std::isfinite(e)) ss += (e - est.mean) * (e - est.mean);
    est.standard_error = finite > 1 ? std::sqrt(ss / (finite - 1.0) / finite) : 0.0;
    return est;
}

struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 0.0;
    long dof = 0;
    long samples = 0;
};

/// Chi-square goodness of fit of (xi+, xi-) samples against the
/// triangle-uniform law A 20x20 equal-measure grid of the triangle
/// {0 <= xi- <= 1, |xi+| <= xi-} is used: v = xi-^2 and
/// u = (xi+/xi- + 1)/2 are iid uniform on [0,1]^2 under the null.
inline ChiSquareResult triangle_uniform_gof(const std::vector<XiPair>& samples) {
    constexpr int grid = 20;
    const long m = static_cast<long>(samples.size());
    if (m < grid * grid) throw InvalidParameterError("triangle_uniform_gof: too few samples");
    std::vector<long> counts(grid * grid, 0);
    for (const XiPair& xi : samples) {
        const double v = std::clamp(xi.minus * xi.minus, 0.0, 1.0);
        const double denom = xi.minus > 1e-300 ? xi.minus : 1e-300;
        const double u = std::clamp(0.5 * (xi.plus / denom + 1.0), 0.0, 1.0);
        int iu = std::min(grid - 1, static_cast<int>(u * grid));
        int iv = std::min(grid - 1, static_cast<int>(v * grid));
        ++counts[iu * grid + iv];
    }
    const double expected = static_cast<double>(m) / (grid * grid);
    double stat = 0.0;
    for (long c : counts) {
        const double d = c - expected;
        stat += d * d / expected;
    }
    ChiSquareResult res;
    res.statistic = stat;
    res.dof = grid * grid - 1;
    res.samples = m;
    res.p_value = gamma_q(0.5 * res.dof, 0.5 * stat);
    return res;
}

/// GOF statistic for M uniform pairs: empirical (xi+, xi-) of independent
/// uniform planes against the triangle-uniform density.
inline ChiSquareResult pair_angle_histogram(long m, RandomStream& rng) {
    if (m < 10'000) throw InvalidParameterError("pair_angle_histogram: need M >= 10^4");
    std::vector<XiPair> xs(m);
    parallel_for(m, [&](long i) {
        RandomStream sub = rng.substream(static_cast<std::uint64_t>(i));
        Frame a = sample_uniform(sub);
        Frame b = sample_uniform(sub);
        xs[i] = xi_pair(a, b);
    });
    return triangle_uniform_gof(xs);
}

} // namespace gr24
