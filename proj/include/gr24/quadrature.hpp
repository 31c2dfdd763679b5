#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <algorithm>
#include <map>
#include <queue>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gr24/errors.hpp"
#include "gr24/special_functions.hpp"

namespace gr24 {

/// Accuracy/refinement policy for the adaptive integrators.
struct QuadratureSpec {
    int base_rule_order = 24; ///< Gauss-Legendre points per axis per cell
    int max_depth = 40;
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;

    void validate() const {
        if (base_rule_order < 4 || base_rule_order > 256)
            throw InvalidParameterError("QuadratureSpec: order must be in [4, 256]");
        if (max_depth < 1) throw InvalidParameterError("QuadratureSpec: max_depth must be >= 1");
        if (abs_tol <= 0.0 || rel_tol <= 0.0) throw InvalidParameterError("QuadratureSpec: tolerances must be positive");
    }
};

struct IntegralResult {
    double value = 0.0;
    double err_estimate = 0.0;
    long cells_used = 0;
};

struct Rect {
    double x0, x1, y0, y1;
    double area() const { return (x1 - x0) * (y1 - y0); }
};

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
/// Results are cached; safe for concurrent callers.
inline const GaussRule& gauss_legendre_nodes(int n) {
    if (n < 1 || n > 256) throw InvalidParameterError("gauss_legendre_nodes: n must be in [1, 256]");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton in extended precision so |P_n(node)| stays below 1e-14
        long double z = std::cos(3.141592653589793238462643383279503L * (i + 0.75L) / (n + 0.5L));
        long double pp = 1.0L;
        for (int it2 = 0; it2 < 100; ++it2) {
            long double p0 = 1.0L, p1 = z;
            for (int m = 1; m < n; ++m) {
                long double p2 = ((2 * m + 1) * z * p1 - m * p0) / (m + 1);
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                z = 0.0L;
                pp = 1.0L;
                break;
            }
            pp = n * (z * p1 - p0) / (z * z - 1.0L);
            long double dz = p1 / pp;
            z -= dz;
            if (std::abs(static_cast<double>(dz)) < 1e-18) break;
        }
        if (n % 2 == 1 && i == half - 1) z = 0.0L; // center node is exact
        rule.nodes[i] = static_cast<double>(-z);
        rule.nodes[n - 1 - i] = static_cast<double>(z);
        const double w = (n == 1) ? 2.0 : static_cast<double>(2.0L / ((1.0L - z * z) * pp * pp));
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    auto [pos, inserted] = cache.emplace(n, std::move(rule));
    (void)inserted;
    return pos->second;
}

namespace detail {

inline double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return v.empty() ? 0.0 : pairwise_sum(v, 0, v.size());
}

template <class F>
double tensor_cell(F& f, const Rect& c, const GaussRule& rule) {
    const double hx = 0.5 * (c.x1 - c.x0), cx = 0.5 * (c.x0 + c.x1);
    const double hy = 0.5 * (c.y1 - c.y0), cy = 0.5 * (c.y0 + c.y1);
    const int n = static_cast<int>(rule.nodes.size());
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = cx + hx * rule.nodes[i];
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += rule.weights[j] * f(x, cy + hy * rule.nodes[j]);
        acc += rule.weights[i] * row;
    }
    return acc * hx * hy;
}

} // namespace detail

namespace detail {

struct Cell2d {
    Rect r;
    int depth;
    double value;
    double err;
    bool corner;
    long seq;
};

struct Cell2dWorse {
    bool operator()(const Cell2d& a, const Cell2d& b) const {
        if (a.err != b.err) return a.err < b.err; // max-heap on error
        return a.seq > b.seq;                     // deterministic tie-break
    }
};

} // namespace detail

/// Adaptive 2D integration on a rectangle: worst-cell-first (global-adaptive)
/// quadtree subdivision, cell error from comparing the base rule with the
/// half-order rule. Cells adjacent to `singular_corner` (a vertex where f may
/// blow up but stay absolutely integrable) are refined geometrically to
/// max_depth up front, since the embedded estimate is unreliable there.
template <class F>
IntegralResult integrate_2d(F&& f, const Rect& rect, const QuadratureSpec& spec,
                            std::optional<std::pair<double, double>> singular_corner = std::nullopt) {
    spec.validate();
    const GaussRule& hi = gauss_legendre_nodes(spec.base_rule_order);
    const GaussRule& lo = gauss_legendre_nodes(std::max(2, spec.base_rule_order / 2));
    if (rect.area() <= 0.0) throw InvalidParameterError("integrate_2d: empty rectangle");

    const bool has_corner = singular_corner.has_value();
    const double cxs = has_corner ? singular_corner->first : 0.0;
    const double cys = has_corner ? singular_corner->second : 0.0;

    long seq = 0;
    auto make_cell = [&](const Rect& c, int depth) {
        const double ihi = detail::tensor_cell(f, c, hi);
        const double ilo = detail::tensor_cell(f, c, lo);
        if (!std::isfinite(ihi) || !std::isfinite(ilo))
            throw QuadratureFailureError("integrate_2d: non-finite integrand value");
        const bool corner = has_corner && (c.x0 == cxs || c.x1 == cxs) && (c.y0 == cys || c.y1 == cys);
        double err = std::abs(ihi - ilo);
        // the embedded estimate cannot see mass hiding at the flagged corner;
        // charge the cell's own magnitude once it is as deep as allowed
        if (corner && depth >= spec.max_depth) err += std::abs(ihi);
        return detail::Cell2d{c, depth, ihi, err, corner, seq++};
    };

    std::vector<detail::Cell2d> finals; // cells that cannot be refined further
    std::priority_queue<detail::Cell2d, std::vector<detail::Cell2d>, detail::Cell2dWorse> heap;
    double value_sum = 0.0, err_sum = 0.0;

    auto place = [&](detail::Cell2d&& cell) {
        value_sum += cell.value;
        err_sum += cell.err;
        if (cell.depth >= spec.max_depth)
            finals.push_back(std::move(cell));
        else
            heap.push(std::move(cell));
    };
    auto split = [&](const detail::Cell2d& cell) {
        const double mx = 0.5 * (cell.r.x0 + cell.r.x1), my = 0.5 * (cell.r.y0 + cell.r.y1);
        value_sum -= cell.value;
        err_sum -= cell.err;
        place(make_cell({cell.r.x0, mx, cell.r.y0, my}, cell.depth + 1));
        place(make_cell({mx, cell.r.x1, cell.r.y0, my}, cell.depth + 1));
        place(make_cell({cell.r.x0, mx, my, cell.r.y1}, cell.depth + 1));
        place(make_cell({mx, cell.r.x1, my, cell.r.y1}, cell.depth + 1));
    };

    // phase 1: force the geometric chain toward the flagged corner
    {
        detail::Cell2d root = make_cell(rect, 0);
        if (has_corner && root.depth < spec.max_depth) {
            detail::Cell2d current = root;
            for (;;) {
                const double mx = 0.5 * (current.r.x0 + current.r.x1);
                const double my = 0.5 * (current.r.y0 + current.r.y1);
                detail::Cell2d next{{0, 0, 0, 0}, 0, 0, 0, false, 0};
                bool found = false;
                for (const Rect& c : {Rect{current.r.x0, mx, current.r.y0, my},
                                      Rect{mx, current.r.x1, current.r.y0, my},
                                      Rect{current.r.x0, mx, my, current.r.y1},
                                      Rect{mx, current.r.x1, my, current.r.y1}}) {
                    detail::Cell2d child = make_cell(c, current.depth + 1);
                    if (child.corner && !found) {
                        next = child;
                        found = true;
                    } else {
                        place(std::move(child));
                    }
                }
                if (!found) break; // cannot happen: one child always keeps the corner
                if (next.depth >= spec.max_depth) {
                    place(std::move(next));
                    break;
                }
                current = next;
            }
        } else {
            place(std::move(root));
        }
    }

    // phase 2: worst-cell-first refinement until the budget is met
    constexpr long cell_budget = 400'000;
    long evaluated = seq;
    for (;;) {
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(value_sum));
        if (err_sum <= tol || heap.empty()) break;
        if (evaluated > cell_budget) break;
        detail::Cell2d worst = heap.top();
        heap.pop();
        if (worst.depth >= spec.max_depth) { // nothing left to gain
            finals.push_back(std::move(worst));
            continue;
        }
        split(worst);
        evaluated = seq;
    }

    // deterministic final summation in creation order
    while (!heap.empty()) {
        finals.push_back(heap.top());
        heap.pop();
    }
    std::sort(finals.begin(), finals.end(),
              [](const detail::Cell2d& a, const detail::Cell2d& b) { return a.seq < b.seq; });
    std::vector<double> values, errors;
    values.reserve(finals.size());
    errors.reserve(finals.size());
    for (const auto& c : finals) {
        values.push_back(c.value);
        errors.push_back(c.err);
    }

    IntegralResult res;
    res.value = detail::pairwise_sum(values);
    res.err_estimate = detail::pairwise_sum(errors);
    res.cells_used = static_cast<long>(finals.size());
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(res.value));
    if (res.err_estimate > 10.0 * tol)
        throw QuadratureFailureError("integrate_2d: error estimate " + std::to_string(res.err_estimate) +
                                     " exceeds 10x tolerance " + std::to_string(tol));
    return res;
}

/// Adaptive 1D integration on [a, b]: worst-segment-first bisection with the
/// same embedded-rule error estimate as integrate_2d.
template <class F>
IntegralResult integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec,
                            std::optional<double> singular_end = std::nullopt) {
    spec.validate();
    const GaussRule& hi = gauss_legendre_nodes(spec.base_rule_order);
    const GaussRule& lo = gauss_legendre_nodes(std::max(2, spec.base_rule_order / 2));
    if (b - a <= 0.0) throw InvalidParameterError("integrate_1d: empty interval");

    struct Seg {
        double x0, x1, value, err;
        int depth;
        long seq;
    };
    struct Worse {
        bool operator()(const Seg& s, const Seg& t) const {
            if (s.err != t.err) return s.err < t.err;
            return s.seq > t.seq;
        }
    };
    auto rule_on = [&](double x0, double x1, const GaussRule& r) {
        const double h = 0.5 * (x1 - x0), c = 0.5 * (x0 + x1);
        double acc = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * f(c + h * r.nodes[i]);
        return acc * h;
    };
    long seq = 0;
    auto make_seg = [&](double x0, double x1, int depth) {
        const double ihi = rule_on(x0, x1, hi);
        const double ilo = rule_on(x0, x1, lo);
        if (!std::isfinite(ihi) || !std::isfinite(ilo))
            throw QuadratureFailureError("integrate_1d: non-finite integrand value");
        double err = std::abs(ihi - ilo);
        const bool end_cell = singular_end && (x0 == *singular_end || x1 == *singular_end);
        if (end_cell && depth >= spec.max_depth) err += std::abs(ihi);
        return Seg{x0, x1, ihi, err, depth, seq++};
    };

    std::priority_queue<Seg, std::vector<Seg>, Worse> heap;
    std::vector<Seg> finals;
    double value_sum = 0.0, err_sum = 0.0;
    auto place = [&](Seg&& s) {
        value_sum += s.value;
        err_sum += s.err;
        if (s.depth >= spec.max_depth)
            finals.push_back(std::move(s));
        else
            heap.push(std::move(s));
    };
    place(make_seg(a, b, 0));

    constexpr long seg_budget = 200'000;
    while (seq < seg_budget) {
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(value_sum));
        if (err_sum <= tol || heap.empty()) break;
        Seg worst = heap.top();
        heap.pop();
        if (worst.depth >= spec.max_depth) {
            finals.push_back(std::move(worst));
            continue;
        }
        value_sum -= worst.value;
        err_sum -= worst.err;
        const double mid = 0.5 * (worst.x0 + worst.x1);
        place(make_seg(worst.x0, mid, worst.depth + 1));
        place(make_seg(mid, worst.x1, worst.depth + 1));
    }
    while (!heap.empty()) {
        finals.push_back(heap.top());
        heap.pop();
    }
    std::sort(finals.begin(), finals.end(), [](const Seg& s, const Seg& t) { return s.seq < t.seq; });
    std::vector<double> values, errors;
    for (const auto& s : finals) {
        values.push_back(s.value);
        errors.push_back(s.err);
    }
    IntegralResult res{detail::pairwise_sum(values), detail::pairwise_sum(errors),
                       static_cast<long>(finals.size())};
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(res.value));
    if (res.err_estimate > 10.0 * tol)
        throw QuadratureFailureError("integrate_1d: error estimate above 10x tolerance");
    return res;
}

namespace detail {

/// Envelope of J1(t)^2/t: t/4 below the first crossing, 2/(pi t^2) beyond.
inline double j1sq_envelope(double t) { return std::min(0.25 * t, 2.0 / (pi_const * t * t)); }

/// bound for int_0^inf J1(t)^2/t dt pieces: int_0^1 t/4 + int_1^inf 2/(pi t^2)
inline double j1sq_envelope_full_mass() { return 0.125 + 2.0 / pi_const; }

} // namespace detail

/// Integral of f over the quadrant [0,inf)^2 for Bessel-type integrands
/// bounded by J1(x)^2 J1(y)^2 / (x y (x^2+y^2)^tail_exponent). The quadrant
/// is split into the inner box [0,split]^2, two strips, and a far field
/// integrated in pi-sized blocks until the analytic tail bound (from
/// |J1(x)| <= min(1, sqrt(2/(pi x)))) drops below the absolute tolerance.
template <class F>
IntegralResult integrate_semi_infinite_2d(F&& f, double split, const QuadratureSpec& spec,
                                          double tail_exponent) {
    spec.validate();
    if (split <= 0.0) throw InvalidParameterError("integrate_semi_infinite_2d: split must be positive");
    if (tail_exponent <= 0.0) throw InvalidParameterError("integrate_semi_infinite_2d: tail exponent must be positive");
    const double p = tail_exponent;

    // remaining mass outside [0,T]^2 (two symmetric half-strips)
    auto tail_bound = [&](double T) {
        const double mass = detail::j1sq_envelope_full_mass();
        return 2.0 * mass * (2.0 / pi_const) * std::pow(T, -1.0 - 2.0 * p) / (1.0 + 2.0 * p);
    };

    IntegralResult total;
    auto absorb = [&total](const IntegralResult& r) {
        total.value += r.value;
        total.err_estimate += r.err_estimate;
        total.cells_used += r.cells_used;
    };

    // inner box: possible corner concentration at the origin
    absorb(integrate_2d(f, Rect{0.0, split, 0.0, split}, spec, std::make_pair(0.0, 0.0)));

    const double block = pi_const; // approximate J1 half-period
    double T = split;
    for (int ring = 0; ring < 4096; ++ring) {
        if (tail_bound(T) <= spec.abs_tol) break;
        const double Tn = T + block;
        // L-shaped ring [0,Tn]^2 \ [0,T]^2
        absorb(integrate_2d(f, Rect{T, Tn, 0.0, Tn}, spec));
        absorb(integrate_2d(f, Rect{0.0, T, T, Tn}, spec));
        T = Tn;
    }
    const double rem = tail_bound(T);
    if (rem > spec.abs_tol)
        throw QuadratureFailureError("integrate_semi_infinite_2d: tail bound stalled at " + std::to_string(rem));
    total.err_estimate += rem;
    return total;
}

} // namespace gr24
