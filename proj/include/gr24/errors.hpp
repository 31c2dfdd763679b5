#pragma once

#include <stdexcept>
#include <string>

namespace gr24 {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input matrix does not have full column rank.
struct RankDeficientError : Error {
    using Error::Error;
};

/// A parameter is outside its admissible set (lambda <= 0, n <= 1-s/2, ...).
struct InvalidParameterError : Error {
    using Error::Error;
};

/// Requested value is outside the supported range (e.g. continuous energy at s >= 4).
struct OutOfRangeError : Error {
    using Error::Error;
};

/// Hypergeometric series at unit argument with gamma <= 0.
struct DivergentSeriesError : Error {
    using Error::Error;
};

/// Series tail bound cannot reach the requested tolerance within the term cap.
struct SlowConvergenceError : Error {
    using Error::Error;
};

/// Adaptive integration exhausted its refinement budget above tolerance.
struct QuadratureFailureError : Error {
    using Error::Error;
};

/// Pair of points too close for a kernel/gradient evaluation.
struct SingularConfigurationError : Error {
    using Error::Error;
};

/// DPP sampler exceeded its per-point rejection budget.
struct RejectionBudgetError : Error {
    using Error::Error;
};

/// Malformed or out-of-tolerance input file.
struct IoError : Error {
    using Error::Error;
};

} // namespace gr24
