#pragma once

#include "multi_index.hpp"

#include <stdexcept>
#include <string>

namespace symx {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The linear system for one generating column has no solution within
/// tolerance; the requested rank is too small for this tensor.
struct InconsistentSystem : Error {
    MultiIndex alpha;
    double residual;
    InconsistentSystem(MultiIndex a, double res)
        : Error("inconsistent generating-column system at " + mi_to_string(a) +
                " (residual " + std::to_string(res) + ")"),
          alpha(std::move(a)),
          residual(res) {}
};

/// The row-degree budget d - max(|alpha|, deg B0) is negative: the requested
/// rank needs monomials too large for the tensor order.
struct EmptyRowSet : Error {
    using Error::Error;
};

/// Eigenvalues of the combination matrix stayed clustered over all retries.
struct DefectiveSpectrum : Error {
    using Error::Error;
};

/// Newton sampling of the variety failed to converge.
struct SampleFailure : Error {
    using Error::Error;
};

/// The parameter solve exhausted its restarts without reaching tolerance.
struct SolveFailure : Error {
    using Error::Error;
};

/// The weight least-squares matrix is rank deficient (coalesced points).
struct RankDeficientWeights : Error {
    using Error::Error;
};

/// Every rank in [rank_min, rank_max] failed; carries the attempt trace.
struct NoDecomposition : Error {
    std::string trace;
    NoDecomposition(const std::string& msg, std::string tr)
        : Error(msg), trace(std::move(tr)) {}
};

/// Malformed input files or JSON (CLI exit code 2).
struct IoError : Error {
    using Error::Error;
};

}  // namespace symx
