#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace calign {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition (bad shape, bad parameter).
struct InvalidArgument : Error {
    using Error::Error;
};

// Malformed input data (CSV parse failures and the like).
struct DataError : Error {
    using Error::Error;
};

// A numeric procedure failed: non-convergence, normality gate, degeneracy.
struct NumericError : Error {
    using Error::Error;
};

// A vertex with zero (weighted) degree; the graph must be rebuilt with a
// larger epsilon or k before Laplacian construction can proceed.
struct IsolatedVertex : NumericError {
    std::size_t vertex;
    explicit IsolatedVertex(std::size_t j)
        : NumericError("isolated vertex " + std::to_string(j) +
                       ": zero degree, rebuild the graph with a larger epsilon or k"),
          vertex(j) {}
};

// An identity the library re-derives at runtime failed to hold. Carries both
// sides so the caller can inspect the discrepancy.
struct IdentityFailure : NumericError {
    double lhs_re, lhs_im, rhs_re, rhs_im;
    IdentityFailure(const std::string& what, double lre, double lim, double rre, double rim)
        : NumericError(what), lhs_re(lre), lhs_im(lim), rhs_re(rre), rhs_im(rim) {}
};

} // namespace calign
