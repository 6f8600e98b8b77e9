#pragma once

#include <cstdint>
#include <string>

#include "calign/laplacian.hpp"
#include "calign/rng.hpp"

namespace calign {

/// Random complex symmetric weight matrix with nonnegative Re/Im parts and
/// strictly positive column sums (entries U[0,1); diagonal optionally zero).
CMatrix random_symmetric_weights(Rng& rng, std::size_t n, bool zero_diagonal);

/// Random coupled graph over two synthetic point clouds: kNN graph, heat
/// weights, random mixing parameters.
CoupledGraph random_coupled_graph(Rng& rng, std::size_t n);

struct VerifyOptions {
    std::uint64_t seed = 7;
    std::size_t n = 6;      // instance size for the identity checks
    std::size_t trials = 100;
};

struct VerifyReport {
    std::string text;            // the plain-text report
    bool all_pass = false;
    double trace_constant = 0.0;
};

/// Run every identity check and render the plain-text report: per-identity
/// pass/fail, the measured trace-formula constant, and the worst residuals.
VerifyReport run_verification(const VerifyOptions& opts);

} // namespace calign
