#pragma once

#include <cstdint>
#include <vector>

#include "calign/cmatrix.hpp"
#include "calign/eig.hpp"
#include "calign/graph.hpp"
#include "calign/rng.hpp"

namespace calign {

/// Two real weight matrices blended into one complex coupled weight matrix
///   W = (alpha + i beta) H,  H = eta W1 + mu W2,
/// with eta+mu = 1, alpha+beta = 1, all positive. theta = arctan(beta/alpha).
struct CoupledGraph {
    WeightMatrix w1, w2;
    double eta = 0.5, mu = 0.5;
    double alpha = 0.5, beta = 0.5;
    RealMatrix h;  // eta*W1 + mu*W2
    CMatrix w;     // (alpha + i beta) * h
    CMatrix d;     // diagonal of column sums of w
    double theta = 0.0;

    std::size_t size() const { return h.rows(); }
};

CoupledGraph coupled_weight(const WeightMatrix& w1, const WeightMatrix& w2, double eta,
                            double mu, double alpha, double beta);

/// Generalized graph Laplacian L = D - W with its phase-rotated companion
/// L1 = e^{-i theta} L.
struct GenLaplacian {
    CMatrix w;
    CMatrix d;
    CMatrix l;
    CMatrix l1;
    double theta = 0.0;

    std::size_t size() const { return l.rows(); }

    /// From a complex symmetric weight matrix (the verification path);
    /// theta is taken as the phase of tr D.
    static GenLaplacian from_weights(const CMatrix& w_sym);

    /// From explicit operator and degree (synthetic probe instances; no
    /// consistency between w = d - l and column sums is enforced).
    static GenLaplacian synthetic(const CMatrix& l, const CMatrix& d, double theta);
};

GenLaplacian build_laplacian(const CoupledGraph& g);

/// Ordered generalized eigenpairs of (L, D) with the (De, e) = e^{i theta}
/// normalization imposed on the non-null part. Values ascend by modulus, so
/// the null space (lambda = 0) occupies the leading null_dim columns; the
/// subspace N_m is spanned by the first m columns after it.
struct Spectrum {
    std::vector<cplx> values;
    CMatrix vectors;
    std::size_t xi = 0;       // count of nonzero eigenvalues
    std::size_t null_dim = 0; // count of zero eigenvalues
    double theta = 0.0;

    std::size_t size() const { return values.size(); }

    /// First m generalized eigenvectors with nonzero eigenvalue (a basis of
    /// the subspace N_m they span). Requires 1 <= m <= xi.
    CMatrix subspace_basis(std::size_t m) const;

    /// Their eigenvalues, in the same order.
    std::vector<cplx> nonnull_values() const;
};

Spectrum generalized_spectrum(const GenLaplacian& l);

/// The Dirichlet identity: computes tr{A* L A} and the brute-force pair sum
/// (1/2) sum_{s,j} ||a_s - a_j||^2 W_sj, asserts they agree to 1e-9 relative,
/// and returns the trace form. A disagreement throws IdentityFailure carrying
/// both sides.
cplx dirichlet_energy(const CMatrix& a, const GenLaplacian& l);

/// Both sides without the assertion (diagnostics / verification report).
struct DirichletSides {
    cplx trace_form;
    cplx pair_sum;
};
DirichletSides dirichlet_sides(const CMatrix& a, const GenLaplacian& l);

/// Empirical constant c in tr{A* L A} = c e^{i theta} tr{D^{-1} L} over random
/// square A with A* D A = e^{i theta} I, built as A = D^{-1/2} U e^{i theta/2}
/// with U unitary from a seeded draw. Requires the degree phases to be
/// uniformly theta (true for coupled graphs), otherwise the constraint cannot
/// be met and construction fails.
struct TraceProbeReport {
    double constant = 0.0;   // mean of Re(c) over trials
    double dispersion = 0.0; // max |c_trial - mean|
    double max_imag = 0.0;   // max |Im c_trial|
    std::size_t trials = 0;
};
TraceProbeReport trace_formula_probe(const GenLaplacian& l, std::size_t trials,
                                     std::uint64_t seed);

/// Check of the spectral minimum: over `trials` random feasible A (columns =
/// unitary mixes of the normalized eigenvectors), the objectives
/// sum_{j<=m} Re(L1 a_j, a_j) and the Im counterpart never undercut the sums
/// of the m smallest Re/IM-sorted eigenvalues, and the eigenbasis attains them.
struct SpectralMinReport {
    double bound_re = 0.0, bound_im = 0.0;
    double attained_re = 0.0, attained_im = 0.0;
    double min_random_re = 0.0, min_random_im = 0.0;
    std::size_t violations = 0; // draws undercutting a bound by more than 1e-8
    std::size_t trials = 0;
};
SpectralMinReport spectral_min_check(const GenLaplacian& l, std::size_t m, std::size_t trials,
                                     std::uint64_t seed);

/// The mapping indicator f(psi) = e^{i theta} sum_j (1 - W_jj / D_jj), with
/// D the column-sum degree of w. Throws on a zero degree.
cplx indicator(const CMatrix& w, double theta);

/// Classical real Laplacian eigenmaps of a single weight matrix (baseline
/// path; the coupled pipeline never uses it). Returns the n x m embedding on
/// the m smallest nonzero generalized eigenvectors of (D - W, D).
RealMatrix real_eigenmaps(const WeightMatrix& w, std::size_t m);

} // namespace calign
