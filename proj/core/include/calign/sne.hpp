#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "calign/dataset.hpp"
#include "calign/embed.hpp"

namespace calign {

/// Exponent convention for the similarity formulas. PaperNorm uses the
/// unsquared distance ||x_s - x_j|| in the exponents (the formula as written);
/// SquaredNorm uses ||x_s - x_j||^2 (the common SNE convention).
enum class ExponentMode { PaperNorm, SquaredNorm };

enum class SimilarityKind { ConditionalPerRow, SymmetricPairwise };

/// Row-stochastic similarity matrix with zero diagonal.
struct SimilarityMatrix {
    RealMatrix p;
    SimilarityKind kind = SimilarityKind::ConditionalPerRow;
    std::vector<double> sigma; // per-row bandwidths, or a single shared one

    std::size_t size() const { return p.rows(); }
};

/// Gaussian conditional probabilities p_{j|s} with per-row bandwidths.
/// Rows sum to 1, diagonal is zero. Exponents are shifted by the row maximum
/// before normalization; a row of identical points degrades to uniform.
SimilarityMatrix conditional_probs(const RealMatrix& x, std::span<const double> sigmas,
                                   ExponentMode mode = ExponentMode::PaperNorm);

/// Single-bandwidth pairwise similarities (the symmetric-SNE form).
SimilarityMatrix symmetric_probs(const RealMatrix& x, double sigma,
                                 ExponentMode mode = ExponentMode::PaperNorm);

/// Per-row bandwidths such that 2^{H(P_s)} equals the target perplexity within
/// 1e-4 (H = Shannon entropy in bits), found by bisection on [1e-10, 1e10].
/// Throws NumericError naming the row on non-convergence.
std::vector<double> sigma_for_perplexity(const RealMatrix& x, double perplexity,
                                         ExponentMode mode = ExponentMode::PaperNorm);

/// Map-space similarities q_{j|s} with the bandwidth fixed (variance 2^{-1/2}
/// folded into the exponent); no free parameter.
SimilarityMatrix map_similarities(const RealMatrix& y,
                                  ExponentMode mode = ExponentMode::PaperNorm,
                                  SimilarityKind kind = SimilarityKind::ConditionalPerRow);

/// sum p log(p/q) with the 0 log 0 = 0 convention; +infinity when some
/// p_sj > 0 has q_sj = 0.
double kl_divergence(const SimilarityMatrix& p, const SimilarityMatrix& q);

/// F(Y1, Y2) = KL(P1 || Q^{Y1}) + KL(P2 || Q^{Y2}) + zeta ||Y1 - Y2||_F^2.
double coupled_objective(const RealMatrix& y1, const RealMatrix& y2, const SimilarityMatrix& p1,
                         const SimilarityMatrix& p2, double zeta,
                         ExponentMode mode = ExponentMode::PaperNorm);

struct RefineConfig {
    double zeta = 1.0;
    double perplexity = 30.0;
    std::size_t max_iters = 300;
    double initial_step = 1.0;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    ExponentMode exponent_mode = ExponentMode::PaperNorm;
    bool optimize_free = false; // drop the unitary-family constraint entirely
};

void validate(const RefineConfig& cfg);

struct RefineResult {
    RealMatrix y1, y2;
    std::vector<double> trace; // objective per accepted iterate; trace[0] is the start
    bool stalled = false;
    bool on_manifold = false;
    Embedding embedding; // meaningful when on_manifold
};

/// Pick the embedding minimizing F within the spectral solution family by
/// gradient descent over the unitary mixer (polar retraction after each
/// Euclidean step), or over unconstrained Y1, Y2 when optimize_free is set.
/// The descent starts from mixer * e^{i pi/4}, which breaks the Im-degeneracy
/// of a real eigenbasis. Backtracking halves the step until the objective
/// decreases (minimum step 1e-12; a stall returns the best iterate found).
RefineResult refine(const Embedding& e, const Dataset& x1, const Dataset& x2,
                    const RefineConfig& cfg);

// Euclidean gradients of F, exposed for finite-difference validation.
// Layout: d F / d(Re U) + i * dF / d(Im U) for the mixer parametrization.
CMatrix refine_mixer_gradient(const Embedding& e, const CMatrix& mixer,
                              const SimilarityMatrix& p1, const SimilarityMatrix& p2,
                              double zeta, ExponentMode mode);
double refine_mixer_objective(const Embedding& e, const CMatrix& mixer,
                              const SimilarityMatrix& p1, const SimilarityMatrix& p2,
                              double zeta, ExponentMode mode);

} // namespace calign
