#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "calign/cmatrix.hpp"
#include "calign/dataset.hpp"

namespace calign {

enum class KernelFamily { GaussianRBF, Linear, Polynomial };

/// A positive-definite kernel choice for one dataset.
struct KernelSpec {
    KernelFamily family = KernelFamily::GaussianRBF;
    double t = 1.0;          // GaussianRBF width; != 0 (negative allowed, may break PSD)
    std::size_t degree = 2;  // Polynomial
    double offset = 1.0;     // Polynomial, >= 0
};

void validate(const KernelSpec& spec);

/// Gaussian RBF G(u, v) = exp(-||u - v||^2 / t) on complex vectors.
double rbf(std::span<const cplx> u, std::span<const cplx> v, double t);

/// Gram matrix K_qj = gamma(x_q, x_j) over the rows of a feature matrix.
/// Hermitian; PSD is checked (min eigenvalue >= -1e-9 * trace) and a failure
/// names the kernel.
CMatrix gram_matrix(const CMatrix& features, const KernelSpec& spec);
CMatrix gram_matrix(const Dataset& data, const KernelSpec& spec);

/// Latent images Z = A K: entry (q, j) is z_q(x_j).
CMatrix latent_map(const CMatrix& a, const CMatrix& k);

/// Latent Gram A K A*: entry (q, j) is the RKHS inner product (z_q, z_j).
CMatrix latent_gram(const CMatrix& a, const CMatrix& k);

/// The MMD-like coupling of two latent image sets (columns are points):
/// mean within-set similarity of each set minus twice the cross term.
double mmd_like(const CMatrix& z1, const CMatrix& z2, double t);

/// dis{A} = ||K - K A* A K||_F. The operand order in the source formula
/// (K A* K A) cannot be formed for A in C^{p x n}; this is the well-formed
/// reconciliation. `strict` evaluates the literal formula instead, which
/// exists only for p = n and is an error otherwise.
double distortion(const CMatrix& a, const CMatrix& k, bool strict = false);

/// pen{A} = ||I_p - A K A*||_F.
double penalty(const CMatrix& a, const CMatrix& k);

struct KernelAlignConfig {
    std::size_t latent_dim = 2;
    double rbf_t = 0.0; // <= 0: median squared pairwise latent distance at init
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    std::size_t max_iters = 200;
    double initial_step = 1.0;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    bool strict_paper_distortion = false;
};

void validate(const KernelAlignConfig& cfg, std::size_t n1, std::size_t n2);

struct KernelModel {
    CMatrix k1, k2;
    CMatrix a1, a2; // p x n_s coefficient matrices
    std::size_t latent_dim = 0;
    double rbf_t = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;
    std::vector<double> trace; // objective per accepted iterate
    bool stalled = false;

    CMatrix latent1() const { return latent_map(a1, k1); }
    CMatrix latent2() const { return latent_map(a2, k2); }
};

/// Objective G + lambda1 (dis{A1} + dis{A2}) + lambda2 (pen{A1} + pen{A2}).
double kernel_objective(const CMatrix& a1, const CMatrix& a2, const CMatrix& k1,
                        const CMatrix& k2, double t, double lambda1, double lambda2);

/// Its Euclidean gradient with respect to (A1, A2), real and imaginary parts
/// treated as independent variables. Exposed for finite-difference checks.
struct KernelGradient {
    CMatrix g1, g2;
};
KernelGradient kernel_gradient(const CMatrix& a1, const CMatrix& a2, const CMatrix& k1,
                               const CMatrix& k2, double t, double lambda1, double lambda2);

/// Minimize the objective by gradient descent with backtracking from a seeded
/// Gaussian initialization. Non-increasing objective per accepted step; a
/// stall keeps the best iterate.
KernelModel align(const CMatrix& k1, const CMatrix& k2, const KernelAlignConfig& cfg);

/// Evaluate a trained map at a new point from its kernel column
/// (gamma(x_1, x_new), ..., gamma(x_n, x_new)): z(x_new) = A kvec.
std::vector<cplx> out_of_sample(const KernelModel& model, int which,
                                std::span<const cplx> kvec);

} // namespace calign
