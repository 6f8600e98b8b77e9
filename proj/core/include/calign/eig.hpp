#pragma once

#include <vector>

#include "calign/cmatrix.hpp"

namespace calign {

enum class Ordering { ByModulus, ByRealPart, ByImagPart };

/// Eigenvalues with their eigenvectors as matrix columns, sorted ascending by
/// `ordering_key` (ties broken by the complementary part, then original index).
struct EigenPairs {
    std::vector<cplx> values;
    CMatrix vectors;
    Ordering ordering_key = Ordering::ByModulus;
};

/// Return a copy re-sorted under a different key.
EigenPairs sorted_by(const EigenPairs& e, Ordering key);

/// Scale each column so its largest-modulus component is real and positive.
/// Eigenvectors are defined only up to a unit phase; this pins one.
void normalize_phase(CMatrix& vectors);

/// Cyclic-Jacobi eigendecomposition of a Hermitian matrix.
/// Real eigenvalues, orthonormal eigenvectors, sorted ascending by value.
/// Throws NumericError if the input is non-Hermitian beyond 1e-10 (relative).
EigenPairs hermitian_eig(const CMatrix& h);

/// Eigendecomposition of a normal matrix via simultaneous diagonalization of
/// its commuting Hermitian components: Jacobi on Re-part, then Jacobi on the
/// Im-part restricted to each eigenspace block of the Re-part. Eigenvalue
/// blocks are clustered at 1e-8 * ||n||_F. Sorted ascending by modulus.
EigenPairs normal_eig(const CMatrix& n);

/// Generalized eigenproblem l e = lambda d e for diagonal invertible d.
/// Solved through the whitened operator M = d^{-1/2} l d^{-1/2}, which must be
/// normal (this is the operative form of the normality assumption on d^{-1} l:
/// it holds for every coupled graph, where d^{-1} l itself need not be normal).
/// Eigenvectors are returned with unit Euclidean norm, not yet D-normalized.
EigenPairs generalized_eig(const CMatrix& l, const CMatrix& d);

/// Modified Gram-Schmidt on the columns, in order. Throws NumericError when a
/// column is (numerically) dependent on its predecessors.
CMatrix orthonormalize_columns(const CMatrix& a);

class Rng;

/// Matrix with independent standard complex Gaussian entries.
CMatrix random_gaussian(Rng& rng, std::size_t rows, std::size_t cols);

/// Haar-ish random unitary: orthonormalized columns of a Gaussian draw.
CMatrix random_unitary(Rng& rng, std::size_t n);

} // namespace calign
