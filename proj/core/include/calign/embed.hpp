#pragma once

#include <memory>
#include <string>
#include <vector>

#include "calign/cmatrix.hpp"
#include "calign/laplacian.hpp"

namespace calign {

/// Coupled spectral embedding: a complex n x m matrix Y whose columns lie in
/// the eigenvector subspace N_m and satisfy Y*Y = I. Row j of Re Y is the
/// image of point j of dataset 1, row j of Im Y the image of point j of
/// dataset 2. Y factors as basis * mixer with the basis orthonormal.
struct Embedding {
    CMatrix y;
    RealMatrix y1; // Re y
    RealMatrix y2; // Im y
    std::shared_ptr<const Spectrum> source_spectrum;
    CMatrix basis; // orthonormalized basis of the selected subspace
    CMatrix mixer; // m x m unitary with y = basis * mixer

    std::size_t points() const { return y.rows(); }
    std::size_t dim() const { return y.cols(); }
};

/// Assemble an Embedding from its basis and mixer (recomputes the real split).
Embedding make_embedding(std::shared_ptr<const Spectrum> spec, CMatrix basis, CMatrix mixer);

/// Spectral embedding on the m-dimensional eigenvector subspace with the
/// identity mixer. By default the null eigenvectors are skipped and the m
/// smallest nonzero eigenpairs are used; include_null takes the m smallest
/// overall (the constant column comes first).
Embedding spectral_embed(std::shared_ptr<const Spectrum> spec, std::size_t m,
                         bool include_null = false);

/// Apply a unitary mixer: y' = y u. The solution set of the spectral problem
/// is closed under this action and the Dirichlet objective modulus is
/// invariant.
Embedding remix(const Embedding& e, const CMatrix& u);

/// FOSCTTM alignment error: the fraction of samples closer than the true
/// match, averaged over both directions. Row j of y1 and y2 are counterparts.
/// 0 is perfect alignment, about 0.5 is random.
double align_error(const RealMatrix& y1, const RealMatrix& y2);

/// |tr{Y* L Y}| -- the invariant remix preserves.
double dirichlet_modulus(const Embedding& e, const GenLaplacian& l);

/// Embedding CSV: header `id,dataset,c1,...,cm`; Re Y rows for dataset 1,
/// then Im Y rows for dataset 2.
std::string embedding_csv(const Embedding& e, const std::vector<std::string>& ids1,
                          const std::vector<std::string>& ids2);

struct EmbeddingTable {
    std::vector<std::string> ids1, ids2;
    RealMatrix y1, y2;
};
EmbeddingTable load_embedding_csv(const std::string& path);

} // namespace calign
