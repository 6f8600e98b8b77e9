#include "calign/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "calign/rng.hpp"

namespace calign {

namespace {

double off_diagonal_norm(const CMatrix& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (i != j) s += std::norm(h(i, j));
    return std::sqrt(s);
}

// One cyclic Jacobi pass zeroing h(p,q) via the unitary
//   U = I except U(p,p)=c, U(p,q)=s, U(q,p)=-s*conj(u), U(q,q)=c*conj(u)
// with u the phase of h(p,q); updates h <- U* h U and v <- v U.
void jacobi_rotate(CMatrix& h, CMatrix& v, std::size_t p, std::size_t q) {
    const cplx apq = h(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) return;
    const cplx u = apq / r;
    const double app = h(p, p).real();
    const double aqq = h(q, q).real();
    const double tau = (aqq - app) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cplx ubar = std::conj(u);

    const std::size_t n = h.rows();
    for (std::size_t k = 0; k < n; ++k) { // h <- h U (columns p, q)
        const cplx hkp = h(k, p), hkq = h(k, q);
        h(k, p) = c * hkp - s * ubar * hkq;
        h(k, q) = s * hkp + c * ubar * hkq;
    }
    for (std::size_t k = 0; k < n; ++k) { // h <- U* h (rows p, q)
        const cplx hpk = h(p, k), hqk = h(q, k);
        h(p, k) = c * hpk - s * u * hqk;
        h(q, k) = s * hpk + c * u * hqk;
    }
    for (std::size_t k = 0; k < n; ++k) { // v <- v U
        const cplx vkp = v(k, p), vkq = v(k, q);
        v(k, p) = c * vkp - s * ubar * vkq;
        v(k, q) = s * vkp + c * ubar * vkq;
    }
    // pin the zeroed pair and the now-real diagonal
    h(p, q) = 0.0;
    h(q, p) = 0.0;
    h(p, p) = cplx(h(p, p).real(), 0.0);
    h(q, q) = cplx(h(q, q).real(), 0.0);
}

// Jacobi on an exactly-Hermitian matrix; returns unsorted diagonal + basis.
void jacobi_sweep_all(CMatrix h, std::vector<double>& values, CMatrix& vectors) {
    const std::size_t n = h.rows();
    vectors = CMatrix::identity(n);
    const double fnorm = h.frobenius_norm();
    const double stop = 1e-14 * (fnorm > 0.0 ? fnorm : 1.0);
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(h) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(h, vectors, p, q);
    }
    values.resize(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = h(i, i).real();
}

CMatrix exact_hermitian_part(const CMatrix& a) {
    const std::size_t n = a.rows();
    CMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h(i, j) = (a(i, j) + std::conj(a(j, i))) * 0.5;
    return h;
}

struct SortKey {
    double primary, secondary, tertiary;
    std::size_t index;
    bool operator<(const SortKey& o) const {
        if (primary != o.primary) return primary < o.primary;
        if (secondary != o.secondary) return secondary < o.secondary;
        if (tertiary != o.tertiary) return tertiary < o.tertiary;
        return index < o.index;
    }
};

SortKey make_key(const cplx& v, Ordering key, std::size_t index) {
    switch (key) {
        case Ordering::ByRealPart: return {v.real(), v.imag(), std::abs(v), index};
        case Ordering::ByImagPart: return {v.imag(), v.real(), std::abs(v), index};
        case Ordering::ByModulus:
        default: return {std::abs(v), v.real(), v.imag(), index};
    }
}

void sort_pairs(std::vector<cplx>& values, CMatrix& vectors, Ordering key) {
    const std::size_t n = values.size();
    std::vector<SortKey> keys(n);
    for (std::size_t i = 0; i < n; ++i) keys[i] = make_key(values[i], key, i);
    std::sort(keys.begin(), keys.end());
    std::vector<cplx> sv(n);
    CMatrix sm(vectors.rows(), n);
    for (std::size_t i = 0; i < n; ++i) {
        sv[i] = values[keys[i].index];
        const auto c = vectors.col(keys[i].index);
        sm.set_col(i, c);
    }
    values = std::move(sv);
    vectors = std::move(sm);
}

} // namespace

EigenPairs sorted_by(const EigenPairs& e, Ordering key) {
    EigenPairs out = e;
    sort_pairs(out.values, out.vectors, key);
    out.ordering_key = key;
    return out;
}

void normalize_phase(CMatrix& vectors) {
    for (std::size_t j = 0; j < vectors.cols(); ++j) {
        std::size_t imax = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < vectors.rows(); ++i) {
            const double a = std::abs(vectors(i, j));
            if (a > best) { best = a; imax = i; }
        }
        if (best <= 0.0) continue;
        const cplx phase = std::conj(vectors(imax, j)) / best;
        for (std::size_t i = 0; i < vectors.rows(); ++i) vectors(i, j) *= phase;
        vectors(imax, j) = cplx(std::abs(vectors(imax, j)), 0.0);
    }
}

EigenPairs hermitian_eig(const CMatrix& h) {
    if (!h.is_square()) throw InvalidArgument("hermitian_eig: non-square input");
    if (hermitian_residual(h) > 1e-10)
        throw NumericError("hermitian_eig: input is not Hermitian within 1e-10");
    std::vector<double> vals;
    CMatrix vecs;
    jacobi_sweep_all(exact_hermitian_part(h), vals, vecs);
    EigenPairs out;
    out.values.assign(vals.begin(), vals.end());
    out.vectors = std::move(vecs);
    out.ordering_key = Ordering::ByRealPart;
    sort_pairs(out.values, out.vectors, Ordering::ByRealPart);
    normalize_phase(out.vectors);
    return out;
}

EigenPairs normal_eig(const CMatrix& n) {
    if (!n.is_square()) throw InvalidArgument("normal_eig: non-square input");
    if (!is_normal(n, 1e-10)) throw NumericError("normal_eig: input fails the normality test");
    const std::size_t dim = n.rows();
    const auto [re, im] = hermitian_components(n);

    std::vector<double> alphas;
    CMatrix basis;
    jacobi_sweep_all(re, alphas, basis);

    // ascending order of the Re-part eigenvalues, so clusters are contiguous
    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (alphas[a] != alphas[b]) return alphas[a] < alphas[b];
        return a < b;
    });
    CMatrix v(dim, dim);
    std::vector<double> a_sorted(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        v.set_col(k, basis.col(order[k]));
        a_sorted[k] = alphas[order[k]];
    }

    const double cluster_tol = 1e-8 * n.frobenius_norm();

    // second stage: diagonalize the Im-part within each Re-eigenspace block
    std::size_t lo = 0;
    while (lo < dim) {
        std::size_t hi = lo + 1;
        while (hi < dim && a_sorted[hi] - a_sorted[hi - 1] <= cluster_tol) ++hi;
        const std::size_t k = hi - lo;
        if (k > 1) {
            CMatrix sub(dim, k);
            for (std::size_t j = 0; j < k; ++j) sub.set_col(j, v.col(lo + j));
            CMatrix proj = sub.adjoint() * im * sub; // k x k, Hermitian up to rounding
            std::vector<double> mv;
            CMatrix p;
            jacobi_sweep_all(exact_hermitian_part(proj), mv, p);
            CMatrix mixed = sub * p;
            for (std::size_t j = 0; j < k; ++j) v.set_col(lo + j, mixed.col(j));
        }
        lo = hi;
    }

    // eigenvalues from Rayleigh quotients on the shared basis
    EigenPairs out;
    out.values.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        const auto vj = v.col(j);
        const double ar = dot(re.apply(vj), vj).real();
        const double ai = dot(im.apply(vj), vj).real();
        out.values[j] = cplx(ar, ai);
    }
    out.vectors = std::move(v);
    out.ordering_key = Ordering::ByModulus;
    sort_pairs(out.values, out.vectors, Ordering::ByModulus);
    normalize_phase(out.vectors);
    return out;
}

EigenPairs generalized_eig(const CMatrix& l, const CMatrix& d) {
    if (!l.is_square() || !d.is_square() || l.rows() != d.rows())
        throw InvalidArgument("generalized_eig: l and d must be square of equal size");
    const std::size_t n = l.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && d(i, j) != cplx(0.0, 0.0))
                throw InvalidArgument("generalized_eig: d must be diagonal");
    std::vector<cplx> s(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(d(j, j)) == 0.0)
            throw NumericError("generalized_eig: singular d (d_jj = 0)");
        s[j] = std::sqrt(d(j, j)); // principal square root
    }

    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = l(i, j) / (s[i] * s[j]);
    if (!is_normal(m, 1e-10))
        throw NumericError("generalized_eig: whitened operator d^{-1/2} l d^{-1/2} is not normal");

    EigenPairs white = normal_eig(m);

    CMatrix vecs(n, white.vectors.cols());
    std::vector<cplx> col(n);
    for (std::size_t j = 0; j < white.vectors.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = white.vectors(i, j) / s[i];
        const double nrm = norm2(col);
        if (nrm > 0.0)
            for (auto& c : col) c /= nrm;
        vecs.set_col(j, col);
    }
    normalize_phase(vecs);
    return EigenPairs{std::move(white.values), std::move(vecs), Ordering::ByModulus};
}

CMatrix orthonormalize_columns(const CMatrix& a) {
    const std::size_t n = a.rows(), m = a.cols();
    CMatrix q = a;
    for (std::size_t j = 0; j < m; ++j) {
        auto vj = q.col(j);
        for (std::size_t k = 0; k < j; ++k) {
            const auto vk = q.col(k);
            const cplx proj = dot(vj, vk);
            for (std::size_t i = 0; i < n; ++i) vj[i] -= proj * vk[i];
        }
        const double nrm = norm2(vj);
        if (nrm < 1e-12 * (norm2(a.col(j)) + 1.0))
            throw NumericError("orthonormalize_columns: column " + std::to_string(j) +
                               " is dependent on its predecessors");
        for (auto& c : vj) c /= nrm;
        q.set_col(j, vj);
    }
    return q;
}

CMatrix random_gaussian(Rng& rng, std::size_t rows, std::size_t cols) {
    CMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = cplx(rng.normal(), rng.normal());
    return m;
}

CMatrix random_unitary(Rng& rng, std::size_t n) {
    return orthonormalize_columns(random_gaussian(rng, n, n));
}

} // namespace calign
