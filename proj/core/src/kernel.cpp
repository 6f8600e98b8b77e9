#include "calign/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "calign/eig.hpp"
#include "calign/rng.hpp"

namespace calign {

namespace {

const char* family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::GaussianRBF: return "GaussianRBF";
        case KernelFamily::Linear: return "Linear";
        case KernelFamily::Polynomial: return "Polynomial";
    }
    return "?";
}

double col_dist_sq(const CMatrix& z, std::size_t i, const CMatrix& w, std::size_t j) {
    double s = 0.0;
    for (std::size_t r = 0; r < z.rows(); ++r) s += std::norm(z(r, i) - w(r, j));
    return s;
}

cplx int_pow(cplx base, std::size_t e) {
    cplx r(1.0, 0.0);
    for (std::size_t i = 0; i < e; ++i) r *= base;
    return r;
}

cplx kernel_entry(const CMatrix& x, std::size_t q, std::size_t j, const KernelSpec& spec) {
    switch (spec.family) {
        case KernelFamily::GaussianRBF: {
            double d2 = 0.0;
            for (std::size_t c = 0; c < x.cols(); ++c) d2 += std::norm(x(q, c) - x(j, c));
            return std::exp(-d2 / spec.t);
        }
        case KernelFamily::Linear: {
            cplx s(0.0, 0.0);
            for (std::size_t c = 0; c < x.cols(); ++c) s += x(q, c) * std::conj(x(j, c));
            return s;
        }
        case KernelFamily::Polynomial: {
            cplx s(spec.offset, 0.0);
            for (std::size_t c = 0; c < x.cols(); ++c) s += x(q, c) * std::conj(x(j, c));
            return int_pow(s, spec.degree);
        }
    }
    throw InvalidArgument("unknown kernel family");
}

} // namespace

void validate(const KernelSpec& spec) {
    if (spec.family == KernelFamily::GaussianRBF && spec.t == 0.0)
        throw InvalidArgument("GaussianRBF: t must be nonzero");
    if (spec.family == KernelFamily::Polynomial) {
        if (spec.degree < 1) throw InvalidArgument("Polynomial: degree must be >= 1");
        if (spec.offset < 0.0) throw InvalidArgument("Polynomial: offset must be >= 0");
    }
}

double rbf(std::span<const cplx> u, std::span<const cplx> v, double t) {
    if (t == 0.0) throw InvalidArgument("rbf: t must be nonzero");
    if (u.size() != v.size()) throw InvalidArgument("rbf: length mismatch");
    double d2 = 0.0;
    for (std::size_t c = 0; c < u.size(); ++c) d2 += std::norm(u[c] - v[c]);
    return std::exp(-d2 / t);
}

CMatrix gram_matrix(const CMatrix& features, const KernelSpec& spec) {
    validate(spec);
    const std::size_t n = features.rows();
    if (n < 1) throw InvalidArgument("gram_matrix: empty feature matrix");
    CMatrix k(n, n);
    for (std::size_t q = 0; q < n; ++q) {
        k(q, q) = cplx(kernel_entry(features, q, q, spec).real(), 0.0);
        for (std::size_t j = q + 1; j < n; ++j) {
            const cplx v = kernel_entry(features, q, j, spec);
            k(q, j) = v;
            k(j, q) = std::conj(v);
        }
    }
    const EigenPairs eig = hermitian_eig(k);
    const double tr = k.trace().real();
    const double min_ev = eig.values.front().real();
    if (min_ev < -1e-9 * std::abs(tr))
        throw NumericError(std::string("gram_matrix: kernel ") + family_name(spec.family) +
                           " produced a non-PSD Gram matrix (min eigenvalue " +
                           std::to_string(min_ev) + ")");
    return k;
}

CMatrix gram_matrix(const Dataset& data, const KernelSpec& spec) {
    return gram_matrix(CMatrix::from_real(data.features), spec);
}

CMatrix latent_map(const CMatrix& a, const CMatrix& k) {
    if (a.cols() != k.rows()) throw InvalidArgument("latent_map: shape mismatch");
    return a * k;
}

CMatrix latent_gram(const CMatrix& a, const CMatrix& k) {
    if (a.cols() != k.rows() || !k.is_square())
        throw InvalidArgument("latent_gram: shape mismatch");
    return a * k * a.adjoint();
}

double mmd_like(const CMatrix& z1, const CMatrix& z2, double t) {
    if (z1.rows() != z2.rows())
        throw InvalidArgument("mmd_like: latent dimensions disagree");
    if (t == 0.0) throw InvalidArgument("mmd_like: t must be nonzero");
    const std::size_t n1 = z1.cols(), n2 = z2.cols();
    double within1 = 0.0, cross = 0.0, within2 = 0.0;
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n1; ++j) within1 += std::exp(-col_dist_sq(z1, i, z1, j) / t);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) cross += std::exp(-col_dist_sq(z1, i, z2, j) / t);
    for (std::size_t i = 0; i < n2; ++i)
        for (std::size_t j = 0; j < n2; ++j) within2 += std::exp(-col_dist_sq(z2, i, z2, j) / t);
    const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2);
    return within1 / (dn1 * dn1) - 2.0 * cross / (dn1 * dn2) + within2 / (dn2 * dn2);
}

double distortion(const CMatrix& a, const CMatrix& k, bool strict) {
    if (a.cols() != k.rows() || !k.is_square())
        throw InvalidArgument("distortion: shape mismatch");
    if (strict) {
        if (a.rows() != a.cols() || a.rows() != k.rows())
            throw InvalidArgument(
                "distortion: the literal operand order K A* K A requires square A (p = n); "
                "shapes p x n cannot be multiplied");
        return (k - k * a.adjoint() * k * a).frobenius_norm();
    }
    // K A* A K = (A K)* (A K) for Hermitian K; keeps the cost at n^2 p
    const CMatrix ak = a * k;
    return (k - ak.adjoint() * ak).frobenius_norm();
}

double penalty(const CMatrix& a, const CMatrix& k) {
    if (a.cols() != k.rows() || !k.is_square())
        throw InvalidArgument("penalty: shape mismatch");
    return (CMatrix::identity(a.rows()) - a * k * a.adjoint()).frobenius_norm();
}

double kernel_objective(const CMatrix& a1, const CMatrix& a2, const CMatrix& k1,
                        const CMatrix& k2, double t, double lambda1, double lambda2) {
    const CMatrix z1 = latent_map(a1, k1);
    const CMatrix z2 = latent_map(a2, k2);
    return mmd_like(z1, z2, t) + lambda1 * (distortion(a1, k1) + distortion(a2, k2)) +
           lambda2 * (penalty(a1, k1) + penalty(a2, k2));
}

namespace {

// gradient of the MMD-like term with respect to the latent columns
void mmd_latent_gradients(const CMatrix& z1, const CMatrix& z2, double t, CMatrix& gz1,
                          CMatrix& gz2) {
    const std::size_t p = z1.rows(), n1 = z1.cols(), n2 = z2.cols();
    const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2);
    gz1 = CMatrix(p, n1);
    gz2 = CMatrix(p, n2);
    for (std::size_t a = 0; a < n1; ++a) {
        for (std::size_t j = 0; j < n1; ++j) {
            if (j == a) continue;
            const double g = std::exp(-col_dist_sq(z1, a, z1, j) / t);
            const double c = -4.0 / (t * dn1 * dn1) * g;
            for (std::size_t r = 0; r < p; ++r) gz1(r, a) += c * (z1(r, a) - z1(r, j));
        }
        for (std::size_t j = 0; j < n2; ++j) {
            const double g = std::exp(-col_dist_sq(z1, a, z2, j) / t);
            const double c = 4.0 / (t * dn1 * dn2) * g;
            for (std::size_t r = 0; r < p; ++r) gz1(r, a) += c * (z1(r, a) - z2(r, j));
        }
    }
    for (std::size_t b = 0; b < n2; ++b) {
        for (std::size_t j = 0; j < n2; ++j) {
            if (j == b) continue;
            const double g = std::exp(-col_dist_sq(z2, b, z2, j) / t);
            const double c = -4.0 / (t * dn2 * dn2) * g;
            for (std::size_t r = 0; r < p; ++r) gz2(r, b) += c * (z2(r, b) - z2(r, j));
        }
        for (std::size_t i = 0; i < n1; ++i) {
            const double g = std::exp(-col_dist_sq(z1, i, z2, b) / t);
            const double c = 4.0 / (t * dn1 * dn2) * g;
            for (std::size_t r = 0; r < p; ++r) gz2(r, b) += c * (z2(r, b) - z1(r, i));
        }
    }
}

// d/dA of ||K - K A* A K||_F (zero at a zero residual)
CMatrix distortion_gradient(const CMatrix& a, const CMatrix& k) {
    const CMatrix ak = a * k;
    const CMatrix r = k - ak.adjoint() * ak;
    const double nrm = r.frobenius_norm();
    if (nrm < 1e-15) return CMatrix(a.rows(), a.cols());
    return (ak * r * k) * cplx(-2.0 / nrm, 0.0);
}

// d/dA of ||I - A K A*||_F
CMatrix penalty_gradient(const CMatrix& a, const CMatrix& k) {
    const CMatrix s = CMatrix::identity(a.rows()) - a * k * a.adjoint();
    const double nrm = s.frobenius_norm();
    if (nrm < 1e-15) return CMatrix(a.rows(), a.cols());
    return (s * a * k) * cplx(-2.0 / nrm, 0.0);
}

double median_sq_latent_distance(const CMatrix& z1, const CMatrix& z2) {
    std::vector<double> d2;
    const std::size_t n1 = z1.cols(), n2 = z2.cols();
    d2.reserve((n1 + n2) * (n1 + n2) / 2);
    auto col_of = [&](std::size_t i) { return i < n1 ? z1.col(i) : z2.col(i - n1); };
    for (std::size_t i = 0; i < n1 + n2; ++i) {
        const auto ci = col_of(i);
        for (std::size_t j = i + 1; j < n1 + n2; ++j) {
            const auto cj = col_of(j);
            double s = 0.0;
            for (std::size_t r = 0; r < ci.size(); ++r) s += std::norm(ci[r] - cj[r]);
            d2.push_back(s);
        }
    }
    if (d2.empty()) return 1.0;
    std::sort(d2.begin(), d2.end());
    const double med = d2[d2.size() / 2];
    return med > 0.0 ? med : 1.0;
}

} // namespace

KernelGradient kernel_gradient(const CMatrix& a1, const CMatrix& a2, const CMatrix& k1,
                               const CMatrix& k2, double t, double lambda1, double lambda2) {
    const CMatrix z1 = latent_map(a1, k1);
    const CMatrix z2 = latent_map(a2, k2);
    CMatrix gz1, gz2;
    mmd_latent_gradients(z1, z2, t, gz1, gz2);
    KernelGradient g;
    g.g1 = gz1 * k1; // chain rule through Z = A K, K Hermitian
    g.g2 = gz2 * k2;
    if (lambda1 != 0.0) {
        g.g1 = g.g1 + distortion_gradient(a1, k1) * cplx(lambda1, 0.0);
        g.g2 = g.g2 + distortion_gradient(a2, k2) * cplx(lambda1, 0.0);
    }
    if (lambda2 != 0.0) {
        g.g1 = g.g1 + penalty_gradient(a1, k1) * cplx(lambda2, 0.0);
        g.g2 = g.g2 + penalty_gradient(a2, k2) * cplx(lambda2, 0.0);
    }
    return g;
}

void validate(const KernelAlignConfig& cfg, std::size_t n1, std::size_t n2) {
    if (cfg.latent_dim < 1 || cfg.latent_dim > std::min(n1, n2))
        throw InvalidArgument("kernel align: latent_dim must satisfy 1 <= p <= min(n1, n2)");
    if (cfg.lambda1 < 0.0 || cfg.lambda2 < 0.0)
        throw InvalidArgument("kernel align: lambdas must be >= 0");
    if (!(cfg.initial_step > 0.0)) throw InvalidArgument("kernel align: step must be > 0");
    if (!(cfg.tolerance > 0.0)) throw InvalidArgument("kernel align: tolerance must be > 0");
}

KernelModel align(const CMatrix& k1, const CMatrix& k2, const KernelAlignConfig& cfg) {
    if (!k1.is_square() || !k2.is_square()) throw InvalidArgument("align: Grams must be square");
    const std::size_t n1 = k1.rows(), n2 = k2.rows();
    validate(cfg, n1, n2);
    const std::size_t p = cfg.latent_dim;

    Rng rng = Rng::stream(cfg.seed, "kernel_align_init");
    auto init_coeff = [&](const CMatrix& k, std::size_t n) {
        const double tr = std::max(k.trace().real(), 1e-300);
        const double sd = std::sqrt(1.0 / tr); // entry variance 1/tr(K)
        CMatrix a(p, n);
        for (std::size_t r = 0; r < p; ++r)
            for (std::size_t c = 0; c < n; ++c) a(r, c) = sd * rng.normal();
        return a;
    };
    CMatrix a1 = init_coeff(k1, n1);
    CMatrix a2 = init_coeff(k2, n2);

    double t = cfg.rbf_t;
    if (!(t > 0.0) || !std::isfinite(t))
        t = median_sq_latent_distance(latent_map(a1, k1), latent_map(a2, k2));

    KernelModel model;
    model.k1 = k1;
    model.k2 = k2;
    model.latent_dim = p;
    model.rbf_t = t;
    model.lambda1 = cfg.lambda1;
    model.lambda2 = cfg.lambda2;

    double f = kernel_objective(a1, a2, k1, k2, t, cfg.lambda1, cfg.lambda2);
    if (!std::isfinite(f))
        throw NumericError("align: non-finite objective at initialization (t = " +
                           std::to_string(t) + ")");
    model.trace.push_back(f);

    constexpr double kMinStep = 1e-12;
    double step = cfg.initial_step;
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        const KernelGradient g =
            kernel_gradient(a1, a2, k1, k2, t, cfg.lambda1, cfg.lambda2);
        step = std::min(2.0 * step, cfg.initial_step);
        bool accepted = false;
        while (step >= kMinStep) {
            const CMatrix t1 = a1 - g.g1 * cplx(step, 0.0);
            const CMatrix t2 = a2 - g.g2 * cplx(step, 0.0);
            const double ft = kernel_objective(t1, t2, k1, k2, t, cfg.lambda1, cfg.lambda2);
            if (std::isfinite(ft) && ft < f) {
                a1 = t1;
                a2 = t2;
                const double decrease = f - ft;
                f = ft;
                model.trace.push_back(f);
                accepted = true;
                if (decrease <= cfg.tolerance * std::max(1.0, std::abs(f)))
                    it = cfg.max_iters;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            model.stalled = true;
            break;
        }
    }
    model.a1 = std::move(a1);
    model.a2 = std::move(a2);
    return model;
}

std::vector<cplx> out_of_sample(const KernelModel& model, int which,
                                std::span<const cplx> kvec) {
    const CMatrix& a = which == 1 ? model.a1 : model.a2;
    if (which != 1 && which != 2) throw InvalidArgument("out_of_sample: which must be 1 or 2");
    if (kvec.size() != a.cols())
        throw InvalidArgument("out_of_sample: kernel vector length must be n_s");
    return a.apply(kvec);
}

} // namespace calign
