#include "calign/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace calign {

namespace {

void check_unit_pair(double a, double b, const char* names) {
    if (!(a > 0.0) || !(b > 0.0) || std::abs(a + b - 1.0) > 1e-12)
        throw InvalidArgument(std::string(names) + " must be positive and sum to 1");
}

// phase-uniform sqrt(d) factors; throws when a degree phase strays from theta
std::vector<cplx> degree_roots(const CMatrix& d, double theta, double tol) {
    const std::size_t n = d.rows();
    std::vector<cplx> s(n);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx djj = d(j, j);
        if (std::abs(djj) == 0.0) throw NumericError("zero degree at index " + std::to_string(j));
        const double phase = std::arg(djj);
        if (std::abs(phase - theta) > tol)
            throw NumericError("degree phase at index " + std::to_string(j) +
                               " differs from theta; the constraint A*DA = e^{i theta} I "
                               "cannot be constructed");
        s[j] = std::sqrt(djj);
    }
    return s;
}

} // namespace

CoupledGraph coupled_weight(const WeightMatrix& w1, const WeightMatrix& w2, double eta,
                            double mu, double alpha, double beta) {
    if (w1.size() != w2.size())
        throw InvalidArgument("coupled_weight: weight matrices differ in size");
    check_unit_pair(eta, mu, "eta, mu");
    check_unit_pair(alpha, beta, "alpha, beta");

    const std::size_t n = w1.size();
    RealMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = eta * w1.w(i, j) + mu * w2.w(i, j);

    const cplx scale(alpha, beta);
    CMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w(i, j) = scale * h(i, j);

    CoupledGraph g{w1, w2, eta, mu, alpha, beta, std::move(h), std::move(w), CMatrix(), 0.0};
    g.d = degree_matrix(g.w); // throws IsolatedVertex on a zero column
    g.theta = std::atan2(beta, alpha);
    return g;
}

GenLaplacian GenLaplacian::from_weights(const CMatrix& w_sym) {
    if (!w_sym.is_square()) throw InvalidArgument("from_weights: non-square weight matrix");
    const double f = w_sym.frobenius_norm();
    if ((w_sym - w_sym.transpose()).frobenius_norm() > 1e-12 * (f + 1.0))
        throw InvalidArgument("from_weights: weight matrix must be symmetric");
    GenLaplacian gl;
    gl.w = w_sym;
    gl.d = degree_matrix(w_sym);
    gl.l = gl.d - gl.w;
    gl.theta = std::arg(gl.d.trace());
    gl.l1 = gl.l * std::exp(cplx(0.0, -gl.theta));
    return gl;
}

GenLaplacian GenLaplacian::synthetic(const CMatrix& l, const CMatrix& d, double theta) {
    GenLaplacian gl;
    gl.l = l;
    gl.d = d;
    gl.w = d - l;
    gl.theta = theta;
    gl.l1 = l * std::exp(cplx(0.0, -theta));
    return gl;
}

GenLaplacian build_laplacian(const CoupledGraph& g) {
    GenLaplacian gl;
    gl.w = g.w;
    gl.d = g.d;
    gl.l = g.d - g.w;
    gl.theta = g.theta;
    gl.l1 = gl.l * std::exp(cplx(0.0, -g.theta));
    return gl;
}

CMatrix Spectrum::subspace_basis(std::size_t m) const {
    if (m < 1 || m > xi)
        throw InvalidArgument("subspace_basis: m must satisfy 1 <= m <= xi (= " +
                              std::to_string(xi) + ")");
    return vectors.columns(null_dim, m);
}

std::vector<cplx> Spectrum::nonnull_values() const {
    return {values.begin() + static_cast<std::ptrdiff_t>(null_dim), values.end()};
}

Spectrum generalized_spectrum(const GenLaplacian& gl) {
    EigenPairs pairs = generalized_eig(gl.l, gl.d); // ByModulus ascending
    const std::size_t n = pairs.values.size();

    double max_mod = 0.0;
    for (const cplx& v : pairs.values) max_mod = std::max(max_mod, std::abs(v));
    const double null_tol = 1e-9 * max_mod;

    std::size_t null_dim = 0;
    while (null_dim < n && std::abs(pairs.values[null_dim]) <= null_tol) ++null_dim;
    for (std::size_t j = 0; j < null_dim; ++j) pairs.values[j] = cplx(0.0, 0.0);

    Spectrum spec;
    spec.theta = gl.theta;
    spec.null_dim = null_dim;
    spec.xi = n - null_dim;

    CMatrix vecs = pairs.vectors;
    if (null_dim > 0) {
        // the kernel gets a plain orthonormal basis of its own
        CMatrix nullblock = orthonormalize_columns(vecs.columns(0, null_dim));
        for (std::size_t j = 0; j < null_dim; ++j) vecs.set_col(j, nullblock.col(j));
    }

    const cplx target = std::exp(cplx(0.0, gl.theta));
    for (std::size_t j = null_dim; j < n; ++j) {
        auto e = vecs.col(j);
        const cplx q = dot(gl.d.apply(e), e); // (D e, e)
        if (std::abs(q) < 1e-14)
            throw NumericError("generalized_spectrum: (D e, e) = 0 for eigenvector " +
                               std::to_string(j) + "; normalization impossible");
        const cplx scale = std::sqrt(target / q);
        for (auto& c : e) c *= scale;
        vecs.set_col(j, e);
    }

    spec.values = std::move(pairs.values);
    spec.vectors = std::move(vecs);
    return spec;
}

DirichletSides dirichlet_sides(const CMatrix& a, const GenLaplacian& gl) {
    if (a.rows() != gl.size())
        throw InvalidArgument("dirichlet: A must have n rows (n = " + std::to_string(gl.size()) +
                              ")");
    const cplx trace_form = (a.adjoint() * (gl.l * a)).trace();

    const std::size_t n = gl.size(), m = a.cols();
    cplx pair_sum(0.0, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t j = 0; j < n; ++j) {
            const cplx wsj = gl.w(s, j);
            if (wsj == cplx(0.0, 0.0)) continue;
            double dist2 = 0.0;
            for (std::size_t q = 0; q < m; ++q) dist2 += std::norm(a(s, q) - a(j, q));
            pair_sum += dist2 * wsj;
        }
    }
    pair_sum *= 0.5;
    return {trace_form, pair_sum};
}

cplx dirichlet_energy(const CMatrix& a, const GenLaplacian& gl) {
    const auto [lhs, rhs] = dirichlet_sides(a, gl);
    if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(lhs)))
        throw IdentityFailure("dirichlet identity failed: trace form and pair sum disagree",
                              lhs.real(), lhs.imag(), rhs.real(), rhs.imag());
    return lhs;
}

TraceProbeReport trace_formula_probe(const GenLaplacian& gl, std::size_t trials,
                                     std::uint64_t seed) {
    if (trials < 1) throw InvalidArgument("trace_formula_probe: trials must be >= 1");
    const std::size_t n = gl.size();
    const auto roots = degree_roots(gl.d, gl.theta, 1e-8);
    const cplx half_phase = std::exp(cplx(0.0, gl.theta / 2.0));
    const cplx full_phase = std::exp(cplx(0.0, gl.theta));

    cplx dinv_trace(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) dinv_trace += gl.l(j, j) / gl.d(j, j);
    const cplx denom = full_phase * dinv_trace;
    if (std::abs(denom) == 0.0)
        throw NumericError("trace_formula_probe: tr{D^-1 L} = 0, constant undefined");

    Rng rng = Rng::stream(seed, "trace_formula_probe");
    std::vector<cplx> cs;
    cs.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        const CMatrix u = random_unitary(rng, n);
        CMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = u(i, j) * half_phase / roots[i];
        const cplx num = (a.adjoint() * (gl.l * a)).trace();
        cs.push_back(num / denom);
    }

    TraceProbeReport rep;
    rep.trials = trials;
    cplx mean(0.0, 0.0);
    for (const cplx& c : cs) mean += c;
    mean /= static_cast<double>(trials);
    rep.constant = mean.real();
    for (const cplx& c : cs) {
        rep.dispersion = std::max(rep.dispersion, std::abs(c - mean));
        rep.max_imag = std::max(rep.max_imag, std::abs(c.imag()));
    }
    return rep;
}

SpectralMinReport spectral_min_check(const GenLaplacian& gl, std::size_t m, std::size_t trials,
                                     std::uint64_t seed) {
    const Spectrum spec = generalized_spectrum(gl);
    if (m < 1 || m > spec.xi) throw InvalidArgument("spectral_min_check: infeasible m");

    const std::vector<cplx> lam = spec.nonnull_values();
    const std::size_t xi = spec.xi;

    std::vector<double> res(xi), ims(xi);
    for (std::size_t j = 0; j < xi; ++j) {
        res[j] = lam[j].real();
        ims[j] = lam[j].imag();
    }
    std::vector<std::size_t> by_re(xi), by_im(xi);
    for (std::size_t j = 0; j < xi; ++j) by_re[j] = by_im[j] = j;
    std::sort(by_re.begin(), by_re.end(), [&](std::size_t a, std::size_t b) {
        return res[a] != res[b] ? res[a] < res[b] : a < b;
    });
    std::sort(by_im.begin(), by_im.end(), [&](std::size_t a, std::size_t b) {
        return ims[a] != ims[b] ? ims[a] < ims[b] : a < b;
    });

    SpectralMinReport rep;
    rep.trials = trials;
    for (std::size_t j = 0; j < m; ++j) {
        rep.bound_re += res[by_re[j]];
        rep.bound_im += ims[by_im[j]];
    }

    const CMatrix basis = spec.subspace_basis(xi); // all normalized eigenvectors
    auto objective = [&](const CMatrix& a) {
        cplx s(0.0, 0.0);
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const auto aj = a.col(j);
            s += dot(gl.l1.apply(aj), aj);
        }
        return s;
    };

    // the eigenbasis itself, picked per objective
    CMatrix best_re(gl.size(), m), best_im(gl.size(), m);
    for (std::size_t j = 0; j < m; ++j) {
        best_re.set_col(j, basis.col(by_re[j]));
        best_im.set_col(j, basis.col(by_im[j]));
    }
    rep.attained_re = objective(best_re).real();
    rep.attained_im = objective(best_im).imag();

    Rng rng = Rng::stream(seed, "spectral_min_check");
    rep.min_random_re = rep.attained_re;
    rep.min_random_im = rep.attained_im;
    bool first = true;
    for (std::size_t t = 0; t < trials; ++t) {
        const CMatrix mix = orthonormalize_columns(random_gaussian(rng, xi, m));
        const CMatrix a = basis * mix; // (D a_j, a_k) = e^{i theta} delta_jk
        const cplx obj = objective(a);
        if (first) {
            rep.min_random_re = obj.real();
            rep.min_random_im = obj.imag();
            first = false;
        } else {
            rep.min_random_re = std::min(rep.min_random_re, obj.real());
            rep.min_random_im = std::min(rep.min_random_im, obj.imag());
        }
        if (obj.real() < rep.bound_re - 1e-8 || obj.imag() < rep.bound_im - 1e-8)
            ++rep.violations;
    }
    return rep;
}

cplx indicator(const CMatrix& w, double theta) {
    const CMatrix d = degree_matrix(w); // throws on zero degree
    cplx sum(0.0, 0.0);
    for (std::size_t j = 0; j < w.rows(); ++j) sum += 1.0 - w(j, j) / d(j, j);
    return std::exp(cplx(0.0, theta)) * sum;
}

RealMatrix real_eigenmaps(const WeightMatrix& wm, std::size_t m) {
    const std::size_t n = wm.size();
    const std::vector<double> deg = degree_vector(wm);

    // whitened real symmetric form D^{-1/2} (D - W) D^{-1/2}
    CMatrix sym(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double lij = (i == j ? deg[i] : 0.0) - wm.w(i, j);
            sym(i, j) = lij / std::sqrt(deg[i] * deg[j]);
        }
    }
    EigenPairs pairs = hermitian_eig(sym);

    double max_mod = 0.0;
    for (const cplx& v : pairs.values) max_mod = std::max(max_mod, std::abs(v));
    const double null_tol = 1e-9 * max_mod;
    std::size_t skip = 0;
    while (skip < n && std::abs(pairs.values[skip]) <= null_tol) ++skip;
    if (skip + m > n)
        throw InvalidArgument("real_eigenmaps: m exceeds the number of nonzero eigenvalues");

    RealMatrix y(n, m);
    for (std::size_t c = 0; c < m; ++c) {
        auto u = pairs.vectors.col(skip + c);
        // back-transform and normalize (e, D e) = 1
        double q = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            u[i] /= std::sqrt(deg[i]);
            q += deg[i] * std::norm(u[i]);
        }
        const double scale = 1.0 / std::sqrt(q);
        for (std::size_t i = 0; i < n; ++i) y(i, c) = u[i].real() * scale;
    }
    return y;
}

} // namespace calign
