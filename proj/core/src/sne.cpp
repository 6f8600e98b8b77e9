#include "calign/sne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace calign {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pair_exponent(const RealMatrix& x, std::size_t s, std::size_t j, ExponentMode mode) {
    const double d2 = row_dist_sq(x, s, j);
    return mode == ExponentMode::PaperNorm ? std::sqrt(d2) : d2;
}

// normalize one row of exponents exp(e_j) / sum, shifted by the row maximum
void normalize_row(RealMatrix& p, std::size_t s, const std::vector<double>& expo) {
    const std::size_t n = p.rows();
    double mx = -kInf;
    for (std::size_t j = 0; j < n; ++j)
        if (j != s) mx = std::max(mx, expo[j]);
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == s) continue;
        const double e = std::exp(expo[j] - mx);
        p(s, j) = e;
        z += e;
    }
    for (std::size_t j = 0; j < n; ++j)
        if (j != s) p(s, j) /= z;
    p(s, s) = 0.0;
}

SimilarityMatrix gaussian_rows(const RealMatrix& x, std::span<const double> sigmas,
                               ExponentMode mode, SimilarityKind kind) {
    const std::size_t n = x.rows();
    if (n < 2) throw InvalidArgument("similarities: need at least 2 points");
    RealMatrix p(n, n);
    std::vector<double> expo(n);
    for (std::size_t s = 0; s < n; ++s) {
        const double sig = sigmas.size() == 1 ? sigmas[0] : sigmas[s];
        if (!(sig > 0.0)) throw InvalidArgument("similarities: sigma must be positive");
        const double inv = 1.0 / (2.0 * sig * sig);
        for (std::size_t j = 0; j < n; ++j)
            expo[j] = j == s ? 0.0 : -pair_exponent(x, s, j, mode) * inv;
        normalize_row(p, s, expo);
    }
    SimilarityMatrix sm;
    sm.p = std::move(p);
    sm.kind = kind;
    sm.sigma.assign(sigmas.begin(), sigmas.end());
    return sm;
}

} // namespace

SimilarityMatrix conditional_probs(const RealMatrix& x, std::span<const double> sigmas,
                                   ExponentMode mode) {
    if (sigmas.size() != x.rows())
        throw InvalidArgument("conditional_probs: one sigma per row required");
    return gaussian_rows(x, sigmas, mode, SimilarityKind::ConditionalPerRow);
}

SimilarityMatrix symmetric_probs(const RealMatrix& x, double sigma, ExponentMode mode) {
    const double s[1] = {sigma};
    return gaussian_rows(x, s, mode, SimilarityKind::SymmetricPairwise);
}

std::vector<double> sigma_for_perplexity(const RealMatrix& x, double perplexity,
                                         ExponentMode mode) {
    const std::size_t n = x.rows();
    if (n < 2) throw InvalidArgument("sigma_for_perplexity: need at least 2 points");
    if (!(perplexity > 1.0) || !(perplexity < static_cast<double>(n)))
        throw InvalidArgument("sigma_for_perplexity: need 1 < perplexity < n");

    std::vector<double> sigmas(n, 1.0);
    std::vector<double> dist(n), prob(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t j = 0; j < n; ++j)
            dist[j] = j == s ? 0.0 : pair_exponent(x, s, j, mode);

        auto perp_at = [&](double sigma) {
            const double inv = 1.0 / (2.0 * sigma * sigma);
            double mx = -kInf;
            for (std::size_t j = 0; j < n; ++j)
                if (j != s) mx = std::max(mx, -dist[j] * inv);
            double z = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                prob[j] = j == s ? 0.0 : std::exp(-dist[j] * inv - mx);
                z += prob[j];
            }
            double h = 0.0; // entropy in bits
            for (std::size_t j = 0; j < n; ++j) {
                if (j == s || prob[j] <= 0.0) continue;
                const double pj = prob[j] / z;
                h -= pj * std::log2(pj);
            }
            return std::exp2(h);
        };

        double lo = 1e-10, hi = 1e10;
        bool done = false;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double perp = perp_at(mid);
            if (std::abs(perp - perplexity) <= 1e-4) {
                sigmas[s] = mid;
                done = true;
                break;
            }
            if (perp < perplexity)
                lo = mid;
            else
                hi = mid;
        }
        if (!done)
            throw NumericError("sigma_for_perplexity: bisection did not converge for row " +
                               std::to_string(s));
    }
    return sigmas;
}

SimilarityMatrix map_similarities(const RealMatrix& y, ExponentMode mode, SimilarityKind kind) {
    const std::size_t n = y.rows();
    if (n < 2) throw InvalidArgument("map_similarities: need at least 2 points");
    RealMatrix p(n, n);
    std::vector<double> expo(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t j = 0; j < n; ++j)
            expo[j] = j == s ? 0.0 : -pair_exponent(y, s, j, mode);
        normalize_row(p, s, expo);
    }
    SimilarityMatrix sm;
    sm.p = std::move(p);
    sm.kind = kind;
    return sm;
}

double kl_divergence(const SimilarityMatrix& p, const SimilarityMatrix& q) {
    if (p.size() != q.size()) throw InvalidArgument("kl_divergence: shape mismatch");
    if (p.kind != q.kind) throw InvalidArgument("kl_divergence: kind mismatch");
    const std::size_t n = p.size();
    double kl = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t j = 0; j < n; ++j) {
            const double ps = p.p(s, j);
            if (ps <= 0.0) continue; // 0 log 0 = 0
            const double qs = q.p(s, j);
            if (qs <= 0.0) return kInf;
            kl += ps * std::log(ps / qs);
        }
    }
    return kl;
}

double coupled_objective(const RealMatrix& y1, const RealMatrix& y2, const SimilarityMatrix& p1,
                         const SimilarityMatrix& p2, double zeta, ExponentMode mode) {
    if (zeta < 0.0) throw InvalidArgument("coupled_objective: zeta must be >= 0");
    if (y1.rows() != p1.size() || y2.rows() != p2.size())
        throw InvalidArgument("coupled_objective: point count disagrees with similarities");
    double f = kl_divergence(p1, map_similarities(y1, mode, p1.kind)) +
               kl_divergence(p2, map_similarities(y2, mode, p2.kind));
    if (zeta > 0.0) {
        if (y1.rows() != y2.rows() || y1.cols() != y2.cols())
            throw InvalidArgument("coupled_objective: Y1 and Y2 shapes disagree");
        const RealMatrix diff = y1 - y2;
        const double fro = diff.frobenius_norm();
        f += zeta * fro * fro;
    }
    return f;
}

namespace {

// gradient of sum_s KL(P_s || Q_s) with respect to the map points y
RealMatrix kl_gradient(const RealMatrix& y, const SimilarityMatrix& p, ExponentMode mode) {
    const std::size_t n = y.rows(), m = y.cols();
    const SimilarityMatrix q = map_similarities(y, mode, p.kind);
    RealMatrix g(n, m);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            const double coeff =
                (p.p(a, b) - q.p(a, b)) + (p.p(b, a) - q.p(b, a));
            if (coeff == 0.0) continue;
            if (mode == ExponentMode::PaperNorm) {
                const double d = std::sqrt(row_dist_sq(y, a, b));
                if (d < 1e-12) continue;
                for (std::size_t c = 0; c < m; ++c)
                    g(a, c) += coeff * (y(a, c) - y(b, c)) / d;
            } else {
                for (std::size_t c = 0; c < m; ++c)
                    g(a, c) += coeff * 2.0 * (y(a, c) - y(b, c));
            }
        }
    }
    return g;
}

struct FreeGradient {
    RealMatrix g1, g2;
};

FreeGradient objective_gradient(const RealMatrix& y1, const RealMatrix& y2,
                                const SimilarityMatrix& p1, const SimilarityMatrix& p2,
                                double zeta, ExponentMode mode) {
    FreeGradient fg{kl_gradient(y1, p1, mode), kl_gradient(y2, p2, mode)};
    if (zeta > 0.0) {
        for (std::size_t i = 0; i < y1.rows(); ++i) {
            for (std::size_t c = 0; c < y1.cols(); ++c) {
                const double d = 2.0 * zeta * (y1(i, c) - y2(i, c));
                fg.g1(i, c) += d;
                fg.g2(i, c) -= d;
            }
        }
    }
    return fg;
}

// nearest unitary to x (polar factor); throws when x is numerically singular
CMatrix polar_factor(const CMatrix& x) {
    const CMatrix h = x.adjoint() * x;
    EigenPairs eig = hermitian_eig(h);
    const double tr = h.trace().real();
    CMatrix isqrt(x.cols(), x.cols());
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const double ev = eig.values[j].real();
        if (ev <= 1e-14 * (tr + 1.0))
            throw NumericError("polar retraction: step made the mixer singular");
        const auto vj = eig.vectors.col(j);
        const double s = 1.0 / std::sqrt(ev);
        for (std::size_t r = 0; r < x.cols(); ++r)
            for (std::size_t c = 0; c < x.cols(); ++c)
                isqrt(r, c) += s * vj[r] * std::conj(vj[c]);
    }
    return x * isqrt;
}

} // namespace

double refine_mixer_objective(const Embedding& e, const CMatrix& mixer,
                              const SimilarityMatrix& p1, const SimilarityMatrix& p2,
                              double zeta, ExponentMode mode) {
    const CMatrix y = e.basis * mixer;
    return coupled_objective(y.real_part(), y.imag_part(), p1, p2, zeta, mode);
}

CMatrix refine_mixer_gradient(const Embedding& e, const CMatrix& mixer,
                              const SimilarityMatrix& p1, const SimilarityMatrix& p2,
                              double zeta, ExponentMode mode) {
    const CMatrix y = e.basis * mixer;
    const FreeGradient fg =
        objective_gradient(y.real_part(), y.imag_part(), p1, p2, zeta, mode);
    const CMatrix gy = CMatrix::from_parts(fg.g1, fg.g2);
    return e.basis.adjoint() * gy;
}

void validate(const RefineConfig& cfg) {
    if (cfg.zeta < 0.0) throw InvalidArgument("refine: zeta must be >= 0");
    if (!(cfg.perplexity > 1.0)) throw InvalidArgument("refine: perplexity must exceed 1");
    if (!(cfg.initial_step > 0.0)) throw InvalidArgument("refine: initial_step must be > 0");
    if (!(cfg.tolerance > 0.0)) throw InvalidArgument("refine: tolerance must be > 0");
}

RefineResult refine(const Embedding& e, const Dataset& x1, const Dataset& x2,
                    const RefineConfig& cfg) {
    validate(cfg);
    const std::size_t n = e.points();
    if (x1.size() != n || x2.size() != n)
        throw InvalidArgument("refine: datasets must have one point per embedded row");

    const SimilarityMatrix p1 = conditional_probs(
        x1.features, sigma_for_perplexity(x1.features, cfg.perplexity, cfg.exponent_mode),
        cfg.exponent_mode);
    const SimilarityMatrix p2 = conditional_probs(
        x2.features, sigma_for_perplexity(x2.features, cfg.perplexity, cfg.exponent_mode),
        cfg.exponent_mode);

    RefineResult out;
    if (cfg.max_iters == 0) {
        out.y1 = e.y1;
        out.y2 = e.y2;
        out.embedding = e;
        out.on_manifold = !cfg.optimize_free;
        out.trace.push_back(coupled_objective(e.y1, e.y2, p1, p2, cfg.zeta, cfg.exponent_mode));
        return out;
    }

    constexpr double kMinStep = 1e-12;

    if (!cfg.optimize_free) {
        // phase-rotated start: a real eigenbasis with the identity mixer has a
        // degenerate Im part, and pi/4 splits it evenly
        CMatrix u = e.mixer * std::exp(cplx(0.0, 3.14159265358979323846 / 4.0));
        double f = refine_mixer_objective(e, u, p1, p2, cfg.zeta, cfg.exponent_mode);
        out.trace.push_back(f);
        double step = cfg.initial_step;
        for (std::size_t it = 0; it < cfg.max_iters; ++it) {
            const CMatrix g = refine_mixer_gradient(e, u, p1, p2, cfg.zeta, cfg.exponent_mode);
            step = std::min(2.0 * step, cfg.initial_step);
            bool accepted = false;
            while (step >= kMinStep) {
                CMatrix trial;
                bool ok = true;
                try {
                    trial = polar_factor(u - g * cplx(step, 0.0));
                } catch (const NumericError&) {
                    ok = false;
                }
                if (ok) {
                    const double ft =
                        refine_mixer_objective(e, trial, p1, p2, cfg.zeta, cfg.exponent_mode);
                    if (ft < f) {
                        u = std::move(trial);
                        const double decrease = f - ft;
                        f = ft;
                        out.trace.push_back(f);
                        accepted = true;
                        if (decrease <= cfg.tolerance * std::max(1.0, std::abs(f)))
                            it = cfg.max_iters; // converged
                        break;
                    }
                }
                step *= 0.5;
            }
            if (!accepted) {
                out.stalled = true;
                break;
            }
        }
        out.embedding = make_embedding(e.source_spectrum, e.basis, u);
        out.y1 = out.embedding.y1;
        out.y2 = out.embedding.y2;
        out.on_manifold = true;
        return out;
    }

    // paper-literal mode: unconstrained gradient descent on (Y1, Y2)
    RealMatrix y1 = e.y1, y2 = e.y2;
    double f = coupled_objective(y1, y2, p1, p2, cfg.zeta, cfg.exponent_mode);
    out.trace.push_back(f);
    double step = cfg.initial_step;
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        const FreeGradient g = objective_gradient(y1, y2, p1, p2, cfg.zeta, cfg.exponent_mode);
        step = std::min(2.0 * step, cfg.initial_step);
        bool accepted = false;
        while (step >= kMinStep) {
            const RealMatrix t1 = y1 - g.g1 * step;
            const RealMatrix t2 = y2 - g.g2 * step;
            const double ft = coupled_objective(t1, t2, p1, p2, cfg.zeta, cfg.exponent_mode);
            if (ft < f) {
                y1 = t1;
                y2 = t2;
                const double decrease = f - ft;
                f = ft;
                out.trace.push_back(f);
                accepted = true;
                if (decrease <= cfg.tolerance * std::max(1.0, std::abs(f)))
                    it = cfg.max_iters;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            out.stalled = true;
            break;
        }
    }
    out.y1 = std::move(y1);
    out.y2 = std::move(y2);
    out.embedding = e;
    out.on_manifold = false;
    return out;
}

} // namespace calign
