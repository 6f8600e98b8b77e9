#include "calign/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace calign {

void validate(const GraphConfig& cfg, std::size_t n) {
    if (cfg.method == NeighborRule::EpsilonNeighborhood) {
        if (!(cfg.epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
    } else {
        if (cfg.k < 1 || cfg.k >= n)
            throw InvalidArgument("k must satisfy 1 <= k < n (n = " + std::to_string(n) + ")");
    }
    if (cfg.weighting == WeightRule::HeatKernel && cfg.heat_t == 0.0)
        throw InvalidArgument("heat kernel t must be nonzero");
}

std::size_t Adjacency::edge_count() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (at(i, j)) ++c;
    return c;
}

Adjacency epsilon_graph(const Dataset& data, double eps) {
    validate(data);
    if (!(eps > 0.0)) throw InvalidArgument("epsilon must be > 0");
    const std::size_t n = data.size();
    Adjacency adj(n);
    const double eps2 = eps * eps;
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t j = s + 1; j < n; ++j)
            if (row_dist_sq(data.features, s, j) < eps2) adj.connect(s, j);
    return adj;
}

Adjacency knn_graph(const Dataset& data, std::size_t k) {
    validate(data);
    const std::size_t n = data.size();
    if (k < 1 || k >= n) throw InvalidArgument("k must satisfy 1 <= k < n");
    Adjacency adj(n);
    std::vector<double> dist(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t j = 0; j < n; ++j) dist[j] = row_dist_sq(data.features, s, j);
        std::vector<std::size_t> order;
        order.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != s) order.push_back(j); // never own neighbour
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (dist[a] != dist[b]) return dist[a] < dist[b];
            return a < b; // ties to the lower index
        });
        for (std::size_t r = 0; r < k; ++r) adj.connect(s, order[r]);
    }
    return adj;
}

WeightMatrix heat_weights(const Dataset& data, const Adjacency& adj, double t) {
    if (t == 0.0) throw InvalidArgument("heat kernel t must be nonzero");
    if (adj.size() != data.size()) throw InvalidArgument("heat_weights: adjacency size mismatch");
    const std::size_t n = adj.size();
    RealMatrix w(n, n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t j = s + 1; j < n; ++j) {
            if (!adj.at(s, j)) continue;
            const double v = std::exp(-row_dist_sq(data.features, s, j) / t);
            w(s, j) = v;
            w(j, s) = v;
        }
    }
    GraphConfig cfg;
    cfg.weighting = WeightRule::HeatKernel;
    cfg.heat_t = t;
    return {std::move(w), cfg};
}

WeightMatrix simple_weights(const Adjacency& adj) {
    const std::size_t n = adj.size();
    RealMatrix w(n, n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t j = s + 1; j < n; ++j)
            if (adj.at(s, j)) {
                w(s, j) = 1.0;
                w(j, s) = 1.0;
            }
    GraphConfig cfg;
    cfg.weighting = WeightRule::Simple;
    return {std::move(w), cfg};
}

WeightMatrix build_weights(const Dataset& data, const GraphConfig& cfg) {
    validate(cfg, data.size());
    Adjacency adj = cfg.method == NeighborRule::EpsilonNeighborhood
                        ? epsilon_graph(data, cfg.epsilon)
                        : knn_graph(data, cfg.k);
    WeightMatrix w = cfg.weighting == WeightRule::HeatKernel
                         ? heat_weights(data, adj, cfg.heat_t)
                         : simple_weights(adj);
    w.provenance = cfg;
    return w;
}

std::vector<double> degree_vector(const WeightMatrix& wm) {
    const std::size_t n = wm.size();
    std::vector<double> d(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t s = 0; s < n; ++s) d[j] += wm.w(s, j);
        if (d[j] == 0.0) throw IsolatedVertex(j);
    }
    return d;
}

CMatrix degree_matrix(const CMatrix& w) {
    if (!w.is_square()) throw InvalidArgument("degree_matrix: non-square input");
    const std::size_t n = w.rows();
    std::vector<cplx> d(n, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t s = 0; s < n; ++s) d[j] += w(s, j);
        if (std::abs(d[j]) == 0.0) throw IsolatedVertex(j);
    }
    return CMatrix::diagonal(d);
}

} // namespace calign
