#pragma once

#include <cstdint>
#include <vector>

#include "calign/cmatrix.hpp"
#include "calign/dataset.hpp"

namespace calign {

enum class NeighborRule { EpsilonNeighborhood, KNearest };
enum class WeightRule { HeatKernel, Simple };

/// How a neighborhood graph and its weights are built.
struct GraphConfig {
    NeighborRule method = NeighborRule::KNearest;
    double epsilon = 0.0; // EpsilonNeighborhood: require > 0
    std::size_t k = 0;    // KNearest: require 1 <= k < n
    WeightRule weighting = WeightRule::Simple;
    double heat_t = 1.0;  // HeatKernel: require != 0
};

void validate(const GraphConfig& cfg, std::size_t n);

/// Symmetric boolean adjacency with a false diagonal.
class Adjacency {
public:
    Adjacency() = default;
    explicit Adjacency(std::size_t n) : n_(n), bits_(n * n, 0) {}

    std::size_t size() const { return n_; }
    bool at(std::size_t i, std::size_t j) const { return bits_[i * n_ + j] != 0; }
    void connect(std::size_t i, std::size_t j) {
        if (i == j) return;
        bits_[i * n_ + j] = 1;
        bits_[j * n_ + i] = 1;
    }
    std::size_t edge_count() const;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Real symmetric weight matrix with zero diagonal, plus the config that
/// produced it.
struct WeightMatrix {
    RealMatrix w;
    GraphConfig provenance;

    std::size_t size() const { return w.rows(); }
};

/// Vertices s, j adjacent iff ||x_s - x_j|| < eps (strict).
Adjacency epsilon_graph(const Dataset& data, double eps);

/// Vertices adjacent iff either is among the other's k nearest neighbours
/// (OR symmetrization); distance ties broken by lower index.
Adjacency knn_graph(const Dataset& data, std::size_t k);

/// w_sj = exp(-||x_s - x_j||^2 / t) on edges, 0 elsewhere. t != 0; a negative
/// t is accepted (weights then exceed 1).
WeightMatrix heat_weights(const Dataset& data, const Adjacency& adj, double t);

/// w_sj = 1 on edges, 0 elsewhere.
WeightMatrix simple_weights(const Adjacency& adj);

/// Build adjacency + weights for a dataset in one step.
WeightMatrix build_weights(const Dataset& data, const GraphConfig& cfg);

/// Column sums of a real weight matrix; throws IsolatedVertex on a zero sum.
std::vector<double> degree_vector(const WeightMatrix& w);

/// Column sums of a complex weight matrix as a diagonal matrix; throws
/// IsolatedVertex when some |D_jj| = 0.
CMatrix degree_matrix(const CMatrix& w);

} // namespace calign
