#include <doctest.h>

#include <cmath>

#include "calign/graph.hpp"
#include "calign/rng.hpp"

using namespace calign;

namespace {

Dataset collinear_points() {
    // (0,0), (1,0), (3,0): pairwise distances 1, 2, 3
    Dataset d;
    d.ids = {"a", "b", "c"};
    d.features = RealMatrix(3, 2, {0, 0, 1, 0, 3, 0});
    return d;
}

Dataset random_points(Rng& rng, std::size_t n, std::size_t dim) {
    Dataset d;
    d.features = RealMatrix(n, dim);
    for (std::size_t i = 0; i < n; ++i) {
        d.ids.push_back("p" + std::to_string(i));
        for (std::size_t c = 0; c < dim; ++c) d.features(i, c) = rng.normal();
    }
    return d;
}

} // namespace

TEST_CASE("epsilon_graph edge sets at the three example radii") {
    const Dataset d = collinear_points();

    const Adjacency a1 = epsilon_graph(d, 1.5);
    CHECK(a1.at(0, 1));
    CHECK_FALSE(a1.at(0, 2));
    CHECK_FALSE(a1.at(1, 2));
    CHECK(a1.edge_count() == 1);

    CHECK(epsilon_graph(d, 0.5).edge_count() == 0);
    CHECK(epsilon_graph(d, 10.0).edge_count() == 3);

    // strict inequality: distance exactly eps is not an edge
    CHECK_FALSE(epsilon_graph(d, 1.0).at(0, 1));
    CHECK_THROWS_AS(epsilon_graph(d, 0.0), InvalidArgument);
}

TEST_CASE("knn_graph OR-symmetrization on the collinear example") {
    const Dataset d = collinear_points();
    // nearest lists: {b}, {a}, {b}; OR gives edges ab and bc
    const Adjacency a = knn_graph(d, 1);
    CHECK(a.at(0, 1));
    CHECK(a.at(1, 2));
    CHECK_FALSE(a.at(0, 2));

    CHECK(knn_graph(d, 2).edge_count() == 3); // k = n-1 -> complete
    CHECK_THROWS_AS(knn_graph(d, 0), InvalidArgument);
    CHECK_THROWS_AS(knn_graph(d, 3), InvalidArgument);
}

TEST_CASE("duplicated points are mutually adjacent first") {
    Dataset d;
    d.ids = {"a", "b", "c"};
    d.features = RealMatrix(3, 1, {5.0, 5.0, 100.0});
    const Adjacency a = knn_graph(d, 1);
    CHECK(a.at(0, 1)); // the zero-distance pair picks each other
    // point 2 ties between 0 and 1; the lower index wins
    CHECK(a.at(2, 0));
    CHECK_FALSE(a.at(2, 1));
}

TEST_CASE("heat_weights formula and edge cases") {
    const Dataset d = collinear_points();
    const Adjacency adj = epsilon_graph(d, 1.5);
    const WeightMatrix w = heat_weights(d, adj, 1.0);
    CHECK(w.w(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(w.w(1, 0) == w.w(0, 1));
    CHECK(w.w(0, 2) == 0.0);
    CHECK(w.w(0, 0) == 0.0);

    Dataset co;
    co.ids = {"a", "b"};
    co.features = RealMatrix(2, 1, {2.0, 2.0});
    const WeightMatrix wc = heat_weights(co, knn_graph(co, 1), 3.0);
    CHECK(wc.w(0, 1) == 1.0); // coincident adjacent points

    CHECK_THROWS_AS(heat_weights(d, adj, 0.0), InvalidArgument);
}

TEST_CASE("simple_weights") {
    const Dataset d = collinear_points();
    const WeightMatrix p3 = simple_weights(epsilon_graph(d, 1.5));
    CHECK(p3.w(0, 1) == 1.0);
    CHECK(p3.w(0, 2) == 0.0);

    const WeightMatrix k3 = simple_weights(epsilon_graph(d, 10.0));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(k3.w(i, j) == (i == j ? 0.0 : 1.0));

    CHECK(simple_weights(Adjacency(3)).w.frobenius_norm() == 0.0);
}

TEST_CASE("degree_vector and degree_matrix") {
    const Dataset d = collinear_points();
    const WeightMatrix k3 = simple_weights(epsilon_graph(d, 10.0));
    const auto deg = degree_vector(k3);
    CHECK(deg == std::vector<double>{2.0, 2.0, 2.0});

    // P3 path weights: degrees 1, 2, 1
    RealMatrix p3(3, 3, {0, 1, 0, 1, 0, 1, 0, 1, 0});
    const auto degp = degree_vector({p3, GraphConfig{}});
    CHECK(degp == std::vector<double>{1.0, 2.0, 1.0});

    RealMatrix zero_row(2, 2);
    CHECK_THROWS_AS(degree_vector({zero_row, GraphConfig{}}), IsolatedVertex);

    CMatrix cw(2, 2);
    cw(0, 1) = cplx(0.5, 0.5);
    cw(1, 0) = cplx(0.5, 0.5);
    const CMatrix cd = degree_matrix(cw);
    CHECK(cd(0, 0) == cplx(0.5, 0.5));
    CHECK(cd(1, 1) == cplx(0.5, 0.5));
}

TEST_CASE("adjacency is always symmetric with a false diagonal") {
    Rng rng(99);
    for (int trial = 0; trial < 8; ++trial) {
        const Dataset d = random_points(rng, 6 + trial, 3);
        const Adjacency eps = epsilon_graph(d, 1.0 + 0.3 * trial);
        const Adjacency knn = knn_graph(d, 1 + trial % 4);
        for (std::size_t i = 0; i < d.size(); ++i) {
            CHECK_FALSE(eps.at(i, i));
            CHECK_FALSE(knn.at(i, i));
            for (std::size_t j = 0; j < d.size(); ++j) {
                CHECK(eps.at(i, j) == eps.at(j, i));
                CHECK(knn.at(i, j) == knn.at(j, i));
            }
        }
    }
}

TEST_CASE("epsilon monotonicity: smaller radius gives a subset of edges") {
    Rng rng(123);
    for (int trial = 0; trial < 6; ++trial) {
        const Dataset d = random_points(rng, 8, 2);
        const double e1 = rng.uniform(0.3, 1.5);
        const double e2 = e1 + rng.uniform(0.1, 1.5);
        const Adjacency a1 = epsilon_graph(d, e1);
        const Adjacency a2 = epsilon_graph(d, e2);
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size(); ++j)
                if (a1.at(i, j)) CHECK(a2.at(i, j));
    }
}

TEST_CASE("heat weights lie in (0, 1] exactly on edges for t > 0") {
    Rng rng(7);
    const Dataset d = random_points(rng, 10, 3);
    const Adjacency adj = knn_graph(d, 3);
    const WeightMatrix w = heat_weights(d, adj, 2.5);
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (i == j) continue;
            if (adj.at(i, j)) {
                CHECK(w.w(i, j) > 0.0);
                CHECK(w.w(i, j) <= 1.0);
            } else {
                CHECK(w.w(i, j) == 0.0);
            }
        }
    }
    // degree of the simple weighting equals the vertex degree
    const WeightMatrix sw = simple_weights(adj);
    const auto deg = degree_vector(sw);
    for (std::size_t j = 0; j < d.size(); ++j) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (adj.at(i, j)) ++count;
        CHECK(deg[j] == static_cast<double>(count));
    }
}

TEST_CASE("graph config validation") {
    CHECK_THROWS_AS(validate(GraphConfig{NeighborRule::EpsilonNeighborhood, -1.0, 0,
                                         WeightRule::Simple, 1.0},
                             5),
                    InvalidArgument);
    CHECK_THROWS_AS(
        validate(GraphConfig{NeighborRule::KNearest, 0.0, 5, WeightRule::Simple, 1.0}, 5),
        InvalidArgument);
    CHECK_THROWS_AS(
        validate(GraphConfig{NeighborRule::KNearest, 0.0, 2, WeightRule::HeatKernel, 0.0}, 5),
        InvalidArgument);
}
