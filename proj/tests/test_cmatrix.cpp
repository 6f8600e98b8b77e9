#include <doctest.h>

#include "calign/cmatrix.hpp"
#include "calign/rng.hpp"

using namespace calign;

namespace {

CMatrix random_square(Rng& rng, std::size_t n) {
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx(rng.normal(), rng.normal());
    return a;
}

} // namespace

TEST_CASE("construction rejects non-finite entries and bad shapes") {
    CHECK_THROWS_AS(CMatrix(2, 2, {cplx(1, 0), cplx(0, 0), cplx(0, 0)}), InvalidArgument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(CMatrix(1, 2, {cplx(inf, 0), cplx(0, 0)}), InvalidArgument);
    CHECK_THROWS_AS(CMatrix(1, 1, {cplx(0, std::nan(""))}), InvalidArgument);
}

TEST_CASE("hermitian components of [[i]]") {
    const CMatrix a(1, 1, {cplx(0, 1)});
    const auto [re, im] = hermitian_components(a);
    CHECK(re(0, 0) == cplx(0, 0));
    CHECK(im(0, 0) == cplx(1, 0));
}

TEST_CASE("hermitian input splits as (H, 0)") {
    const CMatrix h(2, 2, {cplx(2, 0), cplx(1, -3), cplx(1, 3), cplx(-1, 0)});
    const auto [re, im] = hermitian_components(h);
    CHECK((re - h).frobenius_norm() == doctest::Approx(0.0));
    CHECK(im.frobenius_norm() == doctest::Approx(0.0));
}

TEST_CASE("hermitian components reconstruct the original") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const CMatrix a = random_square(rng, n);
        const auto [re, im] = hermitian_components(a);
        CHECK(hermitian_residual(re) <= 1e-12);
        CHECK(hermitian_residual(im) <= 1e-12);
        const CMatrix back = re + im * cplx(0, 1);
        CHECK((back - a).frobenius_norm() <= 1e-14 * (1.0 + a.frobenius_norm()));
    }
    CHECK_THROWS_AS(hermitian_components(CMatrix(2, 3)), InvalidArgument);
}

TEST_CASE("is_normal on the canonical cases") {
    const CMatrix w(2, 2, {cplx(0, 0), cplx(0, 1), cplx(0, 1), cplx(0, 0)});
    CHECK(is_normal(w, 1e-10)); // W W* = W* W = I
    const CMatrix nil(2, 2, {cplx(0, 0), cplx(1, 0), cplx(0, 0), cplx(0, 0)});
    CHECK_FALSE(is_normal(nil, 1e-10));
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<cplx> d(4);
        for (auto& v : d) v = cplx(rng.normal(), rng.normal());
        CHECK(is_normal(CMatrix::diagonal(d), 1e-10));
    }
    CHECK_THROWS_AS(is_normal(CMatrix(2, 3), 1e-10), InvalidArgument);
    CHECK_THROWS_AS(is_normal(w, 0.0), InvalidArgument);
}

TEST_CASE("matrix product against a hand-written triple loop") {
    Rng rng(3);
    const CMatrix a = random_square(rng, 4);
    CMatrix b(4, 3);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j) b(i, j) = cplx(rng.normal(), rng.normal());
    const CMatrix ab = a * b;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            cplx s(0, 0);
            for (std::size_t k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
            CHECK(std::abs(ab(i, j) - s) <= 1e-14);
        }
    }
    CHECK_THROWS_AS(b * a * b, InvalidArgument);
}

TEST_CASE("adjoint, trace and norms") {
    const CMatrix a(2, 2, {cplx(1, 2), cplx(3, -1), cplx(0, 5), cplx(-2, 0)});
    const CMatrix ah = a.adjoint();
    CHECK(ah(0, 1) == std::conj(a(1, 0)));
    CHECK(a.trace() == cplx(-1, 2));
    CHECK(a.frobenius_norm() ==
          doctest::Approx(std::sqrt(1. + 4 + 9 + 1 + 25 + 4)));
    CHECK(a.max_abs() == doctest::Approx(5.0));
}
