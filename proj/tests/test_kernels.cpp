#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "doctest.h"
#include "rf2d/kernels.hpp"

using namespace rf2d;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

CsrMatrix ring_laplacian(std::size_t n) {
    std::vector<std::tuple<unsigned, unsigned, double>> trips;
    for (unsigned i = 0; i < n; ++i) {
        const unsigned j = (i + 1) % n;
        trips.emplace_back(i, i, 1.0);
        trips.emplace_back(j, j, 1.0);
        trips.emplace_back(i, j, -1.0);
        trips.emplace_back(j, i, -1.0);
    }
    return CsrMatrix::from_triplets(n, std::move(trips));
}

}  // namespace

TEST_CASE("parallel kernels agree with the serial reference") {
    const std::size_t n = 40000;
    const auto a = random_vector(n, 1);
    const auto b = random_vector(n, 2);
    CHECK(par::sum(a) == doctest::Approx(ref::sum(a)).epsilon(1e-13));
    CHECK(par::dot(a, b) == doctest::Approx(ref::dot(a, b)).epsilon(1e-13));
    CHECK(par::min_value(a) == ref::min_value(a));
    CHECK(par::max_value(a) == ref::max_value(a));

    const CsrMatrix lap = ring_laplacian(n);
    std::vector<double> y_par(n), y_ref(n);
    par::spmv(lap, a, y_par);
    ref::spmv(lap, a, y_ref);
    for (std::size_t i = 0; i < n; i += 997) CHECK(y_par[i] == y_ref[i]);
    CHECK(par::quad_form(lap, a) == doctest::Approx(ref::quad_form(lap, a)).epsilon(1e-12));
}

TEST_CASE("reductions are bit-identical across thread counts") {
    const std::size_t n = 100000;
    const auto a = random_vector(n, 3);
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double s1 = par::sum(a);
    const double d1 = par::dot(a, a);
    omp_set_num_threads(2);
    const double s2 = par::sum(a);
    const double d2 = par::dot(a, a);
    omp_set_num_threads(saved);
    CHECK(s1 == s2);
    CHECK(d1 == d2);
#else
    CHECK(par::sum(a) == par::sum(a));
#endif
}

TEST_CASE("csr from_triplets accumulates duplicates") {
    std::vector<std::tuple<unsigned, unsigned, double>> trips = {
        {0, 0, 1.0}, {0, 0, 2.0}, {1, 0, -1.0}, {0, 1, 0.5}};
    const CsrMatrix m = CsrMatrix::from_triplets(2, std::move(trips));
    std::vector<double> x = {1.0, 1.0}, y(2);
    ref::spmv(m, x, y);
    CHECK(y[0] == doctest::Approx(3.5));
    CHECK(y[1] == doctest::Approx(-1.0));
}

TEST_CASE("ring laplacian quadratic form matches the edge sum") {
    const std::size_t n = 64;
    const CsrMatrix lap = ring_laplacian(n);
    const auto u = random_vector(n, 4);
    double expect = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = u[i] - u[(i + 1) % n];
        expect += d * d;
    }
    CHECK(par::quad_form(lap, u) == doctest::Approx(expect).epsilon(1e-12));
}
