#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Data-parallel primitives used by every hot loop in the library.
//
// rf2d::par holds the OpenMP kernels the production code calls; rf2d::ref
// holds plain serial implementations of the same contracts, kept around so
// tests can cross-check the parallel path and the benchmark can compare them.
//
// Reductions are chunked with a fixed chunk length and the partial sums are
// combined in chunk order, so every result is bit-identical regardless of the
// number of threads. Do not replace them with `omp reduction`, which combines
// partials in arrival order.

namespace rf2d {

inline constexpr std::size_t kReduceChunk = 4096;

// Sparse symmetric matrix in CSR form. Used for the stiffness operator
// (positive semidefinite, zero row sums) of a base surface.
struct CsrMatrix {
    std::size_t rows = 0;
    std::vector<std::size_t> row_ptr;  // size rows+1
    std::vector<unsigned> col;
    std::vector<double> val;

    static CsrMatrix from_triplets(std::size_t n,
                                   std::vector<std::tuple<unsigned, unsigned, double>> entries);
};

namespace ref {

double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
double min_value(std::span<const double> x);
double max_value(std::span<const double> x);

// y = A x
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

// uᵀ A u
double quad_form(const CsrMatrix& a, std::span<const double> u);

}  // namespace ref

namespace par {

// Applies f(i) for i in [0, n). Writes must be disjoint per index.
template <class F>
void map(std::size_t n, F&& f) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        f(static_cast<std::size_t>(i));
    }
}

// Deterministic chunked reduction of term(0) + ... + term(n-1).
template <class F>
double sum_terms(std::size_t n, F&& term) {
    if (n <= kReduceChunk) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += term(i);
        return s;
    }
    const std::size_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(nchunks);
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kReduceChunk;
        const std::size_t end = begin + kReduceChunk < n ? begin + kReduceChunk : n;
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) s += term(i);
        partial[static_cast<std::size_t>(c)] = s;
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
double min_value(std::span<const double> x);
double max_value(std::span<const double> x);

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
double quad_form(const CsrMatrix& a, std::span<const double> u);

}  // namespace par

}  // namespace rf2d
