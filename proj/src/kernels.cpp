#include "rf2d/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace rf2d {

CsrMatrix CsrMatrix::from_triplets(std::size_t n,
                                   std::vector<std::tuple<unsigned, unsigned, double>> entries) {
    // Accumulate duplicates, then pack row-major with sorted columns.
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) {
                  return std::make_pair(std::get<0>(a), std::get<1>(a)) <
                         std::make_pair(std::get<0>(b), std::get<1>(b));
              });
    CsrMatrix m;
    m.rows = n;
    m.row_ptr.assign(n + 1, 0);
    std::vector<unsigned> col;
    std::vector<double> val;
    col.reserve(entries.size());
    val.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size();) {
        const unsigned r = std::get<0>(entries[k]);
        const unsigned c = std::get<1>(entries[k]);
        if (r >= n || c >= n) throw std::invalid_argument("CsrMatrix: index out of range");
        double v = 0.0;
        while (k < entries.size() && std::get<0>(entries[k]) == r && std::get<1>(entries[k]) == c) {
            v += std::get<2>(entries[k]);
            ++k;
        }
        col.push_back(c);
        val.push_back(v);
        m.row_ptr[r + 1]++;
    }
    for (std::size_t r = 0; r < n; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
    m.col = std::move(col);
    m.val = std::move(val);
    return m;
}

namespace ref {

double sum(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double min_value(std::span<const double> x) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : x) m = std::min(m, v);
    return m;
}

double max_value(std::span<const double> x) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : x) m = std::max(m, v);
    return m;
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
        y[i] = s;
    }
}

double quad_form(const CsrMatrix& a, std::span<const double> u) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        double row = 0.0;
        for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) row += a.val[k] * u[a.col[k]];
        s += u[i] * row;
    }
    return s;
}

}  // namespace ref

namespace par {

double sum(std::span<const double> x) {
    return sum_terms(x.size(), [&](std::size_t i) { return x[i]; });
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    return sum_terms(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double min_value(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return std::numeric_limits<double>::infinity();
    const std::size_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(nchunks, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kReduceChunk;
        const std::size_t end = std::min(n, begin + kReduceChunk);
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = begin; i < end; ++i) m = std::min(m, x[i]);
        partial[static_cast<std::size_t>(c)] = m;
    }
    double m = std::numeric_limits<double>::infinity();
    for (double p : partial) m = std::min(m, p);
    return m;
}

double max_value(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return -std::numeric_limits<double>::infinity();
    const std::size_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(nchunks, -std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kReduceChunk;
        const std::size_t end = std::min(n, begin + kReduceChunk);
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t i = begin; i < end; ++i) m = std::max(m, x[i]);
        partial[static_cast<std::size_t>(c)] = m;
    }
    double m = -std::numeric_limits<double>::infinity();
    for (double p : partial) m = std::max(m, p);
    return m;
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
    if (x.size() != a.rows || y.size() != a.rows) throw std::invalid_argument("spmv: size mismatch");
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(a.rows); ++i) {
        double s = 0.0;
        for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
        y[i] = s;
    }
}

double quad_form(const CsrMatrix& a, std::span<const double> u) {
    if (u.size() != a.rows) throw std::invalid_argument("quad_form: size mismatch");
    return sum_terms(a.rows, [&](std::size_t i) {
        double row = 0.0;
        for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) row += a.val[k] * u[a.col[k]];
        return u[i] * row;
    });
}

}  // namespace par

}  // namespace rf2d
