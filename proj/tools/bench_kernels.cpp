// Compares the OpenMP kernels against their serial reference twins on the
// sizes the verification suites actually use.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rf2d/base_surface.hpp"
#include "rf2d/flow.hpp"
#include "rf2d/kernels.hpp"
#include "rf2d/surface.hpp"

using namespace rf2d;
using clock_type = std::chrono::steady_clock;

namespace {

template <class F>
double time_ms(int reps, F&& body) {
    body();  // warm up
    const auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) body();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    const auto torus = BaseSurface::torus(256);
    const std::size_t n = torus->node_count;
    Field x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(0.01 * static_cast<double>(i));
    ConformalSurface s(torus, x, 0.0);

    report("spmv (256x256 torus)", time_ms(50, [&] { ref::spmv(torus->stiffness, x, y); }),
           time_ms(50, [&] { par::spmv(torus->stiffness, x, y); }));

    volatile double sink = 0.0;
    report("sum", time_ms(200, [&] { sink = ref::sum(x); }),
           time_ms(200, [&] { sink = par::sum(x); }));
    report("dot", time_ms(200, [&] { sink = ref::dot(x, x); }),
           time_ms(200, [&] { sink = par::dot(x, x); }));
    report("quad_form", time_ms(50, [&] { sink = ref::quad_form(torus->stiffness, x); }),
           time_ms(50, [&] { sink = par::quad_form(torus->stiffness, x); }));

    // Whole-step comparison: the production flow step against a plain serial
    // re-implementation of the same RK4 update.
    auto serial_step = [&](const Field& phi, double dt) {
        const auto& b = *torus;
        auto rhs = [&](const Field& p, Field& out) {
            Field sp(b.node_count);
            ref::spmv(b.stiffness, p, sp);
            for (std::size_t i = 0; i < b.node_count; ++i)
                out[i] = std::exp(-2.0 * p[i]) *
                         (-sp[i] / b.weights[i] - 0.5 * b.base_scalar_curvature);
        };
        Field k1(n), k2(n), k3(n), k4(n), tmp(n), out(n);
        rhs(phi, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = phi[i] + 0.5 * dt * k1[i];
        rhs(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = phi[i] + 0.5 * dt * k2[i];
        rhs(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = phi[i] + dt * k3[i];
        rhs(tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = phi[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        return out;
    };
    StepControl ctrl;
    ctrl.t_end = 1e9;
    Field phi(n, 0.05);
    ConformalSurface sp(torus, phi, 0.0);
    report("rk4 flow step",
           time_ms(20, [&] { sink = serial_step(phi, 1e-5)[0]; }),
           time_ms(20, [&] { sink = flow_step(sp, ctrl).phi[0]; }));
    (void)sink;
    return 0;
}
