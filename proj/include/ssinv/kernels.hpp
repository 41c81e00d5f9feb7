#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "ssinv/demand.hpp"
#include "ssinv/grid.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace ssinv {

/// Execution backend for the grid kernels. `serial` is the reference
/// implementation; `parallel` runs the same arithmetic per grid point under
/// OpenMP. Per-point atom sums use a fixed order, so both backends produce
/// bit-identical results.
enum class Exec { serial, parallel };

namespace kern {

/// out[i] = sum_d P(D=d) * f(x_i - d) for x_i on g. f is any callable on
/// integers (holding cost or value table with its extension rule).
template <class F>
void shifted_expectation_serial(const F& f, const DemandPmf& d, const Grid& g, double* out) {
    const int n = g.size();
    const int na = d.atom_count();
    const int* dv = d.values().data();
    const double* dp = d.probs().data();
    for (int i = 0; i < n; ++i) {
        const int x = g.point(i);
        double acc = 0.0;
        for (int k = 0; k < na; ++k) acc += dp[k] * f(x - dv[k]);
        out[i] = acc;
    }
}

template <class F>
void shifted_expectation_parallel(const F& f, const DemandPmf& d, const Grid& g, double* out) {
    const int n = g.size();
    const int na = d.atom_count();
    const int* dv = d.values().data();
    const double* dp = d.probs().data();
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i) {
        const int x = g.point(i);
        double acc = 0.0;
        for (int k = 0; k < na; ++k) acc += dp[k] * f(x - dv[k]);
        out[i] = acc;
    }
}

template <class F>
void shifted_expectation(Exec exec, const F& f, const DemandPmf& d, const Grid& g, double* out) {
    if (exec == Exec::parallel)
        shifted_expectation_parallel(f, d, g, out);
    else
        shifted_expectation_serial(f, d, g, out);
}

/// out[i] = min_{j >= i} g[j]; right-to-left running minimum (inherently a
/// scan, kept serial).
inline void suffix_min(const double* g, int n, double* out) {
    double running = g[n - 1];
    out[n - 1] = running;
    for (int i = n - 2; i >= 0; --i) {
        running = std::min(running, g[i]);
        out[i] = running;
    }
}

/// One Bellman combine: v[i] = min(K + sufmin[i], g[i]) - cbar * x_i.
/// Pass cbar = 0 for the zero-unit-cost model.
inline void order_or_not_serial(const double* g, const double* sufmin, double setup_cost,
                                double cbar, const Grid& grid, double* out) {
    const int n = grid.size();
    for (int i = 0; i < n; ++i)
        out[i] = std::min(setup_cost + sufmin[i], g[i]) - cbar * grid.point(i);
}

inline void order_or_not_parallel(const double* g, const double* sufmin, double setup_cost,
                                  double cbar, const Grid& grid, double* out) {
    const int n = grid.size();
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < n; ++i)
        out[i] = std::min(setup_cost + sufmin[i], g[i]) - cbar * grid.point(i);
}

inline void order_or_not(Exec exec, const double* g, const double* sufmin, double setup_cost,
                         double cbar, const Grid& grid, double* out) {
    if (exec == Exec::parallel)
        order_or_not_parallel(g, sufmin, setup_cost, cbar, grid, out);
    else
        order_or_not_serial(g, sufmin, setup_cost, cbar, grid, out);
}

/// max_i |a[i] - b[i]|; max-reduction is order-independent, so serial and
/// parallel agree exactly.
inline double max_abs_diff(Exec exec, const double* a, const double* b, int n) {
    double worst = 0.0;
    if (exec == Exec::parallel) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) reduction(max : worst)
#endif
        for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    } else {
        for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

inline int set_threads(int jobs) {
#if defined(_OPENMP)
    if (jobs > 0) omp_set_num_threads(jobs);
    return omp_get_max_threads();
#else
    (void)jobs;
    return 1;
#endif
}

} // namespace kern
} // namespace ssinv
