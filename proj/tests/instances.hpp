#pragma once

// Shared test instances. canon1 is the workhorse; canon2 adds a zero-demand
// atom and asymmetric piecewise-linear convex costs; canon3 is quasiconvex
// but deliberately not convex (the upward slopes are not monotone).

#include <algorithm>
#include <vector>

#include "ssinv/problem.hpp"

namespace ssinv::testing {

inline ProblemSpec canon1() {
    return ProblemSpec(10.0, 2.0, DemandPmf({{1, 0.5}, {2, 0.3}, {3, 0.2}}),
                       HoldingCost::two_sided_linear(Grid(-50, 50), 1.0, 3.0));
}

/// Piecewise-linear cost: slope -left_slope on x < 0, then slopes[k] on
/// [breaks[k], breaks[k+1]) with breaks[0] = 0; h(0) = 0.
inline HoldingCost piecewise(Grid g, double left_slope, const std::vector<double>& breaks,
                             const std::vector<double>& slopes, double right_slope) {
    std::vector<double> table(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) {
        const int x = g.point(i);
        double v = 0.0;
        if (x < 0) {
            v = left_slope * static_cast<double>(-x);
        } else {
            for (std::size_t k = 0; k < slopes.size(); ++k) {
                const double lo = breaks[k];
                const double hi =
                    k + 1 < breaks.size() ? breaks[k + 1] : static_cast<double>(x);
                const double overlap = std::min(static_cast<double>(x), hi) - lo;
                if (overlap > 0.0) v += slopes[k] * overlap;
            }
        }
        table[static_cast<std::size_t>(i)] = v;
    }
    return HoldingCost(g, std::move(table), left_slope, right_slope);
}

inline ProblemSpec canon2() {
    // Convex piecewise linear: slopes -2 | 0.5 | 1.5 with the kink at 8.
    return ProblemSpec(5.0, 1.0,
                       DemandPmf({{0, 0.2}, {1, 0.35}, {2, 0.25}, {3, 0.15}, {4, 0.05}}),
                       piecewise(Grid(-40, 60), 2.0, {0.0, 8.0}, {0.5, 1.5}, 1.5));
}

inline ProblemSpec canon3() {
    // Quasiconvex, not convex: upward slopes 0.5 | 2.5 | 1.0.
    return ProblemSpec(8.0, 2.0, DemandPmf({{1, 0.5}, {2, 0.3}, {3, 0.2}}),
                       piecewise(Grid(-45, 55), 3.0, {0.0, 10.0, 20.0}, {0.5, 2.5, 1.0}, 1.0));
}

} // namespace ssinv::testing
