#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssinv/demand.hpp"
#include "ssinv/grid.hpp"
#include "ssinv/holding.hpp"
#include "ssinv/kernels.hpp"

namespace ssinv {

/// One instance of the setup-cost inventory model with backorders.
/// The state grid coincides with the holding-cost table range.
struct ProblemSpec {
    double setup_cost;   // K > 0, charged whenever a positive amount is ordered
    double unit_cost;    // per-unit ordering cost > 0
    DemandPmf demand;
    HoldingCost holding;

    ProblemSpec(double K, double c_unit, DemandPmf d, HoldingCost h);

    const Grid& grid() const { return holding.grid(); }
};

/// Table of E[h_a(x - D)] on the grid, where
/// h_a(x) = h(x) + (1 - a) c x + c E[D].
struct TransformedCost {
    double alpha = 1.0;
    Grid grid;
    std::vector<double> values;

    double at(int x) const { return values[static_cast<std::size_t>(grid.index(x))]; }
};

/// Witness triple x < y < z with f(y) > max(f(x), f(z)).
struct QuasiconvexityWitness {
    int x_left, x_mid, x_right;
    double f_left, f_mid, f_right;
};

/// Result of checking the standing assumptions at one discount factor.
/// Failures are reported, not thrown.
struct AssumptionReport {
    double alpha = 1.0;
    bool quasiconvex = false;
    std::optional<QuasiconvexityWitness> witness;
    bool left_limit_ok = false;             // lim_{x->-inf} E[h_a(x-D)] > K + min
    bool left_limit_infinite = false;       // true iff left tail slope > (1-a)*c
    double left_limit_value = 0.0;          // finite limit when not infinite
    bool strictly_decreasing_left_of_r = false;
    int r_alpha = 0;                        // smallest minimizer of E[h_a(x-D)]
    int s_star_alpha = 0;                   // smallest x > r with E[h_a(x-D)] >= K + min
    bool s_star_on_grid = true;
    double alpha_star_bound = 0.0;          // max(1 - left_slope / c, 0)

    bool all_pass() const { return quasiconvex && left_limit_ok && strictly_decreasing_left_of_r; }
};

/// E[h(x - D)] for a single state, by direct summation over demand atoms
/// with tail extrapolation. Total: never fails.
double expected_shifted_cost(const HoldingCost& h, const DemandPmf& d, int x);

/// Full table of E[h(x - D)] on the grid.
std::vector<double> expected_shifted_cost_table(const ProblemSpec& p,
                                                Exec exec = Exec::parallel);

/// Table of E[h_a(x - D)] = E[h(x - D)] + (1 - a) c x + a c E[D].
/// Rejects alpha outside (0, 1].
TransformedCost transformed_expected_cost(const ProblemSpec& p, double alpha,
                                          Exec exec = Exec::parallel);

/// Checks quasiconvexity of E[h_a(x - D)] on the grid, the left-limit
/// condition (analytic for linear tails), strict decrease left of r_alpha,
/// and computes r_alpha and S*_alpha.
AssumptionReport check_assumptions(const ProblemSpec& p, double alpha,
                                   Exec exec = Exec::parallel);

/// For convex h with linear left tail: the threshold max(1 - sigma_L / c, 0)
/// above which the standing assumptions hold for every discount factor.
/// Throws (naming the violating index) if h is not convex.
double alpha_star_for_convex(const ProblemSpec& p);

/// Grid quasiconvexity: nonincreasing then nondecreasing, plateaus allowed.
/// Returns a violation witness, or nullopt if quasiconvex.
std::optional<QuasiconvexityWitness> quasiconvexity_violation(const std::vector<double>& f,
                                                              const Grid& g,
                                                              double tol = 0.0);

} // namespace ssinv
