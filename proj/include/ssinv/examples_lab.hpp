#pragma once

#include <cstdint>
#include <vector>

#include "ssinv/problem.hpp"

namespace ssinv {

/// Cumulative factorial cutoffs D(k) = 1! + 2! + ... + k!.
/// D(1)=1, D(2)=3, D(3)=9, D(4)=33, D(5)=153, D(6)=873.
std::int64_t factorial_cutoff(int k);

/// Indicator sequence that is 1 on the blocks [D(2k-1), D(2k)) and 0
/// elsewhere; its Abel averages oscillate between 0 and 1 as the discount
/// factor tends to 1.
int block_indicator(std::int64_t n);

struct AbelAverage {
    double value = 0.0;
    double tail_bound = 0.0; // alpha^{N+1} for the truncation used
    std::int64_t terms = 0;
};

/// f(alpha) = (1 - alpha) sum_i z_i alpha^i, truncated once the geometric
/// tail (1-alpha) sum_{i>N} alpha^i = alpha^{N+1} drops below tail_tol.
/// Rejects alpha outside [0, 1).
AbelAverage abel_average(double alpha, double tail_tol = 1e-13);

/// The stop-or-continue chain whose per-state costs encode the block
/// sequence: states -2, -1, 0, 1, ...; only state -1 has a choice.
/// Relative values are computed both in closed form (geometric series) and
/// by value iteration on the chain truncated at n_trunc with an absorbing
/// unit-cost tail; the two tables must agree within alpha^{n_trunc} + 1e-10.
struct ChainRelativeValues {
    double alpha = 0.0;
    std::int64_t n_trunc = 0;
    std::vector<double> closed_form; // index i holds u(i - 2)
    std::vector<double> iterated;
    double max_gap = 0.0;
    double agreement_bound = 0.0;

    double closed_at(std::int64_t n) const { return closed_form[static_cast<std::size_t>(n + 2)]; }
    double iterated_at(std::int64_t n) const { return iterated[static_cast<std::size_t>(n + 2)]; }
};

ChainRelativeValues chain_relative_values(double alpha, std::int64_t n_trunc);

/// n_trunc with alpha^{n_trunc} <= bound.
std::int64_t chain_truncation_for(double alpha, double bound = 1e-12);

struct OscillationRow {
    double alpha = 0.0;
    double f_alpha = 0.0;
    double u0 = 0.0; // relative value at state 0 = f + 1
    double truncation_bound = 0.0;
};

struct OscillationReport {
    std::vector<OscillationRow> rows;
    double spread = 0.0; // max - min of f over the supplied alphas
};

/// Tabulates f and u(0) at the supplied discount factors. The suggested
/// schedule alpha = 1 - 1/D(k), k = 2..6 exhibits a spread of at least 0.5.
OscillationReport oscillation_report(const std::vector<double>& alphas);

std::vector<double> suggested_oscillation_schedule();

/// The unit-demand instance (K = 1, c = 1, D = 1, h(x) = |x|/2) on a grid
/// of the given half width.
ProblemSpec unit_demand_instance(int half_width = 20);

/// Structural findings on the unit-demand instance at one discount factor:
/// a single period without terminal credit never orders; with the -c x
/// terminal credit the first stage is threshold-shaped; the infinite-horizon
/// greedy policy is exactly the extracted threshold policy.
struct SmallInstanceReport {
    bool one_period_never_orders = false;
    bool terminal_credit_stage_is_threshold = false;
    bool infinite_horizon_is_threshold = false;
    int s = 0;
    int S = 0;
    bool all_pass() const {
        return one_period_never_orders && terminal_credit_stage_is_threshold &&
               infinite_horizon_is_threshold;
    }
};

SmallInstanceReport small_instance_checks(double alpha = 0.75, int half_width = 20);

} // namespace ssinv
