#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssinv/problem.hpp"
#include "ssinv/solver.hpp"
#include "ssinv/value_table.hpp"

namespace ssinv {

/// Order up to S whenever x < s (also at x = s when order_at_s is set);
/// otherwise do not order.
struct SsPolicy {
    int s = 0;
    int S = 0;
    bool order_at_s = false;

    bool orders_at(int x) const { return x < s || (order_at_s && x == s); }
    int action(int x) const { return orders_at(x) ? S - x : 0; }
};

/// Discounted policy value, solved exactly: states below s are affine in
/// the continuation at S, so one ascending pass plus a scalar solve gives
/// the fixed point (method "linear-solve").
struct DiscountedEval {
    ValueTable v;
    double residual = 0.0; // max |v - (c + alpha P v)| on the grid
};

DiscountedEval evaluate_discounted(const SsPolicy& pol, const ProblemSpec& p, double alpha);

/// Average cost of the policy chain: stationary distribution of the
/// recurrent class [s - d_max, S] by damped power iteration, then
/// w = stationary expectation of the one-step cost (method "stationary").
struct AverageEval {
    double w = 0.0;
    int support_lo = 0; // stationary vector covers [support_lo, support_hi]
    int support_hi = 0;
    std::vector<double> stationary;
    std::vector<double> bias; // relative values of the chain, zero at S
    bool valid = false;
    std::string note;
};

AverageEval evaluate_average(const SsPolicy& pol, const ProblemSpec& p, double tol = 1e-13,
                             bool reducibility_probe = true);

enum class Criterion { discounted, average };

struct SearchResult {
    SsPolicy best;
    double best_value = 0.0; // v at the reference state, or the gain w
    int reference_state = 0;
    long pairs_evaluated = 0;
};

/// Evaluates every (s, S) pair with lo <= s <= S <= hi and returns the
/// minimizer (ties resolved to the lexicographically smallest pair). The
/// default window is [x_min, S*_alpha + max(5, d_max)].
SearchResult exhaustive_ss_search(const ProblemSpec& p, Criterion crit, double alpha,
                                  std::optional<std::pair<int, int>> window = std::nullopt,
                                  Exec exec = Exec::parallel);

struct SimStats {
    long horizon = 0;
    int replications = 0;
    std::uint64_t seed = 0;
    double mean_cost_per_period = 0.0;
    double ci_halfwidth = 0.0; // 95%, across replications (batches if one rep)
    std::vector<double> rep_means;
    int min_inventory = 0;
    int max_inventory = 0;
};

/// Seeded simulation of the policy under i.i.d. demand; per-replication
/// streams are split deterministically from the master seed, so results are
/// bit-identical for identical inputs.
SimStats simulate(const SsPolicy& pol, const ProblemSpec& p, long horizon, int replications,
                  std::uint64_t seed, std::optional<int> start = std::nullopt);

/// Renewal-sum evaluation of the zero-unit-cost model's relative value at
/// x > s: the expected discounted sum of E[h_a(x - S_{j-1})] - (1-a) m over
/// demand partial sums S_j up to the first crossing of x - s, plus the
/// discounted setup charge at the crossing. Evaluated exactly through the
/// finite partial-sum distributions; compares against vbar(x) - m.
/// `transformed` must come from transformed_model_vi. Rejects x <= s.
double renewal_u_bar(const ProblemSpec& p, double alpha, const DiscountedSolution& transformed,
                     int x);

} // namespace ssinv
