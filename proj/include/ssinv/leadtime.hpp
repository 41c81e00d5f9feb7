#pragma once

#include <cstdint>
#include <vector>

#include "ssinv/policy.hpp"
#include "ssinv/problem.hpp"

namespace ssinv {

/// Positive-lead-time instance: base carries the per-period holding/backlog
/// cost h^L on inventory; orders arrive L periods after being placed.
struct LeadTimeSpec {
    ProblemSpec base;
    int lead_time;

    LeadTimeSpec(ProblemSpec b, int L);
};

/// On-hand stock plus the outstanding orders, oldest first (the order in
/// pending.front() arrives in the current period).
struct PipelineState {
    int on_hand = 0;
    std::vector<int> pending;
};

/// Zero-lead-time equivalent: same demand, holding cost replaced by
/// hstar(y) = E[h^L(y - (D_1 + ... + D_L))] on a grid enlarged downward by
/// L * d_max. Rejects instances whose convolved cost overflows.
ProblemSpec reduce(const LeadTimeSpec& spec);

/// Expected discounted cost of the first L periods, which depend only on
/// the initial pipeline: sum of alpha^t (K 1{q_{t+1} > 0} + c q_{t+1} +
/// E[h^L(x + q_1 + ... + q_{t+1} - S_{t+1})]) with S_{t+1} the (t+1)-fold
/// demand sum. Evaluated exactly through the convolved PMFs.
double pipeline_offset(const LeadTimeSpec& spec, double alpha, const PipelineState& state);

/// Value iteration on the physical pipeline chain (x, pending). Orders are
/// bounded by the position cap x + sum(pending) + a <= y_hi and by the span
/// of the base grid, matching the reduced model's action set; the x-range
/// extends downward far enough that the boundary influence at tested states
/// is below the solve tolerance.
class AugmentedSolution {
  public:
    double value(const PipelineState& state) const;

    double alpha = 0.0;
    int lead_time = 0;
    int q_cap = 0;       // pipeline entries and actions live in [0, q_cap]
    Grid x_range;        // on-hand range covered by the table
    int position_cap = 0;
    long iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<double> table; // indexed by ((x - lo) * qdim + q1) * qdim + ...

  private:
    friend AugmentedSolution augmented_vi(const LeadTimeSpec&, double, const SolveParams&,
                                          std::size_t);
    std::size_t index(int x, const std::vector<int>& pending) const;
};

/// Exact oracle for small instances; rejects lead times above 2 or state
/// spaces above state_cap.
AugmentedSolution augmented_vi(const LeadTimeSpec& spec, double alpha,
                               const SolveParams& params = {},
                               std::size_t state_cap = 50000000);

/// Simulates the physical pipeline (orders arrive after L periods, holding
/// charged on on-hand stock) with the policy acting on the inventory
/// position y = x + sum(pending). Deterministic given the seed.
SimStats simulate_pipeline(const SsPolicy& pol_on_position, const LeadTimeSpec& spec,
                           long horizon, int replications, std::uint64_t seed);

} // namespace ssinv
