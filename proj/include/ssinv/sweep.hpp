#pragma once

#include <string>
#include <vector>

#include "ssinv/policy.hpp"
#include "ssinv/problem.hpp"
#include "ssinv/solver.hpp"

namespace ssinv {

/// Everything worth keeping from solving one discount factor: both model
/// solves, the assumption report, and the derived scalars that feed the
/// limit checks.
struct SweepRecord {
    double alpha = 0.0;
    int s = 0;
    int S = 0;
    int r_alpha = 0;
    int s_star_alpha = 0;
    double m_alpha = 0.0;          // min v
    double m_bar_alpha = 0.0;      // min vbar (zero-unit-cost model)
    double scaled_gain = 0.0;      // (1-alpha) m
    double scaled_gain_bar = 0.0;  // (1-alpha) mbar
    double h_alpha_at_s = 0.0;     // E[h_a(s - D)]
    DiscountedSolution standard;   // v, G, thresholds
    DiscountedSolution transformed; // vbar, Gbar
    AssumptionReport assumptions;

    /// u_a = v - m, min-normalized by construction.
    ValueTable relative_values() const;
    /// ubar_a = vbar - mbar.
    ValueTable relative_values_bar() const;
};

/// alpha_k = 1 - 2^{-k}, k = 1..12.
std::vector<double> default_schedule(int points = 12);

/// One fully converged record per alpha. Solver non-convergence is recorded
/// on the record, not thrown. jobs > 1 distributes alphas across threads.
std::vector<SweepRecord> run_sweep(const ProblemSpec& p, const std::vector<double>& schedule,
                                   const SolveParams& params = {}, int jobs = 1);

struct CheckReport {
    std::string name;
    bool pass = false;
    bool inconclusive = false;
    std::string detail;
};

/// s stabilized over the trailing records, |s_last - avg.s| <= 1 grid unit,
/// s_last <= r_1, and the last policy's exact average cost matches avg.w.
CheckReport check_threshold_convergence(const std::vector<SweepRecord>& records,
                                        const AverageSolution& avg, const ProblemSpec& p,
                                        double gain_rel_tol = 1e-4, int stable_tail = 4);

/// (1-a) m, (1-a) mbar and E[h_a(s-D)] all approach avg.w: terminal gaps
/// below tol (1 + w) and decreasing over the last three records.
CheckReport check_gain_limits(const std::vector<SweepRecord>& records,
                              const AverageSolution& avg, double terminal_rel_tol = 1e-2);

/// Discrete bracketing of (1-a)(mbar + K) between E[h_a(s-D)] and
/// E[h_a(s-1-D)], with slack eps_grid = G(s-1) - G(s) for the one-grid-step
/// defect (exact equality holds only in the continuous model).
CheckReport check_lemma_value_identity(const ProblemSpec& p, const SweepRecord& rec);

/// Grid points x <= S with G(y) within tol of K + G(S) for every y in
/// [s, x]. Empty is a legal outcome on the integer grid.
struct GcalSet {
    std::vector<int> members;
    double tol = 0.0;
    int s = 0;
    int S = 0;
    double deficit_at_s = 0.0; // K + G(S) - G(s), the discreteness defect
};
GcalSet compute_gcal(const GTable& g, double setup_cost, double tol);

/// Membership tolerance 1e-7 (1 + |K + G(S)|).
double gcal_default_tol(const GTable& g, double setup_cost);

/// sup over the window of |u_a - avg.u| decreasing over the last three
/// records and small at the final one.
CheckReport check_u_convergence(const std::vector<SweepRecord>& records,
                                const AverageSolution& avg, const Window& window,
                                double terminal_rel_tol = 1e-2);

/// Largest |u_a(x) - u_a(y)| over |x - y| <= delta in the window, per
/// record; flags growth of the modulus across the sweep beyond 10% of the
/// first record's.
struct ModulusReport {
    std::vector<double> modulus; // one per record
    double worst = 0.0;
    bool bounded = false;
};
ModulusReport equicontinuity_probe(const std::vector<SweepRecord>& records, int delta,
                                   const Window& window);

/// Recomputes both sides of the average-cost optimality equation from
/// avg.u over the window; also reports the |H(s) - K - H(S)| defect and
/// checks thresholds re-extracted from H match.
struct AcoeReport {
    double max_gap = 0.0;
    double boundary_defect = 0.0; // |H(s) - (K + H(S))|
    bool thresholds_consistent = false;
};
AcoeReport acoe_residual(const AverageSolution& avg, const ProblemSpec& p, const Window& window);

/// Pointwise structural inequalities of the converged tables, checked over
/// a window. Each returns the worst violation (positive = broken by that
/// much); the callers assert against their tolerance.
double worst_k_bounded_monotonicity(const ValueTable& v, double setup_cost, const Window& w);
double worst_g_increment_bound(const GTable& g, const std::vector<double>& stage_cost,
                               double bound_drop, const Window& w);
double worst_monotone_region(const std::vector<double>& values, const Grid& grid, int r,
                             const Window& w);
double worst_relative_value_k_monotonicity(const ValueTable& u, double unit_cost,
                                           double setup_cost, const Window& w);

/// r_alpha nondecreasing along the sweep and bounded by r_1.
CheckReport check_r_monotone(const std::vector<SweepRecord>& records, const ProblemSpec& p);

/// m + c s_a <= mbar <= m + c argmin(v), per record.
CheckReport check_mbar_bracket(const std::vector<SweepRecord>& records, const ProblemSpec& p);

/// All of the sweep-level checks in one list (for the CLI report).
std::vector<CheckReport> run_all_checks(const ProblemSpec& p,
                                        const std::vector<SweepRecord>& records,
                                        const AverageSolution& avg);

} // namespace ssinv
