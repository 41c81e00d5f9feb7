#pragma once

#include <vector>

#include "ssinv/problem.hpp"
#include "ssinv/value_table.hpp"

namespace ssinv {

struct SolveParams {
    double tol = 1e-9;       // target sup-norm error of the value function
    long max_iter = 2000000;
    Exec exec = Exec::parallel;
};

/// Closed state window [lo, hi] on which structural assertions are checked,
/// keeping grid-truncation bias out.
struct Window {
    int lo = 0;
    int hi = 0;
    bool contains(int x) const { return x >= lo && x <= hi; }
};

/// Default assertion window: [x_min + 2 d_max, S*_1 + 2 d_max], clamped to
/// the grid.
Window interior_window(const ProblemSpec& p);

struct DiscountedSolution {
    double alpha = 0.0;
    ValueTable v;          // fixed point (standard model: linear-below, slope c)
    GTable g;              // G built from v
    int s = 0;             // smallest x <= S with G(x) <= K + G(S) (+ tie tol)
    int S = 0;             // smallest minimizer of G
    long iterations = 0;
    double residual = 0.0; // last sup-norm change of v
    double m_alpha = 0.0;  // min of v over the grid
    bool converged = false;
    double value_error_bound = 0.0; // alpha/(1-alpha) * residual at stop
};

struct AverageSolution {
    double w = 0.0;         // optimal gain (cost per period)
    ValueTable u;           // relative values, min-normalized to 0
    GTable h;               // H(x) = c x + E[h(x-D)] + E[u(x-D)]
    int s = 0;
    int S = 0;
    double acoe_residual = 0.0; // max Bellman gap over the interior window
    long iterations = 0;
    double span_residual = 0.0;
    bool converged = false;
    bool assumptions_ok = false;
    int reference_state = 0;
};

/// G(x) = c x + E[h(x-D)] + alpha E[v(x-D)], with v's below-grid extension.
GTable build_g(const ValueTable& v, const ProblemSpec& p, double alpha,
               Exec exec = Exec::parallel);

/// One Bellman sweep of the standard model:
/// v'(x) = min( min_{a>=0} [K + G(x+a)], G(x) ) - c x, the inner min taken
/// as a suffix minimum of G (actions capped at order-up-to x_max).
ValueTable bellman_discounted(const ValueTable& v, const ProblemSpec& p, double alpha,
                              Exec exec = Exec::parallel);

/// S = smallest argmin of g; s = smallest x <= S with
/// g(x) <= K + g(S) + tie_tol, tie_tol = 1e-9 (1 + |K + g(S)|).
std::pair<int, int> extract_thresholds(const GTable& g, double setup_cost);

/// Value iteration from v = 0 for alpha in (0, 1). Stops when the sup-norm
/// change is below tol (1-alpha)/(2 alpha), which guarantees a value error
/// of at most tol; a floating-point floor applies when that threshold is
/// below the representable resolution of the iterates (value_error_bound
/// records what was actually achieved). Iterates are carried as
/// (offset, relative) pairs so the relative part keeps full precision for
/// alpha near 1.
DiscountedSolution value_iteration_discounted(const ProblemSpec& p, double alpha,
                                              const SolveParams& params = {});

/// Same solver for the zero-unit-cost model with stage cost E[h_a(.)]:
/// vbar(x) = min( min_{a>=0} [K + Gbar(x+a)], Gbar(x) ),
/// Gbar(x) = E[h_a(x-D)] + alpha E[vbar(x-D)].
/// m_alpha holds min vbar; v extends constant below the grid. Accepts
/// alpha in [0, 1); at alpha = 0 the fixed point is the one-stage cost.
DiscountedSolution transformed_model_vi(const ProblemSpec& p, double alpha,
                                        const SolveParams& params = {});

enum class Terminal { zero, minus_cx };

struct StageResult {
    ValueTable v; // value with t+1 periods to go
    GTable g;     // G built from the t-periods-to-go value
    int s = 0;
    int S = 0;
};

/// Backward recursion for the N-period problem, terminal value 0 or -c x.
/// Computed on a grid widened downward by N d_max so the reported tables are
/// exact on the model grid. result[t] holds the stage with t periods of
/// value already accumulated; the first decision of the N-horizon problem
/// uses result[N-1]. With terminal "minus_cx" the stage policies are
/// (s_t, S_t); with terminal "zero" they need not be.
std::vector<StageResult> finite_horizon(const ProblemSpec& p, double alpha, int horizon,
                                        Terminal terminal, Exec exec = Exec::parallel);

/// Relative value iteration for the average-cost problem: iterates the
/// alpha = 1 operator damped as (1-lambda) I + lambda T (fixed points and
/// gain are unchanged; the damping restores convergence for periodic
/// chains), renormalizing at the grid midpoint each sweep. Stops when the
/// span of T v - v is below tol; w is the midpoint of that span.
AverageSolution relative_value_iteration(const ProblemSpec& p, const SolveParams& params = {},
                                         double damping = 0.5);

} // namespace ssinv
