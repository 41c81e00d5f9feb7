#include "ssinv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ssinv {

namespace {

// Shared scratch for one solve.
struct Sweep {
    Grid grid;
    std::vector<double> htilde; // E[h(x-D)]
    std::vector<double> cont;   // E[v(x-D)]
    std::vector<double> gvals;
    std::vector<double> sufmin;

    Sweep(const ProblemSpec& p, Exec exec) : grid(p.grid()) {
        const std::size_t n = static_cast<std::size_t>(grid.size());
        htilde.resize(n);
        cont.resize(n);
        gvals.resize(n);
        sufmin.resize(n);
        kern::shifted_expectation(exec, p.holding, p.demand, grid, htilde.data());
    }
};

double tie_tolerance(double reference) { return 1e-9 * (1.0 + std::abs(reference)); }

} // namespace

Window interior_window(const ProblemSpec& p) {
    const AssumptionReport rep = check_assumptions(p, 1.0);
    const int dmax = p.demand.max_value();
    Window w;
    w.lo = p.grid().x_min + 2 * dmax;
    w.hi = std::min(rep.s_star_alpha + 2 * dmax, p.grid().x_max);
    if (w.lo > w.hi) w.hi = w.lo;
    return w;
}

GTable build_g(const ValueTable& v, const ProblemSpec& p, double alpha, Exec exec) {
    GTable g;
    g.alpha = alpha;
    g.grid = p.grid();
    const int n = g.grid.size();
    g.values.resize(static_cast<std::size_t>(n));
    std::vector<double> htilde(static_cast<std::size_t>(n));
    std::vector<double> cont(static_cast<std::size_t>(n));
    kern::shifted_expectation(exec, p.holding, p.demand, g.grid, htilde.data());
    kern::shifted_expectation(exec, v, p.demand, g.grid, cont.data());
    const double c = p.unit_cost;
    for (int i = 0; i < n; ++i)
        g.values[static_cast<std::size_t>(i)] =
            c * g.grid.point(i) + htilde[static_cast<std::size_t>(i)] +
            alpha * cont[static_cast<std::size_t>(i)];
    return g;
}

ValueTable bellman_discounted(const ValueTable& v, const ProblemSpec& p, double alpha,
                              Exec exec) {
    const GTable g = build_g(v, p, alpha, exec);
    const int n = g.grid.size();
    std::vector<double> sufmin(static_cast<std::size_t>(n));
    kern::suffix_min(g.values.data(), n, sufmin.data());
    std::vector<double> out(static_cast<std::size_t>(n));
    kern::order_or_not(exec, g.values.data(), sufmin.data(), p.setup_cost, p.unit_cost, g.grid,
                       out.data());
    return ValueTable(g.grid, std::move(out), BelowGrid::linear, p.unit_cost);
}

std::pair<int, int> extract_thresholds(const GTable& g, double setup_cost) {
    const int S = g.min_point();
    const double bar = setup_cost + g.at(S);
    const double tol = tie_tolerance(bar);
    int s = S;
    for (int x = g.grid.x_min; x <= S; ++x)
        if (g.at(x) <= bar + tol) {
            s = x;
            break;
        }
    return {s, S};
}

namespace {

// Core iteration shared by the discounted solvers. The iterate v = m + t is
// carried as a scalar offset m and a min-normalized table t, so the sup-norm
// change of v stays computable near alpha = 1 where |m| dwarfs the update.
// zero_unit_cost selects the transformed model (stage cost E[h_a], no -c x,
// constant extension below the grid).
DiscountedSolution discounted_fixed_point(const ProblemSpec& p, double alpha,
                                          const SolveParams& params, bool zero_unit_cost) {
    const Grid grid = p.grid();
    const int n = grid.size();
    const double c = p.unit_cost;
    const double K = p.setup_cost;
    Sweep sw(p, params.exec);

    // Stage cost: E[h(x-D)] + c x for the standard model's G, or E[h_a(x-D)]
    // for the transformed one.
    std::vector<double> stage(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double base = sw.htilde[static_cast<std::size_t>(i)];
        stage[static_cast<std::size_t>(i)] =
            zero_unit_cost
                ? base + (1.0 - alpha) * c * grid.point(i) + alpha * c * p.demand.mean()
                : base + c * grid.point(i);
    }

    const BelowGrid ext = zero_unit_cost ? BelowGrid::constant : BelowGrid::linear;
    const double combine_c = zero_unit_cost ? 0.0 : c;
    ValueTable t = ValueTable::zeros(grid, ext, c);
    double m = 0.0;

    DiscountedSolution sol;
    sol.alpha = alpha;

    const double stop_target =
        alpha > 0.0 ? params.tol * (1.0 - alpha) / (2.0 * alpha) : 0.0;

    std::vector<double> tnext(static_cast<std::size_t>(n));
    double residual = std::numeric_limits<double>::infinity();
    double best_residual = residual;
    long stalled = 0;
    long iter = 0;
    for (; iter < params.max_iter; ++iter) {
        kern::shifted_expectation(params.exec, t, p.demand, grid, sw.cont.data());
        for (int i = 0; i < n; ++i)
            sw.gvals[static_cast<std::size_t>(i)] =
                stage[static_cast<std::size_t>(i)] + alpha * sw.cont[static_cast<std::size_t>(i)];
        kern::suffix_min(sw.gvals.data(), n, sw.sufmin.data());
        kern::order_or_not(params.exec, sw.gvals.data(), sw.sufmin.data(), K, combine_c, grid,
                           tnext.data());

        const double mu = *std::min_element(tnext.begin(), tnext.end());
        const double dm = mu - (1.0 - alpha) * m; // m' - m with m' = alpha m + mu
        residual = 0.0;
        for (int i = 0; i < n; ++i) {
            tnext[static_cast<std::size_t>(i)] -= mu;
            const double dv =
                tnext[static_cast<std::size_t>(i)] - t.at_index(i) + dm;
            residual = std::max(residual, std::abs(dv));
        }
        m += dm;
        std::copy(tnext.begin(), tnext.end(), t.values().begin());

        // The spec's threshold can sit below the resolution of the iterates
        // when alpha is close to 1; stop once the change reaches the
        // floating-point floor of the per-sweep update or stops improving.
        const double tscale =
            std::abs(mu) + *std::max_element(t.values().begin(), t.values().end());
        const double floor = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + tscale);
        if (residual <= best_residual * 0.97)
            stalled = 0;
        else
            ++stalled;
        best_residual = std::min(best_residual, residual);
        if (residual <= std::max(stop_target, floor) ||
            (stalled >= 500 && best_residual <= 1e6 * floor)) {
            sol.converged = true;
            ++iter;
            break;
        }
    }

    sol.iterations = iter;
    sol.residual = residual;
    sol.value_error_bound =
        alpha > 0.0 && alpha < 1.0 ? residual * alpha / (1.0 - alpha) : residual;
    sol.m_alpha = m;

    // Materialize v and its G table.
    std::vector<double> vvals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) vvals[static_cast<std::size_t>(i)] = t.at_index(i) + m;
    sol.v = ValueTable(grid, std::move(vvals), ext, c);

    sol.g.alpha = alpha;
    sol.g.grid = grid;
    sol.g.values.resize(static_cast<std::size_t>(n));
    kern::shifted_expectation(params.exec, t, p.demand, grid, sw.cont.data());
    for (int i = 0; i < n; ++i)
        sol.g.values[static_cast<std::size_t>(i)] = stage[static_cast<std::size_t>(i)] +
                                                    alpha * sw.cont[static_cast<std::size_t>(i)] +
                                                    alpha * m;
    std::tie(sol.s, sol.S) = extract_thresholds(sol.g, K);
    return sol;
}

} // namespace

DiscountedSolution value_iteration_discounted(const ProblemSpec& p, double alpha,
                                              const SolveParams& params) {
    if (!(alpha > 0.0) || alpha >= 1.0)
        throw std::invalid_argument("value_iteration_discounted: alpha must be in (0, 1)");
    return discounted_fixed_point(p, alpha, params, /*zero_unit_cost=*/false);
}

DiscountedSolution transformed_model_vi(const ProblemSpec& p, double alpha,
                                        const SolveParams& params) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("transformed_model_vi: alpha must be in [0, 1)");
    return discounted_fixed_point(p, alpha, params, /*zero_unit_cost=*/true);
}

std::vector<StageResult> finite_horizon(const ProblemSpec& p, double alpha, int horizon,
                                        Terminal terminal, Exec exec) {
    if (horizon < 1) throw std::invalid_argument("finite_horizon: horizon must be >= 1");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("finite_horizon: alpha must be in (0, 1]");

    const Grid model = p.grid();
    const Grid wide(model.x_min - horizon * p.demand.max_value(), model.x_max);
    const int n = wide.size();
    const double c = p.unit_cost;

    std::vector<double> htilde(static_cast<std::size_t>(n));
    kern::shifted_expectation(exec, p.holding, p.demand, wide, htilde.data());

    const BelowGrid ext = terminal == Terminal::zero ? BelowGrid::constant : BelowGrid::linear;
    std::vector<double> v0(static_cast<std::size_t>(n), 0.0);
    if (terminal == Terminal::minus_cx)
        for (int i = 0; i < n; ++i) v0[static_cast<std::size_t>(i)] = -c * wide.point(i);
    ValueTable v(wide, std::move(v0), ext, c);

    std::vector<double> cont(static_cast<std::size_t>(n));
    std::vector<double> gv(static_cast<std::size_t>(n));
    std::vector<double> sm(static_cast<std::size_t>(n));
    std::vector<double> vnext(static_cast<std::size_t>(n));

    std::vector<StageResult> stages;
    stages.reserve(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
        kern::shifted_expectation(exec, v, p.demand, wide, cont.data());
        for (int i = 0; i < n; ++i)
            gv[static_cast<std::size_t>(i)] = c * wide.point(i) +
                                              htilde[static_cast<std::size_t>(i)] +
                                              alpha * cont[static_cast<std::size_t>(i)];
        kern::suffix_min(gv.data(), n, sm.data());
        kern::order_or_not(exec, gv.data(), sm.data(), p.setup_cost, c, wide, vnext.data());

        StageResult stage;
        stage.g.alpha = alpha;
        stage.g.grid = model;
        stage.g.values.assign(gv.begin() + wide.index(model.x_min), gv.end());
        std::tie(stage.s, stage.S) = extract_thresholds(stage.g, p.setup_cost);
        stage.v = ValueTable(model,
                             std::vector<double>(vnext.begin() + wide.index(model.x_min),
                                                 vnext.end()),
                             ext, c);
        stages.push_back(std::move(stage));

        std::copy(vnext.begin(), vnext.end(), v.values().begin());
    }
    return stages;
}

AverageSolution relative_value_iteration(const ProblemSpec& p, const SolveParams& params,
                                         double damping) {
    if (!(damping > 0.0) || damping > 1.0)
        throw std::invalid_argument("relative_value_iteration: damping must be in (0, 1]");

    const Grid grid = p.grid();
    const int n = grid.size();
    const double c = p.unit_cost;
    const double K = p.setup_cost;
    Sweep sw(p, params.exec);

    AverageSolution sol;
    sol.assumptions_ok = check_assumptions(p, 1.0).all_pass();
    sol.reference_state = grid.midpoint();
    const int ref = grid.index(sol.reference_state);

    ValueTable v = ValueTable::zeros(grid, BelowGrid::linear, c);
    std::vector<double> tv(static_cast<std::size_t>(n));
    double dmin = 0.0, dmax = 0.0;

    long iter = 0;
    for (; iter < params.max_iter; ++iter) {
        kern::shifted_expectation(params.exec, v, p.demand, grid, sw.cont.data());
        for (int i = 0; i < n; ++i)
            sw.gvals[static_cast<std::size_t>(i)] = c * grid.point(i) +
                                                    sw.htilde[static_cast<std::size_t>(i)] +
                                                    sw.cont[static_cast<std::size_t>(i)];
        kern::suffix_min(sw.gvals.data(), n, sw.sufmin.data());
        kern::order_or_not(params.exec, sw.gvals.data(), sw.sufmin.data(), K, c, grid, tv.data());

        dmin = std::numeric_limits<double>::infinity();
        dmax = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double d = tv[static_cast<std::size_t>(i)] - v.at_index(i);
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
        if (dmax - dmin <= params.tol) {
            sol.converged = true;
            ++iter;
            break;
        }

        const double shift_base = (1.0 - damping) * v.at_index(ref) +
                                  damping * tv[static_cast<std::size_t>(ref)];
        for (int i = 0; i < n; ++i)
            v.values()[static_cast<std::size_t>(i)] = (1.0 - damping) * v.at_index(i) +
                                                      damping * tv[static_cast<std::size_t>(i)] -
                                                      shift_base;
    }

    sol.iterations = iter;
    sol.span_residual = dmax - dmin;
    sol.w = 0.5 * (dmax + dmin);

    const double vmin = v.min_value();
    std::vector<double> uvals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) uvals[static_cast<std::size_t>(i)] = v.at_index(i) - vmin;
    sol.u = ValueTable(grid, std::move(uvals), BelowGrid::linear, c);

    sol.h.alpha = 1.0;
    sol.h.grid = grid;
    sol.h.values.resize(static_cast<std::size_t>(n));
    kern::shifted_expectation(params.exec, sol.u, p.demand, grid, sw.cont.data());
    for (int i = 0; i < n; ++i)
        sol.h.values[static_cast<std::size_t>(i)] = c * grid.point(i) +
                                                    sw.htilde[static_cast<std::size_t>(i)] +
                                                    sw.cont[static_cast<std::size_t>(i)];
    std::tie(sol.s, sol.S) = extract_thresholds(sol.h, K);

    // Bellman gap of (w, u) over the interior window.
    kern::suffix_min(sol.h.values.data(), n, sw.sufmin.data());
    const Window win = interior_window(p);
    double gap = 0.0;
    for (int i = 0; i < n; ++i) {
        const int x = grid.point(i);
        if (!win.contains(x)) continue;
        const double lhs = sol.w + sol.u.at_index(i);
        const double rhs = std::min(K + sw.sufmin[static_cast<std::size_t>(i)],
                                    sol.h.values[static_cast<std::size_t>(i)]) -
                           c * x;
        gap = std::max(gap, std::abs(lhs - rhs));
    }
    sol.acoe_residual = gap;
    return sol;
}

} // namespace ssinv
