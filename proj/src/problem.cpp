#include "ssinv/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ssinv {

ProblemSpec::ProblemSpec(double K, double c_unit, DemandPmf d, HoldingCost h)
    : setup_cost(K), unit_cost(c_unit), demand(std::move(d)), holding(std::move(h)) {
    if (!(setup_cost > 0.0)) throw std::invalid_argument("ProblemSpec: K must be > 0");
    if (!(unit_cost > 0.0)) throw std::invalid_argument("ProblemSpec: unit cost must be > 0");
    const Grid& g = holding.grid();
    if (g.x_max - g.x_min <= 2 * demand.max_value())
        throw std::invalid_argument("ProblemSpec: grid width must exceed twice the largest "
                                    "demand atom");
}

double expected_shifted_cost(const HoldingCost& h, const DemandPmf& d, int x) {
    double acc = 0.0;
    for (int k = 0; k < d.atom_count(); ++k)
        acc += d.probs()[static_cast<std::size_t>(k)] *
               h(x - d.values()[static_cast<std::size_t>(k)]);
    return acc;
}

std::vector<double> expected_shifted_cost_table(const ProblemSpec& p, Exec exec) {
    std::vector<double> out(static_cast<std::size_t>(p.grid().size()));
    kern::shifted_expectation(exec, p.holding, p.demand, p.grid(), out.data());
    return out;
}

TransformedCost transformed_expected_cost(const ProblemSpec& p, double alpha, Exec exec) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("transformed_expected_cost: alpha must be in (0, 1]");
    TransformedCost t;
    t.alpha = alpha;
    t.grid = p.grid();
    t.values = expected_shifted_cost_table(p, exec);
    const double c = p.unit_cost;
    const double shift = alpha * c * p.demand.mean();
    for (int i = 0; i < t.grid.size(); ++i)
        t.values[static_cast<std::size_t>(i)] += (1.0 - alpha) * c * t.grid.point(i) + shift;
    return t;
}

std::optional<QuasiconvexityWitness> quasiconvexity_violation(const std::vector<double>& f,
                                                              const Grid& g, double tol) {
    const int n = static_cast<int>(f.size());
    // Scan for the pattern rise-then-drop; its peak beats both neighbors of
    // the surrounding valley points, which is exactly a witness triple.
    int rise_from = -1; // index before the first strict rise seen so far
    for (int i = 0; i + 1 < n; ++i) {
        if (f[static_cast<std::size_t>(i + 1)] > f[static_cast<std::size_t>(i)] + tol) {
            if (rise_from < 0) rise_from = i;
        } else if (rise_from >= 0 &&
                   f[static_cast<std::size_t>(i + 1)] < f[static_cast<std::size_t>(i)] - tol) {
            QuasiconvexityWitness w;
            w.x_left = g.point(rise_from);
            w.x_mid = g.point(i);
            w.x_right = g.point(i + 1);
            w.f_left = f[static_cast<std::size_t>(rise_from)];
            w.f_mid = f[static_cast<std::size_t>(i)];
            w.f_right = f[static_cast<std::size_t>(i + 1)];
            return w;
        }
    }
    return std::nullopt;
}

AssumptionReport check_assumptions(const ProblemSpec& p, double alpha, Exec exec) {
    const TransformedCost t = transformed_expected_cost(p, alpha, exec);
    const Grid& g = p.grid();
    const int n = g.size();

    AssumptionReport rep;
    rep.alpha = alpha;
    rep.alpha_star_bound = std::max(1.0 - p.holding.left_slope() / p.unit_cost, 0.0);

    rep.witness = quasiconvexity_violation(t.values, g);
    rep.quasiconvex = !rep.witness.has_value();

    // Smallest minimizer of E[h_a(x - D)] on the grid.
    int rmin = 0;
    for (int i = 1; i < n; ++i)
        if (t.values[static_cast<std::size_t>(i)] < t.values[static_cast<std::size_t>(rmin)])
            rmin = i;
    rep.r_alpha = g.point(rmin);
    const double min_value = t.values[static_cast<std::size_t>(rmin)];

    // Left limit of E[h_a(x - D)]: with a linear left tail of slope sigma_L
    // the function behaves like (sigma_L - (1-a)c)|x| far left, so the limit
    // is infinite iff sigma_L > (1-a)c; otherwise it is the constant below.
    const double c = p.unit_cost;
    const double slope_gap = p.holding.left_slope() - (1.0 - alpha) * c;
    if (slope_gap > 0.0) {
        rep.left_limit_infinite = true;
        rep.left_limit_ok = true;
        rep.left_limit_value = std::numeric_limits<double>::infinity();
    } else if (slope_gap == 0.0) {
        rep.left_limit_infinite = false;
        rep.left_limit_value = p.holding(g.x_min) + p.holding.left_slope() * g.x_min +
                               p.holding.left_slope() * p.demand.mean() +
                               alpha * c * p.demand.mean();
        rep.left_limit_ok = rep.left_limit_value > p.setup_cost + min_value;
    } else {
        rep.left_limit_infinite = false;
        rep.left_limit_value = -std::numeric_limits<double>::infinity();
        rep.left_limit_ok = false;
    }

    rep.strictly_decreasing_left_of_r = true;
    for (int i = 0; i < rmin; ++i)
        if (!(t.values[static_cast<std::size_t>(i + 1)] < t.values[static_cast<std::size_t>(i)])) {
            rep.strictly_decreasing_left_of_r = false;
            break;
        }

    // S*_a: smallest grid point above r with E[h_a(x-D)] >= K + E[h_a(r-D)].
    rep.s_star_alpha = g.x_max;
    rep.s_star_on_grid = false;
    for (int i = rmin + 1; i < n; ++i)
        if (t.values[static_cast<std::size_t>(i)] >= p.setup_cost + min_value) {
            rep.s_star_alpha = g.point(i);
            rep.s_star_on_grid = true;
            break;
        }
    return rep;
}

double alpha_star_for_convex(const ProblemSpec& p) {
    if (auto bad = p.holding.convexity_violation())
        throw std::invalid_argument("alpha_star_for_convex: holding cost is not convex at grid "
                                    "index " +
                                    std::to_string(*bad));
    return std::max(1.0 - p.holding.left_slope() / p.unit_cost, 0.0);
}

} // namespace ssinv
