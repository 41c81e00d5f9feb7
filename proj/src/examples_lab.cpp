#include "ssinv/examples_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ssinv/solver.hpp"

namespace ssinv {

std::int64_t factorial_cutoff(int k) {
    if (k < 1 || k > 20) throw std::invalid_argument("factorial_cutoff: k must be in [1, 20]");
    std::int64_t sum = 0;
    std::int64_t fact = 1;
    for (int i = 1; i <= k; ++i) {
        fact *= i;
        sum += fact;
    }
    return sum;
}

int block_indicator(std::int64_t n) {
    if (n < 0) return 0;
    for (int k = 1;; ++k) {
        const std::int64_t lo = factorial_cutoff(2 * k - 1);
        if (lo > n) return 0;
        if (n < factorial_cutoff(2 * k)) return 1;
    }
}

AbelAverage abel_average(double alpha, double tail_tol) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("abel_average: alpha must be in [0, 1)");
    AbelAverage out;
    if (alpha == 0.0) {
        out.value = block_indicator(0);
        out.tail_bound = 0.0;
        out.terms = 1;
        return out;
    }
    double sum = 0.0;
    double apow = 1.0;
    std::int64_t i = 0;
    for (; apow > tail_tol; ++i) {
        if (block_indicator(i)) sum += apow;
        apow *= alpha;
    }
    out.value = (1.0 - alpha) * sum;
    out.tail_bound = apow; // alpha^{N+1} after the loop
    out.terms = i;
    return out;
}

std::int64_t chain_truncation_for(double alpha, double bound) {
    if (alpha <= 0.0) return 8;
    return static_cast<std::int64_t>(std::ceil(std::log(bound) / std::log(alpha))) + 1;
}

ChainRelativeValues chain_relative_values(double alpha, std::int64_t n_trunc) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("chain_relative_values: alpha must be in [0, 1)");
    if (n_trunc < 1) throw std::invalid_argument("chain_relative_values: n_trunc must be >= 1");
    const double trunc_bound = std::pow(alpha, static_cast<double>(n_trunc));
    if (trunc_bound > 1e-6)
        throw std::invalid_argument("chain_relative_values: truncation insufficient, alpha^N = " +
                                    std::to_string(trunc_bound));

    ChainRelativeValues out;
    out.alpha = alpha;
    out.n_trunc = n_trunc;
    out.agreement_bound = trunc_bound + 1e-10;

    const std::size_t count = static_cast<std::size_t>(n_trunc) + 3; // states -2..n_trunc
    const double horizon_value = alpha > 0.0 ? 1.0 / (1.0 - alpha) : 1.0;

    // Closed form: tail sums T(n) = sum_i z_{n+i} alpha^i via one backward
    // recursion T(n) = z_n + alpha T(n+1), anchored by a directly summed
    // T at a start deep enough that the anchor error decays below 1e-13.
    std::vector<double> u_closed(count);
    {
        std::int64_t start = n_trunc;
        if (alpha > 0.0)
            start = n_trunc + static_cast<std::int64_t>(
                                  std::ceil(std::log(1e-13 * (1.0 - alpha)) / std::log(alpha))) +
                    1;
        double anchor = 0.0;
        if (alpha > 0.0) {
            double apow = 1.0;
            for (std::int64_t i = start; apow > 1e-17; ++i) {
                if (block_indicator(i)) anchor += apow;
                apow *= alpha;
            }
        } else {
            anchor = block_indicator(start);
        }
        std::vector<double> tail(static_cast<std::size_t>(n_trunc) + 1);
        double t = anchor;
        for (std::int64_t n = start - 1; n >= 0; --n) {
            t = block_indicator(n) + alpha * t;
            if (n <= n_trunc) tail[static_cast<std::size_t>(n)] = t;
        }
        u_closed[0] = 0.0; // state -2
        u_closed[1] = 1.0; // state -1
        u_closed[2] = (1.0 - alpha) * tail[0] + 1.0;
        for (std::int64_t n = 1; n <= n_trunc; ++n)
            u_closed[static_cast<std::size_t>(n) + 2] =
                (1.0 - alpha) * tail[static_cast<std::size_t>(n)] - block_indicator(n - 1) + 1.0;
    }

    // Independent route: value iteration on the truncated chain with an
    // absorbing tail of cost 1 per period.
    std::vector<double> v(count, 0.0);
    std::vector<double> vnext(count);
    auto zhat = [](std::int64_t n) {
        return n == 0 ? block_indicator(0) + 1
                      : block_indicator(n) - block_indicator(n - 1) + 1;
    };
    const double stop_target =
        alpha > 0.0 ? 1e-11 * (1.0 - alpha) / (2.0 * alpha) : 0.0;
    for (long iter = 0; iter < 100000000; ++iter) {
        vnext[0] = alpha * v[1];
        vnext[1] = 1.0 + alpha * std::min(v[1], v[2]);
        for (std::int64_t n = 0; n < n_trunc; ++n)
            vnext[static_cast<std::size_t>(n) + 2] =
                zhat(n) + alpha * v[static_cast<std::size_t>(n) + 3];
        vnext[count - 1] = zhat(n_trunc) + alpha * horizon_value;

        double change = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            change = std::max(change, std::abs(vnext[i] - v[i]));
            scale = std::max(scale, std::abs(vnext[i]));
        }
        v.swap(vnext);
        const double floor = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + scale);
        if (change <= std::max(stop_target, floor)) break;
    }
    const double vmin = *std::min_element(v.begin(), v.end());
    std::vector<double> u_vi(count);
    for (std::size_t i = 0; i < count; ++i) u_vi[i] = v[i] - vmin;

    out.max_gap = 0.0;
    for (std::size_t i = 0; i < count; ++i)
        out.max_gap = std::max(out.max_gap, std::abs(u_vi[i] - u_closed[i]));
    out.closed_form = std::move(u_closed);
    out.iterated = std::move(u_vi);
    return out;
}

std::vector<double> suggested_oscillation_schedule() {
    std::vector<double> out;
    for (int k = 2; k <= 6; ++k)
        out.push_back(1.0 - 1.0 / static_cast<double>(factorial_cutoff(k)));
    return out;
}

OscillationReport oscillation_report(const std::vector<double>& alphas) {
    OscillationReport rep;
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -std::numeric_limits<double>::infinity();
    for (double a : alphas) {
        const AbelAverage f = abel_average(a);
        OscillationRow row;
        row.alpha = a;
        row.f_alpha = f.value;
        row.u0 = f.value + 1.0;
        row.truncation_bound = f.tail_bound;
        rep.rows.push_back(row);
        fmin = std::min(fmin, f.value);
        fmax = std::max(fmax, f.value);
    }
    rep.spread = rep.rows.empty() ? 0.0 : fmax - fmin;
    return rep;
}

ProblemSpec unit_demand_instance(int half_width) {
    const Grid g(-half_width, half_width);
    return ProblemSpec(1.0, 1.0, DemandPmf::point_mass(1),
                       HoldingCost::two_sided_linear(g, 0.5, 0.5));
}

namespace {

// Order region of a G table must be exactly {x < s}: ordering strictly
// better below s, not ordering weakly optimal from s on.
bool greedy_is_threshold(const GTable& g, double setup_cost, int s, double tol) {
    const int n = g.grid.size();
    std::vector<double> sm(static_cast<std::size_t>(n));
    kern::suffix_min(g.values.data(), n, sm.data());
    for (int x = g.grid.x_min; x <= g.grid.x_max; ++x) {
        const double no_order = g.at(x);
        const double order = setup_cost + sm[static_cast<std::size_t>(g.grid.index(x))];
        if (x < s && !(no_order > order + tol)) return false;
        if (x >= s && !(no_order <= order + tol)) return false;
    }
    return true;
}

} // namespace

SmallInstanceReport small_instance_checks(double alpha, int half_width) {
    const ProblemSpec p = unit_demand_instance(half_width);
    SmallInstanceReport rep;
    const double tol = 1e-10;

    { // one period, zero terminal value: never order
        const auto stages = finite_horizon(p, alpha, 1, Terminal::zero);
        const GTable& g = stages[0].g;
        std::vector<double> sm(static_cast<std::size_t>(g.grid.size()));
        kern::suffix_min(g.values.data(), g.grid.size(), sm.data());
        bool never = true;
        for (int i = 0; i < g.grid.size(); ++i)
            if (!(g.values[static_cast<std::size_t>(i)] <=
                  p.setup_cost + sm[static_cast<std::size_t>(i)] + tol))
                never = false;
        rep.one_period_never_orders = never;
    }

    { // one period with the -c x terminal credit: threshold-shaped stage
        const auto stages = finite_horizon(p, alpha, 1, Terminal::minus_cx);
        rep.terminal_credit_stage_is_threshold =
            greedy_is_threshold(stages[0].g, p.setup_cost, stages[0].s, tol);
    }

    { // infinite horizon: the greedy policy is the extracted threshold pair
        SolveParams params;
        params.tol = 1e-12;
        const DiscountedSolution sol = value_iteration_discounted(p, alpha, params);
        rep.infinite_horizon_is_threshold =
            greedy_is_threshold(sol.g, p.setup_cost, sol.s, tol);
        rep.s = sol.s;
        rep.S = sol.S;
    }
    return rep;
}

} // namespace ssinv
