#include "ssinv/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ssinv {

namespace {

double htilde_at(const ProblemSpec& p, int x) {
    return expected_shifted_cost(p.holding, p.demand, x);
}

} // namespace

DiscountedEval evaluate_discounted(const SsPolicy& pol, const ProblemSpec& p, double alpha) {
    if (pol.s > pol.S) throw std::invalid_argument("evaluate_discounted: requires s <= S");
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("evaluate_discounted: alpha must be in [0, 1)");
    const Grid grid = p.grid();
    const double c = p.unit_cost;
    const double K = p.setup_cost;
    const double hS = htilde_at(p, pol.S);

    // v(x) = A(x) + B(x) W with W = E[v(S - D)]. Ordering states are affine
    // by definition; non-ordering states follow by an ascending pass since
    // x - d < x for d > 0 and the d = 0 atom folds into the diagonal.
    const int first_keep = pol.order_at_s ? pol.s + 1 : pol.s;
    const int lo = std::min(grid.x_min, pol.S - p.demand.max_value());
    const Grid work(lo - 1, grid.x_max); // lo-1 keeps Grid nonempty margins harmless
    const int n = work.size();
    std::vector<double> A(static_cast<std::size_t>(n)), B(static_cast<std::size_t>(n));
    const double p0 = p.demand.prob_zero();
    const double diag = 1.0 - alpha * p0;

    auto coeff = [&](int x, double& a, double& b) {
        if (x < work.x_min) { // deep ordering region, same affine form
            a = K + c * (pol.S - x) + hS;
            b = alpha;
            return;
        }
        a = A[static_cast<std::size_t>(work.index(x))];
        b = B[static_cast<std::size_t>(work.index(x))];
    };

    for (int x = work.x_min; x <= work.x_max; ++x) {
        const int i = work.index(x);
        if (x < first_keep) {
            A[static_cast<std::size_t>(i)] = K + c * (pol.S - x) + hS;
            B[static_cast<std::size_t>(i)] = alpha;
            continue;
        }
        double sa = 0.0, sb = 0.0;
        for (int k = 0; k < p.demand.atom_count(); ++k) {
            const int d = p.demand.values()[static_cast<std::size_t>(k)];
            if (d == 0) continue;
            double a, b;
            coeff(x - d, a, b);
            sa += p.demand.probs()[static_cast<std::size_t>(k)] * a;
            sb += p.demand.probs()[static_cast<std::size_t>(k)] * b;
        }
        A[static_cast<std::size_t>(i)] = (htilde_at(p, x) + alpha * sa) / diag;
        B[static_cast<std::size_t>(i)] = (alpha * sb) / diag;
    }

    double wa = 0.0, wb = 0.0;
    for (int k = 0; k < p.demand.atom_count(); ++k) {
        double a, b;
        coeff(pol.S - p.demand.values()[static_cast<std::size_t>(k)], a, b);
        wa += p.demand.probs()[static_cast<std::size_t>(k)] * a;
        wb += p.demand.probs()[static_cast<std::size_t>(k)] * b;
    }
    const double W = wa / (1.0 - wb);

    std::vector<double> vvals(static_cast<std::size_t>(grid.size()));
    for (int x = grid.x_min; x <= grid.x_max; ++x) {
        double a, b;
        coeff(x, a, b);
        vvals[static_cast<std::size_t>(grid.index(x))] = a + b * W;
    }
    DiscountedEval out;
    out.v = ValueTable(grid, std::move(vvals), BelowGrid::linear, c);

    // Fixed-point residual check.
    double res = 0.0;
    for (int x = grid.x_min; x <= grid.x_max; ++x) {
        const int a = pol.action(x);
        const int target = x + a;
        double cont = 0.0;
        for (int k = 0; k < p.demand.atom_count(); ++k)
            cont += p.demand.probs()[static_cast<std::size_t>(k)] *
                    out.v(target - p.demand.values()[static_cast<std::size_t>(k)]);
        const double rhs = (a > 0 ? K + c * a : 0.0) + htilde_at(p, target) + alpha * cont;
        res = std::max(res, std::abs(out.v(x) - rhs));
    }
    out.residual = res;
    return out;
}

AverageEval evaluate_average(const SsPolicy& pol, const ProblemSpec& p, double tol,
                             bool reducibility_probe) {
    AverageEval out;
    if (pol.s > pol.S) throw std::invalid_argument("evaluate_average: requires s <= S");
    if (pol.s < p.grid().x_min || pol.S > p.grid().x_max) {
        out.note = "policy thresholds outside the grid";
        return out;
    }
    const int dmax = p.demand.max_value();
    const int lo = pol.s - dmax;
    const int hi = pol.S;
    const int n = hi - lo + 1;
    const double K = p.setup_cost;
    const double c = p.unit_cost;

    // One-step expected cost per chain state; ordering states never consult
    // the holding table below the grid.
    std::vector<double> cost(static_cast<std::size_t>(n));
    const double hS = htilde_at(p, pol.S);
    for (int x = lo; x <= hi; ++x)
        cost[static_cast<std::size_t>(x - lo)] =
            pol.orders_at(x) ? K + c * (pol.S - x) + hS : htilde_at(p, x);

    auto step_distribution = [&](const std::vector<double>& pi, std::vector<double>& next) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int x = lo; x <= hi; ++x) {
            const double mass = pi[static_cast<std::size_t>(x - lo)];
            if (mass == 0.0) continue;
            const int target = pol.orders_at(x) ? pol.S : x;
            for (int k = 0; k < p.demand.atom_count(); ++k) {
                const int y = target - p.demand.values()[static_cast<std::size_t>(k)];
                next[static_cast<std::size_t>(y - lo)] +=
                    mass * p.demand.probs()[static_cast<std::size_t>(k)];
            }
        }
    };

    auto stationary_from = [&](std::vector<double> pi) {
        std::vector<double> next(static_cast<std::size_t>(n));
        for (long it = 0; it < 1000000; ++it) {
            step_distribution(pi, next);
            double delta = 0.0;
            for (int i = 0; i < n; ++i) {
                const double mixed = 0.5 * pi[static_cast<std::size_t>(i)] +
                                     0.5 * next[static_cast<std::size_t>(i)];
                delta += std::abs(mixed - pi[static_cast<std::size_t>(i)]);
                pi[static_cast<std::size_t>(i)] = mixed;
            }
            if (delta <= tol) break;
        }
        return pi;
    };

    std::vector<double> pi(static_cast<std::size_t>(n), 1.0 / n);
    pi = stationary_from(std::move(pi));

    auto gain_of = [&](const std::vector<double>& dist) {
        double w = 0.0;
        for (int i = 0; i < n; ++i)
            w += dist[static_cast<std::size_t>(i)] * cost[static_cast<std::size_t>(i)];
        return w;
    };
    out.w = gain_of(pi);

    if (reducibility_probe) {
        std::vector<double> lo_start(static_cast<std::size_t>(n), 0.0);
        lo_start.front() = 1.0;
        std::vector<double> hi_start(static_cast<std::size_t>(n), 0.0);
        hi_start.back() = 1.0;
        const double w_lo = gain_of(stationary_from(std::move(lo_start)));
        const double w_hi = gain_of(stationary_from(std::move(hi_start)));
        if (std::abs(w_lo - w_hi) > 1e-8 * (1.0 + std::abs(out.w))) {
            out.note = "chain appears reducible: boundary starts disagree";
            return out;
        }
    }

    // Relative values of the chain (bias), zeroed at S.
    std::vector<double> bias(static_cast<std::size_t>(n), 0.0);
    std::vector<double> bnext(static_cast<std::size_t>(n));
    for (long it = 0; it < 1000000; ++it) {
        for (int x = lo; x <= hi; ++x) {
            const int target = pol.orders_at(x) ? pol.S : x;
            double cont = 0.0;
            for (int k = 0; k < p.demand.atom_count(); ++k)
                cont += p.demand.probs()[static_cast<std::size_t>(k)] *
                        bias[static_cast<std::size_t>(target -
                                                      p.demand.values()[static_cast<std::size_t>(
                                                          k)] -
                                                      lo)];
            bnext[static_cast<std::size_t>(x - lo)] =
                cost[static_cast<std::size_t>(x - lo)] - out.w + cont;
        }
        const double anchor = bnext[static_cast<std::size_t>(pol.S - lo)];
        double delta = 0.0;
        for (int i = 0; i < n; ++i) {
            const double mixed = 0.5 * bias[static_cast<std::size_t>(i)] +
                                 0.5 * (bnext[static_cast<std::size_t>(i)] - anchor);
            delta = std::max(delta, std::abs(mixed - bias[static_cast<std::size_t>(i)]));
            bias[static_cast<std::size_t>(i)] = mixed;
        }
        if (delta <= tol) break;
    }

    out.support_lo = lo;
    out.support_hi = hi;
    out.stationary = std::move(pi);
    out.bias = std::move(bias);
    out.valid = true;
    return out;
}

SearchResult exhaustive_ss_search(const ProblemSpec& p, Criterion crit, double alpha,
                                  std::optional<std::pair<int, int>> window, Exec exec) {
    const Grid grid = p.grid();
    int lo = grid.x_min;
    int hi;
    if (window) {
        lo = window->first;
        hi = window->second;
    } else {
        const AssumptionReport rep =
            check_assumptions(p, crit == Criterion::average ? 1.0 : alpha);
        hi = std::min(rep.s_star_alpha + std::max(5, p.demand.max_value()), grid.x_max);
    }
    if (lo > hi) throw std::invalid_argument("exhaustive_ss_search: empty window");

    std::vector<std::pair<int, int>> pairs;
    for (int s = lo; s <= hi; ++s)
        for (int S = s; S <= hi; ++S) pairs.emplace_back(s, S);

    std::vector<double> values(pairs.size());
    const int ref = grid.midpoint();
    const long count = static_cast<long>(pairs.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 16) if (exec == Exec::parallel)
#endif
    for (long i = 0; i < count; ++i) {
        const SsPolicy pol{pairs[static_cast<std::size_t>(i)].first,
                           pairs[static_cast<std::size_t>(i)].second, false};
        if (crit == Criterion::discounted) {
            values[static_cast<std::size_t>(i)] = evaluate_discounted(pol, p, alpha).v(ref);
        } else {
            const AverageEval e = evaluate_average(pol, p, 1e-13, false);
            values[static_cast<std::size_t>(i)] =
                e.valid ? e.w : std::numeric_limits<double>::infinity();
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[best]) best = i;

    SearchResult out;
    out.best = SsPolicy{pairs[best].first, pairs[best].second, false};
    out.best_value = values[best];
    out.reference_state = ref;
    out.pairs_evaluated = count;
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

SimStats simulate(const SsPolicy& pol, const ProblemSpec& p, long horizon, int replications,
                  std::uint64_t seed, std::optional<int> start) {
    if (horizon < 1) throw std::invalid_argument("simulate: horizon must be >= 1");
    if (replications < 1) throw std::invalid_argument("simulate: replications must be >= 1");

    std::vector<double> cdf(static_cast<std::size_t>(p.demand.atom_count()));
    double acc = 0.0;
    for (int k = 0; k < p.demand.atom_count(); ++k) {
        acc += p.demand.probs()[static_cast<std::size_t>(k)];
        cdf[static_cast<std::size_t>(k)] = acc;
    }
    cdf.back() = 1.0;

    SimStats stats;
    stats.horizon = horizon;
    stats.replications = replications;
    stats.seed = seed;
    stats.min_inventory = std::numeric_limits<int>::max();
    stats.max_inventory = std::numeric_limits<int>::min();
    stats.rep_means.resize(static_cast<std::size_t>(replications));

    const double K = p.setup_cost;
    const double c = p.unit_cost;
    const int x0 = start.value_or(pol.S);

    for (int rep = 0; rep < replications; ++rep) {
        std::mt19937_64 rng(splitmix64(seed ^ (0x5851F42D4C957F2Dull * (rep + 1))));
        int x = x0;
        double total = 0.0;
        for (long t = 0; t < horizon; ++t) {
            const int a = pol.action(x);
            const double u =
                static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
            int d = p.demand.values().back();
            for (int k = 0; k < p.demand.atom_count(); ++k)
                if (u < cdf[static_cast<std::size_t>(k)]) {
                    d = p.demand.values()[static_cast<std::size_t>(k)];
                    break;
                }
            const int next = x + a - d;
            total += (a > 0 ? K + c * a : 0.0) + p.holding(next);
            x = next;
            stats.min_inventory = std::min(stats.min_inventory, x);
            stats.max_inventory = std::max(stats.max_inventory, x);
        }
        stats.rep_means[static_cast<std::size_t>(rep)] = total / static_cast<double>(horizon);
    }

    double mean = 0.0;
    for (double v : stats.rep_means) mean += v;
    mean /= replications;
    stats.mean_cost_per_period = mean;

    if (replications >= 2) {
        double var = 0.0;
        for (double v : stats.rep_means) var += (v - mean) * (v - mean);
        var /= (replications - 1);
        stats.ci_halfwidth = 1.96 * std::sqrt(var / replications);
    } else {
        stats.ci_halfwidth = 0.0;
    }
    return stats;
}

double renewal_u_bar(const ProblemSpec& p, double alpha, const DiscountedSolution& transformed,
                     int x) {
    const int s = transformed.s;
    if (x <= s)
        throw std::invalid_argument("renewal_u_bar: requires x above the lower threshold");
    if (!p.grid().contains(x)) throw std::invalid_argument("renewal_u_bar: x outside grid");

    const int span = x - s;
    const double m_bar = transformed.m_alpha;
    const double c = p.unit_cost;

    // g[k] = E[h_a((x - k) - D)] - (1 - alpha) m for partial sums k <= x - s.
    std::vector<double> g(static_cast<std::size_t>(span) + 1);
    double gmax = 0.0;
    for (int k = 0; k <= span; ++k) {
        const double ha = expected_shifted_cost(p.holding, p.demand, x - k) +
                          (1.0 - alpha) * c * (x - k) + alpha * c * p.demand.mean();
        g[static_cast<std::size_t>(k)] = ha - (1.0 - alpha) * m_bar;
        gmax = std::max(gmax, std::abs(g[static_cast<std::size_t>(k)]));
    }

    std::vector<double> cur(static_cast<std::size_t>(span) + 1, 0.0);
    std::vector<double> next(static_cast<std::size_t>(span) + 1);
    cur[0] = 1.0;

    double total = 0.0;
    double setup_term = 0.0;
    double apow = 1.0;
    const double K = p.setup_cost;
    for (;;) {
        double mass = 0.0;
        double contrib = 0.0;
        for (int k = 0; k <= span; ++k) {
            mass += cur[static_cast<std::size_t>(k)];
            contrib += cur[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)];
        }
        if (mass == 0.0) break;
        total += apow * contrib;

        std::fill(next.begin(), next.end(), 0.0);
        double mass_next = 0.0;
        for (int k = 0; k <= span; ++k) {
            if (cur[static_cast<std::size_t>(k)] == 0.0) continue;
            for (int j = 0; j < p.demand.atom_count(); ++j) {
                const int kk = k + p.demand.values()[static_cast<std::size_t>(j)];
                if (kk > span) continue;
                const double m2 = cur[static_cast<std::size_t>(k)] *
                                  p.demand.probs()[static_cast<std::size_t>(j)];
                next[static_cast<std::size_t>(kk)] += m2;
            }
        }
        for (int k = 0; k <= span; ++k) mass_next += next[static_cast<std::size_t>(k)];
        setup_term += apow * alpha * (mass - mass_next) * K;
        apow *= alpha;
        cur.swap(next);

        const double tail_bound =
            apow * mass * (gmax / std::max(1e-300, 1.0 - alpha) + K);
        if (tail_bound <= 1e-14 * (1.0 + std::abs(total))) break;
    }
    return total + setup_term;
}

} // namespace ssinv
