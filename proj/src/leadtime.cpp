#include "ssinv/leadtime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ssinv {

LeadTimeSpec::LeadTimeSpec(ProblemSpec b, int L) : base(std::move(b)), lead_time(L) {
    if (L < 1) throw std::invalid_argument("LeadTimeSpec: lead time must be >= 1");
}

ProblemSpec reduce(const LeadTimeSpec& spec) {
    const ProblemSpec& b = spec.base;
    const DemandPmf total = convolve_demand(b.demand, spec.lead_time);
    const Grid src = b.grid();
    const Grid dst(src.x_min - spec.lead_time * b.demand.max_value(), src.x_max);

    std::vector<double> table(static_cast<std::size_t>(dst.size()));
    for (int i = 0; i < dst.size(); ++i) {
        const double v = expected_shifted_cost(b.holding, total, dst.point(i));
        if (!std::isfinite(v) || v > 1e15)
            throw std::invalid_argument("reduce: convolved holding cost is not finite");
        table[static_cast<std::size_t>(i)] = v;
    }
    // Far tails of E[h^L(y - S_L)] stay linear with the original slopes.
    HoldingCost hstar(dst, std::move(table), b.holding.left_slope(), b.holding.right_slope());
    return ProblemSpec(b.setup_cost, b.unit_cost, b.demand, std::move(hstar));
}

double pipeline_offset(const LeadTimeSpec& spec, double alpha, const PipelineState& state) {
    const ProblemSpec& b = spec.base;
    if (static_cast<int>(state.pending.size()) != spec.lead_time)
        throw std::invalid_argument("pipeline_offset: pending length must equal the lead time");
    double offset = 0.0;
    double apow = 1.0;
    int arrived = 0;
    DemandPmf sum = b.demand; // S_{t+1}
    for (int t = 0; t < spec.lead_time; ++t) {
        const int q = state.pending[static_cast<std::size_t>(t)];
        if (q < 0) throw std::invalid_argument("pipeline_offset: pending orders must be >= 0");
        arrived += q;
        const double stage = (q > 0 ? b.setup_cost : 0.0) + b.unit_cost * q +
                             expected_shifted_cost(b.holding, sum, state.on_hand + arrived);
        offset += apow * stage;
        apow *= alpha;
        if (t + 1 < spec.lead_time) sum = sum.convolve(b.demand);
    }
    return offset;
}

std::size_t AugmentedSolution::index(int x, const std::vector<int>& pending) const {
    std::size_t idx = static_cast<std::size_t>(x - x_range.x_min);
    const std::size_t qdim = static_cast<std::size_t>(q_cap) + 1;
    for (int q : pending) idx = idx * qdim + static_cast<std::size_t>(q);
    return idx;
}

double AugmentedSolution::value(const PipelineState& state) const {
    if (static_cast<int>(state.pending.size()) != lead_time)
        throw std::invalid_argument("AugmentedSolution: pending length must equal lead time");
    for (int q : state.pending)
        if (q < 0 || q > q_cap)
            throw std::invalid_argument("AugmentedSolution: pending order outside [0, q_cap]");
    if (!x_range.contains(state.on_hand))
        throw std::invalid_argument("AugmentedSolution: on-hand outside solved range");
    return table[index(state.on_hand, state.pending)];
}

AugmentedSolution augmented_vi(const LeadTimeSpec& spec, double alpha, const SolveParams& params,
                               std::size_t state_cap) {
    if (spec.lead_time > 2)
        throw std::invalid_argument("augmented_vi: oracle supports lead times 1 and 2");
    if (!(alpha > 0.0) || alpha >= 1.0)
        throw std::invalid_argument("augmented_vi: alpha must be in (0, 1)");
    const ProblemSpec& b = spec.base;
    const int L = spec.lead_time;
    const Grid base = b.grid();
    const int dmax = b.demand.max_value();
    const double c = b.unit_cost;
    const double K = b.setup_cost;

    AugmentedSolution sol;
    sol.alpha = alpha;
    sol.lead_time = L;
    sol.q_cap = base.x_max - base.x_min;
    sol.position_cap = base.x_max;

    // Depth below the base grid at which boundary influence, attenuated by
    // one discount factor per d_max of descent, is negligible at tested
    // states.
    const double hmax = std::max(b.holding(base.x_min), b.holding(base.x_max));
    const double vscale =
        100.0 * (K + (c + b.holding.left_slope() + b.holding.right_slope()) *
                         (base.x_max - base.x_min + sol.q_cap * L) +
                 hmax) /
        (1.0 - alpha);
    const int depth =
        dmax * static_cast<int>(std::ceil(std::log(vscale / 1e-9) / -std::log(alpha))) + 2 * dmax;
    // On-hand stock never exceeds the inventory position, which the action
    // cap keeps at or below base.x_max from any cap-respecting state.
    sol.x_range = Grid(base.x_min - depth, base.x_max);

    const std::size_t qdim = static_cast<std::size_t>(sol.q_cap) + 1;
    const std::size_t nx = static_cast<std::size_t>(sol.x_range.size());
    std::size_t states = nx;
    for (int l = 0; l < L; ++l) states *= qdim;
    if (states > state_cap)
        throw std::invalid_argument("augmented_vi: state space of " + std::to_string(states) +
                                    " exceeds the cap");

    // Stage cost pieces: cost(x, q1) = K 1{q1>0} + c q1 + E[h^L(x + q1 - D)].
    const Grid zgrid(sol.x_range.x_min, base.x_max + sol.q_cap);
    std::vector<double> htilde(static_cast<std::size_t>(zgrid.size()));
    kern::shifted_expectation(params.exec, b.holding, b.demand, zgrid, htilde.data());

    // Out-of-range extensions slope steeply so the boundaries never look
    // attractive to the minimization. Queries above the top can only come
    // from states that already violate the position cap and are unreachable
    // from any capped state, so their values never feed tested states.
    const double ext_lo_slope = b.holding.left_slope() / (1.0 - alpha) + c;
    const double ext_hi_slope = b.holding.right_slope() / (1.0 - alpha) + c;

    std::vector<double> v(states, 0.0);
    std::vector<double> vnext(states);
    const std::size_t rest = L == 1 ? 1 : qdim; // trailing queue dimensions
    const std::size_t stride = qdim * rest;
    std::vector<double> T(static_cast<std::size_t>(zgrid.size()) * rest * qdim);
    std::vector<double> P(T.size());

    auto vat = [&](int x, std::size_t tail_idx) {
        // tail_idx encodes the queue after the shift (q2..qL, a).
        if (x < sol.x_range.x_min)
            return v[tail_idx] + ext_lo_slope * (sol.x_range.x_min - x);
        if (x > sol.x_range.x_max)
            return v[(nx - 1) * stride + tail_idx] + ext_hi_slope * (x - sol.x_range.x_max);
        return v[static_cast<std::size_t>(x - sol.x_range.x_min) * stride + tail_idx];
    };

    const double stop_target = params.tol * (1.0 - alpha) / (2.0 * alpha);
    double residual = std::numeric_limits<double>::infinity();
    long iter = 0;
    const long nzl = static_cast<long>(zgrid.size());
    for (; iter < params.max_iter; ++iter) {
        // T(z, tail, a) = E_D v(z - D, tail ++ a); prefix-min over a.
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) if (params.exec == Exec::parallel)
#endif
        for (long zi = 0; zi < nzl; ++zi) {
            const int z = zgrid.point(static_cast<int>(zi));
            for (std::size_t r = 0; r < rest; ++r) {
                double* trow = &T[(static_cast<std::size_t>(zi) * rest + r) * qdim];
                double* prow = &P[(static_cast<std::size_t>(zi) * rest + r) * qdim];
                for (std::size_t a = 0; a < qdim; ++a) {
                    const std::size_t tail = r * qdim + a;
                    double acc = 0.0;
                    for (int k = 0; k < b.demand.atom_count(); ++k)
                        acc += b.demand.probs()[static_cast<std::size_t>(k)] *
                               vat(z - b.demand.values()[static_cast<std::size_t>(k)], tail);
                    trow[a] = acc;
                }
                prow[0] = trow[0];
                for (std::size_t a = 1; a < qdim; ++a) prow[a] = std::min(prow[a - 1], trow[a]);
            }
        }

        residual = 0.0;
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) reduction(max : residual) \
    if (params.exec == Exec::parallel)
#endif
        for (long xi = 0; xi < static_cast<long>(nx); ++xi) {
            const int x = sol.x_range.point(static_cast<int>(xi));
            for (std::size_t q1 = 0; q1 < qdim; ++q1) {
                const int z = x + static_cast<int>(q1);
                const double stage = (q1 > 0 ? K : 0.0) + c * static_cast<double>(q1) +
                                     htilde[static_cast<std::size_t>(zgrid.index(z))];
                for (std::size_t r = 0; r < rest; ++r) {
                    int position = z + (L == 2 ? static_cast<int>(r) : 0);
                    int amax = sol.position_cap - position;
                    amax = std::clamp(amax, 0, sol.q_cap);
                    const double cont =
                        P[(static_cast<std::size_t>(zgrid.index(z)) * rest + r) * qdim +
                          static_cast<std::size_t>(amax)];
                    const std::size_t idx =
                        (static_cast<std::size_t>(xi) * qdim + q1) * rest + r;
                    const double nv = stage + alpha * cont;
                    residual = std::max(residual, std::abs(nv - v[idx]));
                    vnext[idx] = nv;
                }
            }
        }
        v.swap(vnext);
        if (residual <= stop_target) {
            sol.converged = true;
            ++iter;
            break;
        }
    }

    sol.iterations = iter;
    sol.residual = residual;
    sol.table = std::move(v);
    return sol;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

SimStats simulate_pipeline(const SsPolicy& pol_on_position, const LeadTimeSpec& spec,
                           long horizon, int replications, std::uint64_t seed) {
    if (horizon < spec.lead_time)
        throw std::invalid_argument("simulate_pipeline: horizon must be >= lead time");
    if (replications < 1)
        throw std::invalid_argument("simulate_pipeline: replications must be >= 1");
    const ProblemSpec& b = spec.base;

    std::vector<double> cdf(static_cast<std::size_t>(b.demand.atom_count()));
    double acc = 0.0;
    for (int k = 0; k < b.demand.atom_count(); ++k) {
        acc += b.demand.probs()[static_cast<std::size_t>(k)];
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

    const double K = b.setup_cost;
    const double c = b.unit_cost;

    for (int rep = 0; rep < replications; ++rep) {
        std::mt19937_64 rng(splitmix64(seed ^ (0x5851F42D4C957F2Dull * (rep + 1))));
        int x = pol_on_position.S;
        std::vector<int> queue(static_cast<std::size_t>(spec.lead_time), 0);
        std::size_t head = 0;
        int pending_sum = 0;
        double total = 0.0;
        for (long t = 0; t < horizon; ++t) {
            const int position = x + pending_sum;
            const int order = pol_on_position.action(position);

            const int arriving = queue[head];
            queue[head] = order;
            head = (head + 1) % queue.size();
            pending_sum += order - arriving;

            const double u = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
            int d = b.demand.values().back();
            for (int k = 0; k < b.demand.atom_count(); ++k)
                if (u < cdf[static_cast<std::size_t>(k)]) {
                    d = b.demand.values()[static_cast<std::size_t>(k)];
                    break;
                }

            const int next = x + arriving - d;
            total += (arriving > 0 ? K + c * arriving : 0.0) + b.holding(next);
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
    }
    return stats;
}

} // namespace ssinv
