#include "ssinv/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ssinv {

ValueTable SweepRecord::relative_values() const {
    std::vector<double> u(standard.v.values());
    for (double& v : u) v -= m_alpha;
    return ValueTable(standard.v.grid(), std::move(u), BelowGrid::linear,
                      standard.v.extension_slope());
}

ValueTable SweepRecord::relative_values_bar() const {
    std::vector<double> u(transformed.v.values());
    for (double& v : u) v -= m_bar_alpha;
    return ValueTable(transformed.v.grid(), std::move(u), BelowGrid::constant);
}

std::vector<double> default_schedule(int points) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int k = 1; k <= points; ++k) out.push_back(1.0 - std::ldexp(1.0, -k));
    return out;
}

namespace {

SweepRecord make_record(const ProblemSpec& p, double alpha, const SolveParams& params) {
    SweepRecord rec;
    rec.alpha = alpha;
    rec.standard = value_iteration_discounted(p, alpha, params);
    rec.transformed = transformed_model_vi(p, alpha, params);
    rec.assumptions = check_assumptions(p, alpha, params.exec);
    rec.s = rec.standard.s;
    rec.S = rec.standard.S;
    rec.r_alpha = rec.assumptions.r_alpha;
    rec.s_star_alpha = rec.assumptions.s_star_alpha;
    rec.m_alpha = rec.standard.m_alpha;
    rec.m_bar_alpha = rec.transformed.m_alpha;
    rec.scaled_gain = (1.0 - alpha) * rec.m_alpha;
    rec.scaled_gain_bar = (1.0 - alpha) * rec.m_bar_alpha;
    rec.h_alpha_at_s = expected_shifted_cost(p.holding, p.demand, rec.s) +
                       (1.0 - alpha) * p.unit_cost * rec.s +
                       alpha * p.unit_cost * p.demand.mean();
    return rec;
}

} // namespace

std::vector<SweepRecord> run_sweep(const ProblemSpec& p, const std::vector<double>& schedule,
                                   const SolveParams& params, int jobs) {
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0) || schedule[i] >= 1.0)
            throw std::invalid_argument("run_sweep: schedule values must lie in (0, 1)");
        if (i > 0 && schedule[i] <= schedule[i - 1])
            throw std::invalid_argument("run_sweep: schedule must be strictly increasing");
    }
    std::vector<SweepRecord> out(schedule.size());
    SolveParams inner = params;
    if (jobs > 1) inner.exec = Exec::serial; // per-alpha solves own the threads
    const long count = static_cast<long>(schedule.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) if (jobs > 1) num_threads(jobs > 1 ? jobs : 1)
#endif
    for (long i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] =
            make_record(p, schedule[static_cast<std::size_t>(i)], inner);
    return out;
}

namespace {

// max over x <= y (window-restricted) of f(x) - f(y) - allowance.
double worst_pair_drop(const std::vector<double>& f, const Grid& grid, const Window& w,
                       double allowance) {
    double worst = -std::numeric_limits<double>::infinity();
    double suffix = std::numeric_limits<double>::infinity();
    for (int x = std::min(w.hi, grid.x_max); x >= std::max(w.lo, grid.x_min); --x) {
        suffix = std::min(suffix, f[static_cast<std::size_t>(grid.index(x))]);
        worst = std::max(worst, f[static_cast<std::size_t>(grid.index(x))] - suffix - allowance);
    }
    return worst;
}

} // namespace

double worst_k_bounded_monotonicity(const ValueTable& v, double setup_cost, const Window& w) {
    return worst_pair_drop(v.values(), v.grid(), w, setup_cost);
}

double worst_g_increment_bound(const GTable& g, const std::vector<double>& stage_cost,
                               double bound_drop, const Window& w) {
    std::vector<double> phi(g.values.size());
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = g.values[i] - stage_cost[i];
    return worst_pair_drop(phi, g.grid, w, bound_drop);
}

double worst_monotone_region(const std::vector<double>& values, const Grid& grid, int r,
                             const Window& w) {
    double worst = -std::numeric_limits<double>::infinity();
    const int lo = std::max(w.lo, grid.x_min);
    const int hi = std::min({w.hi, r, grid.x_max});
    for (int x = lo; x + 1 <= hi; ++x)
        worst = std::max(worst, values[static_cast<std::size_t>(grid.index(x + 1))] -
                                    values[static_cast<std::size_t>(grid.index(x))]);
    return worst;
}

double worst_relative_value_k_monotonicity(const ValueTable& u, double unit_cost,
                                           double setup_cost, const Window& w) {
    std::vector<double> phi(u.values().size());
    for (int i = 0; i < u.grid().size(); ++i)
        phi[static_cast<std::size_t>(i)] = u.at_index(i) + unit_cost * u.grid().point(i);
    return worst_pair_drop(phi, u.grid(), w, setup_cost);
}

CheckReport check_threshold_convergence(const std::vector<SweepRecord>& records,
                                        const AverageSolution& avg, const ProblemSpec& p,
                                        double gain_rel_tol, int stable_tail) {
    CheckReport rep;
    rep.name = "threshold_convergence";
    if (records.empty()) {
        rep.inconclusive = true;
        rep.detail = "no records";
        return rep;
    }
    const SweepRecord& last = records.back();
    std::ostringstream detail;
    bool ok = true;

    const int tail = std::min<int>(stable_tail, static_cast<int>(records.size()));
    for (std::size_t i = records.size() - static_cast<std::size_t>(tail); i < records.size(); ++i)
        if (records[i].s != last.s) {
            ok = false;
            detail << "s not stable over last " << tail << " points (alpha=" << records[i].alpha
                   << " gives s=" << records[i].s << " vs " << last.s << "); ";
        }

    if (std::abs(last.s - avg.s) > 1) {
        ok = false;
        detail << "terminal s=" << last.s << " vs average-cost s=" << avg.s << "; ";
    }
    const int r1 = check_assumptions(p, 1.0).r_alpha;
    if (last.s > r1) {
        ok = false;
        detail << "terminal s=" << last.s << " exceeds r_1=" << r1 << "; ";
    }
    const AverageEval eval = evaluate_average(SsPolicy{last.s, last.S, false}, p);
    if (!eval.valid) {
        ok = false;
        detail << "terminal policy not evaluable: " << eval.note << "; ";
    } else if (std::abs(eval.w - avg.w) > gain_rel_tol * (1.0 + std::abs(avg.w))) {
        ok = false;
        detail << "terminal policy gain " << eval.w << " vs w=" << avg.w << "; ";
    }
    rep.pass = ok;
    rep.detail = detail.str();
    return rep;
}

CheckReport check_gain_limits(const std::vector<SweepRecord>& records,
                              const AverageSolution& avg, double terminal_rel_tol) {
    CheckReport rep;
    rep.name = "gain_limits";
    if (records.size() < 3) {
        rep.inconclusive = true;
        rep.detail = "needs at least 3 records";
        return rep;
    }
    const double w = avg.w;
    auto gap = [&](const SweepRecord& r, int which) {
        const double v = which == 0 ? r.scaled_gain : which == 1 ? r.scaled_gain_bar
                                                                 : r.h_alpha_at_s;
        return std::abs(v - w);
    };
    static const char* names[3] = {"(1-a)m", "(1-a)mbar", "E[h_a(s-D)]"};
    std::ostringstream detail;
    bool ok = true;
    double worst_terminal = 0.0;
    const std::size_t n = records.size();
    for (int which = 0; which < 3; ++which) {
        const double g1 = gap(records[n - 3], which);
        const double g2 = gap(records[n - 2], which);
        const double g3 = gap(records[n - 1], which);
        worst_terminal = std::max(worst_terminal, g3);
        if (g3 > terminal_rel_tol * (1.0 + std::abs(w))) {
            ok = false;
            detail << names[which] << " terminal gap " << g3 << "; ";
        }
        if (!(g3 < g2 && g2 < g1)) {
            ok = false;
            detail << names[which] << " gaps not decreasing (" << g1 << ", " << g2 << ", " << g3
                   << "); ";
        }
    }
    detail << "max terminal gap " << worst_terminal;
    rep.pass = ok;
    rep.detail = detail.str();
    return rep;
}

CheckReport check_lemma_value_identity(const ProblemSpec& p, const SweepRecord& rec) {
    CheckReport rep;
    rep.name = "value_identity_bracket";
    const double alpha = rec.alpha;
    const double c = p.unit_cost;
    const double rhs = (1.0 - alpha) * (rec.m_bar_alpha + p.setup_cost);
    const double lhs_low = rec.h_alpha_at_s;
    const double lhs_high = expected_shifted_cost(p.holding, p.demand, rec.s - 1) +
                            (1.0 - alpha) * c * (rec.s - 1) + alpha * c * p.demand.mean();
    double eps_grid = 0.0;
    if (rec.s - 1 >= p.grid().x_min)
        eps_grid = rec.standard.g.at(rec.s - 1) - rec.standard.g.at(rec.s);
    const double ftol = 1e-9 * (1.0 + std::abs(rhs));
    std::ostringstream detail;
    bool ok = true;
    if (lhs_low > rhs + eps_grid + ftol) {
        ok = false;
        detail << "E[h_a(s-D)]=" << lhs_low << " exceeds (1-a)(mbar+K)=" << rhs
               << " + eps=" << eps_grid << "; ";
    }
    if (rhs > lhs_high + eps_grid + ftol) {
        ok = false;
        detail << "(1-a)(mbar+K)=" << rhs << " exceeds E[h_a(s-1-D)]=" << lhs_high
               << " + eps=" << eps_grid << "; ";
    }
    detail << "bracket [" << lhs_low << ", " << lhs_high << "] target " << rhs << " eps "
           << eps_grid;
    rep.pass = ok;
    rep.detail = detail.str();
    return rep;
}

double gcal_default_tol(const GTable& g, double setup_cost) {
    return 1e-7 * (1.0 + std::abs(setup_cost + g.min_value()));
}

GcalSet compute_gcal(const GTable& g, double setup_cost, double tol) {
    GcalSet set;
    set.tol = tol;
    const auto [s, S] = extract_thresholds(g, setup_cost);
    set.s = s;
    set.S = S;
    const double bar = setup_cost + g.at(S);
    set.deficit_at_s = bar - g.at(s);
    for (int x = s; x <= S; ++x) {
        if (std::abs(g.at(x) - bar) <= tol)
            set.members.push_back(x);
        else
            break;
    }
    return set;
}

CheckReport check_u_convergence(const std::vector<SweepRecord>& records,
                                const AverageSolution& avg, const Window& window,
                                double terminal_rel_tol) {
    CheckReport rep;
    rep.name = "u_convergence";
    if (records.size() < 3) {
        rep.inconclusive = true;
        rep.detail = "needs at least 3 records";
        return rep;
    }
    auto sup_gap = [&](const SweepRecord& r) {
        const ValueTable u = r.relative_values();
        double worst = 0.0;
        for (int x = std::max(window.lo, avg.u.grid().x_min);
             x <= std::min(window.hi, avg.u.grid().x_max); ++x)
            worst = std::max(worst, std::abs(u(x) - avg.u(x)));
        return worst;
    };
    const std::size_t n = records.size();
    const double g1 = sup_gap(records[n - 3]);
    const double g2 = sup_gap(records[n - 2]);
    const double g3 = sup_gap(records[n - 1]);
    double umax = 0.0;
    for (double v : avg.u.values()) umax = std::max(umax, v);

    std::ostringstream detail;
    bool ok = true;
    if (g3 > terminal_rel_tol * (1.0 + umax)) {
        ok = false;
        detail << "terminal sup gap " << g3 << " vs allowance " << terminal_rel_tol * (1.0 + umax)
               << "; ";
    }
    if (!(g3 < g2 && g2 < g1)) {
        ok = false;
        detail << "sup gaps not decreasing (" << g1 << ", " << g2 << ", " << g3 << "); ";
    }
    detail << "last three sup gaps " << g1 << ", " << g2 << ", " << g3;
    rep.pass = ok;
    rep.detail = detail.str();
    return rep;
}

ModulusReport equicontinuity_probe(const std::vector<SweepRecord>& records, int delta,
                                   const Window& window) {
    ModulusReport rep;
    rep.modulus.reserve(records.size());
    for (const SweepRecord& r : records) {
        const ValueTable u = r.relative_values();
        const Grid& g = u.grid();
        double m = 0.0;
        for (int x = std::max(window.lo, g.x_min); x <= std::min(window.hi, g.x_max); ++x)
            for (int k = 1; k <= delta && x + k <= std::min(window.hi, g.x_max); ++k)
                m = std::max(m, std::abs(u(x) - u(x + k)));
        rep.modulus.push_back(m);
        rep.worst = std::max(rep.worst, m);
    }
    if (!rep.modulus.empty()) {
        const double base = rep.modulus.front();
        rep.bounded = rep.worst <= 1.1 * base + 1e-12;
    }
    return rep;
}

AcoeReport acoe_residual(const AverageSolution& avg, const ProblemSpec& p, const Window& window) {
    AcoeReport rep;
    const Grid grid = p.grid();
    const int n = grid.size();
    const double c = p.unit_cost;
    const double K = p.setup_cost;

    std::vector<double> htilde(static_cast<std::size_t>(n));
    std::vector<double> cont(static_cast<std::size_t>(n));
    kern::shifted_expectation(Exec::serial, p.holding, p.demand, grid, htilde.data());
    kern::shifted_expectation(Exec::serial, avg.u, p.demand, grid, cont.data());

    std::vector<double> H(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        H[static_cast<std::size_t>(i)] =
            c * grid.point(i) + htilde[static_cast<std::size_t>(i)] +
            cont[static_cast<std::size_t>(i)];
    std::vector<double> sm(static_cast<std::size_t>(n));
    kern::suffix_min(H.data(), n, sm.data());

    for (int i = 0; i < n; ++i) {
        const int x = grid.point(i);
        if (!window.contains(x)) continue;
        const double rhs = std::min(K + sm[static_cast<std::size_t>(i)],
                                    H[static_cast<std::size_t>(i)]) -
                           c * x;
        rep.max_gap = std::max(rep.max_gap, std::abs(avg.w + avg.u(x) - rhs));
    }

    GTable h;
    h.alpha = 1.0;
    h.grid = grid;
    h.values = H;
    const auto [s2, S2] = extract_thresholds(h, K);
    rep.thresholds_consistent = (s2 == avg.s && S2 == avg.S);
    rep.boundary_defect = std::abs(h.at(avg.s) - (K + h.at(avg.S)));
    return rep;
}

CheckReport check_r_monotone(const std::vector<SweepRecord>& records, const ProblemSpec& p) {
    CheckReport rep;
    rep.name = "r_alpha_monotone";
    const int r1 = check_assumptions(p, 1.0).r_alpha;
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (i > 0 && records[i].r_alpha < records[i - 1].r_alpha) {
            ok = false;
            detail << "r decreases at alpha=" << records[i].alpha << "; ";
        }
        if (records[i].r_alpha > r1) {
            ok = false;
            detail << "r=" << records[i].r_alpha << " above r_1=" << r1 << " at alpha="
                   << records[i].alpha << "; ";
        }
    }
    rep.pass = ok;
    rep.detail = detail.str();
    return rep;
}

CheckReport check_mbar_bracket(const std::vector<SweepRecord>& records, const ProblemSpec& p) {
    CheckReport rep;
    rep.name = "mbar_bracket";
    bool ok = true;
    std::ostringstream detail;
    for (const SweepRecord& r : records) {
        const double lo = r.m_alpha + p.unit_cost * r.s;
        const double hi = r.m_alpha + p.unit_cost * r.standard.v.min_point();
        const double ftol = 1e-9 * (1.0 + std::abs(r.m_bar_alpha));
        if (r.m_bar_alpha < lo - ftol || r.m_bar_alpha > hi + ftol) {
            ok = false;
            detail << "alpha=" << r.alpha << ": mbar=" << r.m_bar_alpha << " outside [" << lo
                   << ", " << hi << "]; ";
        }
    }
    rep.pass = ok;
    rep.detail = detail.str();
    return rep;
}

std::vector<CheckReport> run_all_checks(const ProblemSpec& p,
                                        const std::vector<SweepRecord>& records,
                                        const AverageSolution& avg) {
    std::vector<CheckReport> out;
    const Window win = interior_window(p);

    out.push_back(check_threshold_convergence(records, avg, p));
    out.push_back(check_gain_limits(records, avg));
    if (!records.empty()) out.push_back(check_lemma_value_identity(p, records.back()));
    out.push_back(check_r_monotone(records, p));
    out.push_back(check_mbar_bracket(records, p));
    out.push_back(check_u_convergence(records, avg, win));

    {
        CheckReport rep;
        rep.name = "threshold_bound_chain";
        bool ok = true;
        std::ostringstream detail;
        for (const SweepRecord& r : records)
            if (!(r.s <= r.r_alpha && r.r_alpha <= r.S && r.S <= r.s_star_alpha)) {
                ok = false;
                detail << "alpha=" << r.alpha << ": (" << r.s << ", " << r.r_alpha << ", " << r.S
                       << ", " << r.s_star_alpha << "); ";
            }
        rep.pass = ok;
        rep.detail = detail.str();
        out.push_back(rep);
    }

    {
        CheckReport rep;
        rep.name = "structural_inequalities";
        const double tol = 1e-8;
        bool ok = true;
        std::ostringstream detail;
        for (const SweepRecord& r : records) {
            const TransformedCost tc = transformed_expected_cost(p, r.alpha);
            double worst = worst_k_bounded_monotonicity(r.transformed.v, p.setup_cost, win);
            if (worst > tol) {
                ok = false;
                detail << "K-monotonicity broken by " << worst << " at alpha=" << r.alpha << "; ";
            }
            worst = worst_g_increment_bound(r.transformed.g, tc.values,
                                            r.alpha * p.setup_cost, win);
            if (worst > tol) {
                ok = false;
                detail << "G-increment broken by " << worst << " at alpha=" << r.alpha << "; ";
            }
            worst = worst_monotone_region(r.transformed.v.values(), p.grid(), r.r_alpha, win);
            if (worst > tol) {
                ok = false;
                detail << "vbar monotone region broken by " << worst << " at alpha=" << r.alpha
                       << "; ";
            }
            worst = worst_monotone_region(r.transformed.g.values, p.grid(), r.r_alpha, win);
            if (worst > tol) {
                ok = false;
                detail << "Gbar monotone region broken by " << worst << " at alpha=" << r.alpha
                       << "; ";
            }
        }
        rep.pass = ok;
        rep.detail = detail.str();
        out.push_back(rep);
    }

    {
        CheckReport rep;
        rep.name = "acoe_residual";
        const AcoeReport a = acoe_residual(avg, p, win);
        rep.pass = a.max_gap <= 5e-9 * (1.0 + std::abs(avg.w)) && a.thresholds_consistent;
        std::ostringstream detail;
        detail << "max gap " << a.max_gap << ", boundary defect " << a.boundary_defect
               << (a.thresholds_consistent ? "" : ", thresholds inconsistent");
        rep.detail = detail.str();
        out.push_back(rep);
    }

    return out;
}

} // namespace ssinv
