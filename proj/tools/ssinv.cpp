// Command-line front end: validate instances, solve them under discounted or
// average cost, run discount sweeps with the limit checks, reduce and check
// lead-time models, reproduce the worked examples, and evaluate or simulate
// explicit (s, S) policies.
//
// Exit codes: 0 success, 1 usage or parse error, 2 check failure,
// 3 solver non-convergence.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ssinv/examples_lab.hpp"
#include "ssinv/io.hpp"
#include "ssinv/leadtime.hpp"
#include "ssinv/policy.hpp"
#include "ssinv/solver.hpp"
#include "ssinv/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;
constexpr int kExitNoConvergence = 3;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"(s,S) inventory solver and verification lab"};
    app.require_subcommand(1);

    std::string problem_path;
    std::string out_dir = ".";
    double tol = 1e-9;
    std::uint64_t seed = 1u;
    int jobs = 1;
    std::string format = "both";
    app.add_option("--problem", problem_path, "problem JSON file")->expected(1);
    app.add_option("--out", out_dir, "output directory (default .)");
    app.add_option("--tol", tol, "solver tolerance");
    app.add_option("--seed", seed, "simulation seed");
    app.add_option("--jobs", jobs, "parallel solves for sweeps");
    app.add_option("--format", format, "csv|json|both")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    auto* validate = app.add_subcommand("validate", "check the standing assumptions");
    double v_alpha = 1.0;
    validate->add_option("--alpha", v_alpha, "discount factor to check (default 1)");

    auto* solve = app.add_subcommand("solve", "solve one instance");
    std::optional<double> s_alpha;
    bool s_average = false;
    solve->add_option("--alpha", s_alpha, "discount factor in (0,1)");
    solve->add_flag("--average", s_average, "average-cost criterion");

    auto* sweep = app.add_subcommand("sweep", "discount sweep with limit checks");
    std::vector<double> schedule;
    sweep->add_option("--schedule", schedule, "alphas (default 1 - 2^-k, k=1..12)");

    auto* leadtime = app.add_subcommand("leadtime", "reduce a lead-time model and verify");
    int lt_override = 0;
    long lt_horizon = 1000000;
    int lt_reps = 20;
    leadtime->add_option("--L", lt_override, "override the document's lead time");
    leadtime->add_option("--horizon", lt_horizon, "simulation horizon per replication");
    leadtime->add_option("--replications", lt_reps, "simulation replications");

    auto* examples = app.add_subcommand("examples", "run the worked-example suites");

    auto* evaluate = app.add_subcommand("evaluate", "evaluate an explicit (s,S) policy");
    int e_s = 0, e_S = 0;
    bool e_order_at_s = false;
    std::optional<double> e_alpha;
    bool e_average = false;
    evaluate->add_option("--s", e_s, "lower threshold")->required();
    evaluate->add_option("--S", e_S, "order-up-to level")->required();
    evaluate->add_flag("--order-at-s", e_order_at_s, "order at x = s as well");
    evaluate->add_option("--alpha", e_alpha, "discount factor in (0,1)");
    evaluate->add_flag("--average", e_average, "average-cost criterion");

    auto* simulate_cmd = app.add_subcommand("simulate", "simulate an explicit (s,S) policy");
    int m_s = 0, m_S = 0;
    long m_horizon = 100000;
    int m_reps = 10;
    simulate_cmd->add_option("--s", m_s, "lower threshold")->required();
    simulate_cmd->add_option("--S", m_S, "order-up-to level")->required();
    simulate_cmd->add_option("--horizon", m_horizon, "periods per replication");
    simulate_cmd->add_option("--replications", m_reps, "replications");

    CLI11_PARSE(app, argc, argv);

    ssinv::kern::set_threads(jobs);
    const bool want_csv = format != "json";
    const bool want_json = format != "csv";

    auto out_path = [&](const std::string& name) {
        return (std::filesystem::path(out_dir) / name).string();
    };

    try {
        std::filesystem::create_directories(out_dir);

        if (*examples) {
            const ssinv::SmallInstanceReport small = ssinv::small_instance_checks();
            ssinv::OscillationReport osc =
                ssinv::oscillation_report(ssinv::suggested_oscillation_schedule());
            bool chain_ok = true;
            for (double a : {0.5, 0.9, 1.0 - 1.0 / 33.0, 1.0 - 1.0 / 153.0}) {
                const auto cv =
                    ssinv::chain_relative_values(a, ssinv::chain_truncation_for(a));
                if (cv.max_gap > cv.agreement_bound) chain_ok = false;
            }
            const bool spread_ok = osc.spread >= 0.5;

            nlohmann::json rep{{"one_period_never_orders", small.one_period_never_orders},
                               {"terminal_credit_stage_is_threshold",
                                small.terminal_credit_stage_is_threshold},
                               {"infinite_horizon_is_threshold",
                                small.infinite_horizon_is_threshold},
                               {"chain_tables_agree", chain_ok},
                               {"oscillation", ssinv::oscillation_to_json(osc)},
                               {"spread_at_least_half", spread_ok}};
            if (want_json)
                ssinv::write_text_file(out_path("examples.json"), rep.dump(2) + "\n");
            if (want_csv)
                ssinv::write_text_file(out_path("examples.csv"), ssinv::oscillation_csv(osc));
            const bool ok = small.all_pass() && chain_ok && spread_ok;
            std::cout << (ok ? "examples: all checks passed" : "examples: CHECK FAILED")
                      << " (spread " << osc.spread << ")\n";
            return ok ? kExitOk : kExitCheckFailed;
        }

        if (problem_path.empty()) {
            std::cerr << "error: --problem is required for this command\n";
            return kExitUsage;
        }

        if (*validate) {
            const ssinv::ProblemSpec p = ssinv::load_problem(problem_path);
            if (!(v_alpha > 0.0) || v_alpha > 1.0) {
                std::cerr << "error: --alpha must be in (0, 1]\n";
                return kExitUsage;
            }
            const ssinv::AssumptionReport rep = ssinv::check_assumptions(p, v_alpha);
            if (want_json)
                ssinv::write_text_file(out_path("validate.json"),
                                       ssinv::assumption_report_to_json(rep).dump(2) + "\n");
            std::cout << "alpha " << rep.alpha << ": quasiconvex=" << rep.quasiconvex
                      << " left_limit_ok=" << rep.left_limit_ok
                      << " strict_decrease=" << rep.strictly_decreasing_left_of_r
                      << " r=" << rep.r_alpha << " S*=" << rep.s_star_alpha << "\n";
            if (rep.witness)
                std::cout << "quasiconvexity witness: f(" << rep.witness->x_mid << ")="
                          << rep.witness->f_mid << " > max(f(" << rep.witness->x_left << "), f("
                          << rep.witness->x_right << "))\n";
            return rep.all_pass() ? kExitOk : kExitCheckFailed;
        }

        if (*solve) {
            const ssinv::ProblemSpec p = ssinv::load_problem(problem_path);
            ssinv::SolveParams params;
            params.tol = tol;
            if (s_average) {
                const ssinv::AverageSolution sol = ssinv::relative_value_iteration(p, params);
                if (want_json)
                    ssinv::write_text_file(out_path("solution.json"),
                                           ssinv::average_to_json(sol).dump(2) + "\n");
                if (want_csv)
                    ssinv::write_text_file(out_path("solution.csv"), ssinv::average_csv(sol));
                std::cout << "average-cost: s=" << sol.s << " S=" << sol.S << " w=" << sol.w
                          << " acoe_residual=" << sol.acoe_residual << "\n";
                return sol.converged ? kExitOk : kExitNoConvergence;
            }
            if (!s_alpha || !(*s_alpha > 0.0) || !(*s_alpha < 1.0)) {
                std::cerr << "error: solve requires --alpha in (0, 1) or --average\n";
                return kExitUsage;
            }
            const ssinv::DiscountedSolution sol =
                ssinv::value_iteration_discounted(p, *s_alpha, params);
            if (want_json)
                ssinv::write_text_file(out_path("solution.json"),
                                       ssinv::discounted_to_json(sol).dump(2) + "\n");
            if (want_csv)
                ssinv::write_text_file(out_path("solution.csv"), ssinv::solution_csv(sol));
            std::cout << "alpha " << sol.alpha << ": s=" << sol.s << " S=" << sol.S
                      << " v(mid)=" << sol.v(p.grid().midpoint()) << "\n";
            return sol.converged ? kExitOk : kExitNoConvergence;
        }

        if (*sweep) {
            const ssinv::ProblemSpec p = ssinv::load_problem(problem_path);
            ssinv::SolveParams params;
            params.tol = tol;
            if (schedule.empty()) schedule = ssinv::default_schedule();
            const auto records = ssinv::run_sweep(p, schedule, params, jobs);
            const ssinv::AverageSolution avg = ssinv::relative_value_iteration(p, params);
            const auto checks = ssinv::run_all_checks(p, records, avg);

            if (want_csv)
                ssinv::write_text_file(out_path("sweep.csv"), ssinv::sweep_csv(records));
            if (want_json) {
                nlohmann::json rep{{"records", ssinv::sweep_records_to_json(records)},
                                   {"average", ssinv::average_to_json(avg, false)},
                                   {"checks", ssinv::check_reports_to_json(checks)}};
                ssinv::write_text_file(out_path("sweep.json"), rep.dump(2) + "\n");
            }
            bool all_pass = true;
            bool all_converged = avg.converged;
            for (const auto& r : records)
                all_converged = all_converged && r.standard.converged && r.transformed.converged;
            for (const auto& c : checks) {
                std::cout << (c.pass ? "[pass] " : c.inconclusive ? "[----] " : "[FAIL] ")
                          << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
                if (!c.pass && !c.inconclusive) all_pass = false;
            }
            if (!all_converged) return kExitNoConvergence;
            return all_pass ? kExitOk : kExitCheckFailed;
        }

        if (*leadtime) {
            ssinv::LeadTimeSpec spec = ssinv::load_leadtime(problem_path);
            if (lt_override > 0) spec = ssinv::LeadTimeSpec(spec.base, lt_override);
            const ssinv::ProblemSpec reduced = ssinv::reduce(spec);
            ssinv::SolveParams params;
            params.tol = tol;
            const ssinv::AverageSolution avg = ssinv::relative_value_iteration(reduced, params);
            const ssinv::SsPolicy pol{avg.s, avg.S, false};
            const ssinv::SimStats sim =
                ssinv::simulate_pipeline(pol, spec, lt_horizon, lt_reps, seed);
            const double gap = std::abs(sim.mean_cost_per_period - avg.w);
            const bool agree = gap <= std::max(sim.ci_halfwidth, 1e-3 * (1.0 + avg.w));

            if (want_json) {
                nlohmann::json rep{{"L", spec.lead_time},
                                   {"reduced", ssinv::problem_to_json(reduced)},
                                   {"average", ssinv::average_to_json(avg, false)},
                                   {"simulation", ssinv::sim_stats_to_json(sim)},
                                   {"gap", gap},
                                   {"within_ci", agree}};
                ssinv::write_text_file(out_path("leadtime.json"), rep.dump(2) + "\n");
            }
            std::cout << "L=" << spec.lead_time << ": reduced s=" << avg.s << " S=" << avg.S
                      << " w=" << avg.w << "; simulated " << sim.mean_cost_per_period << " +- "
                      << sim.ci_halfwidth << (agree ? " (agrees)" : " (DISAGREES)") << "\n";
            if (!avg.converged) return kExitNoConvergence;
            return agree ? kExitOk : kExitCheckFailed;
        }

        if (*evaluate) {
            const ssinv::ProblemSpec p = ssinv::load_problem(problem_path);
            const ssinv::SsPolicy pol{e_s, e_S, e_order_at_s};
            if (pol.s > pol.S) {
                std::cerr << "error: requires s <= S\n";
                return kExitUsage;
            }
            if (e_average) {
                const ssinv::AverageEval eval = ssinv::evaluate_average(pol, p);
                if (want_json)
                    ssinv::write_text_file(out_path("evaluate.json"),
                                           ssinv::average_eval_to_json(eval).dump(2) + "\n");
                std::cout << "policy (" << pol.s << ", " << pol.S << "): w=" << eval.w
                          << (eval.valid ? "" : " [" + eval.note + "]") << "\n";
                return eval.valid ? kExitOk : kExitCheckFailed;
            }
            if (!e_alpha || !(*e_alpha > 0.0) || !(*e_alpha < 1.0)) {
                std::cerr << "error: evaluate requires --alpha in (0, 1) or --average\n";
                return kExitUsage;
            }
            const ssinv::DiscountedEval eval = ssinv::evaluate_discounted(pol, p, *e_alpha);
            if (want_json)
                ssinv::write_text_file(out_path("evaluate.json"),
                                       ssinv::discounted_eval_to_json(eval, pol).dump(2) + "\n");
            std::cout << "policy (" << pol.s << ", " << pol.S
                      << "): v(mid)=" << eval.v(p.grid().midpoint())
                      << " residual=" << eval.residual << "\n";
            return kExitOk;
        }

        if (*simulate_cmd) {
            const ssinv::ProblemSpec p = ssinv::load_problem(problem_path);
            const ssinv::SsPolicy pol{m_s, m_S, false};
            if (pol.s > pol.S) {
                std::cerr << "error: requires s <= S\n";
                return kExitUsage;
            }
            const ssinv::SimStats stats = ssinv::simulate(pol, p, m_horizon, m_reps, seed);
            if (want_json)
                ssinv::write_text_file(out_path("simulate.json"),
                                       ssinv::sim_stats_to_json(stats).dump(2) + "\n");
            std::cout << "policy (" << pol.s << ", " << pol.S
                      << "): mean=" << stats.mean_cost_per_period << " +- "
                      << stats.ci_halfwidth << " over " << stats.replications << " x "
                      << stats.horizon << " periods\n";
            return kExitOk;
        }
    } catch (const ssinv::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
