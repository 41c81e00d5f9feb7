#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ssinv/examples_lab.hpp"
#include "ssinv/leadtime.hpp"
#include "ssinv/policy.hpp"
#include "ssinv/problem.hpp"
#include "ssinv/solver.hpp"
#include "ssinv/sweep.hpp"

namespace ssinv {

/// Raised on malformed problem documents; the message names the offending
/// field or atom.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json problem_to_json(const ProblemSpec& p);
ProblemSpec problem_from_json(const nlohmann::json& j);
ProblemSpec load_problem(const std::string& path);

/// Lead-time documents are the problem schema plus an "L" field.
LeadTimeSpec leadtime_from_json(const nlohmann::json& j);
LeadTimeSpec load_leadtime(const std::string& path);

nlohmann::json assumption_report_to_json(const AssumptionReport& rep);
nlohmann::json discounted_to_json(const DiscountedSolution& sol, bool include_tables = true);
nlohmann::json average_to_json(const AverageSolution& sol, bool include_tables = true);
nlohmann::json sim_stats_to_json(const SimStats& stats);
nlohmann::json check_reports_to_json(const std::vector<CheckReport>& reports);
nlohmann::json sweep_records_to_json(const std::vector<SweepRecord>& records);
nlohmann::json oscillation_to_json(const OscillationReport& rep);
nlohmann::json average_eval_to_json(const AverageEval& eval);
nlohmann::json discounted_eval_to_json(const DiscountedEval& eval, const SsPolicy& pol);

/// CSV with columns x, v, G, action (action of the extracted policy).
std::string solution_csv(const DiscountedSolution& sol);
/// Same columns for the average solution: u and H in place of v and G.
std::string average_csv(const AverageSolution& sol);
/// Columns alpha, s_alpha, S_alpha, r_alpha, S_star_alpha, m_alpha,
/// m_bar_alpha, scaled_gain, scaled_gain_bar, h_alpha_at_s.
std::string sweep_csv(const std::vector<SweepRecord>& records);
/// Columns alpha, f_alpha, u0, truncation_bound.
std::string oscillation_csv(const OscillationReport& rep);

void write_text_file(const std::string& path, const std::string& content);

} // namespace ssinv
