#include "ssinv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ssinv {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end()) throw ParseError(std::string("missing field \"") + field + "\"");
    return *it;
}

double require_number(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_number()) throw ParseError(std::string("field \"") + field + "\" must be a number");
    return v.get<double>();
}

int require_int(const json& j, const char* field) {
    const json& v = require(j, field);
    if (!v.is_number_integer())
        throw ParseError(std::string("field \"") + field + "\" must be an integer");
    return v.get<int>();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

} // namespace

json problem_to_json(const ProblemSpec& p) {
    json demand = json::array();
    for (int k = 0; k < p.demand.atom_count(); ++k)
        demand.push_back({p.demand.values()[static_cast<std::size_t>(k)],
                          p.demand.probs()[static_cast<std::size_t>(k)]});
    return json{{"K", p.setup_cost},
                {"c_unit", p.unit_cost},
                {"demand", demand},
                {"holding",
                 {{"x_min", p.grid().x_min},
                  {"x_max", p.grid().x_max},
                  {"table", p.holding.table()},
                  {"left_slope", p.holding.left_slope()},
                  {"right_slope", p.holding.right_slope()}}}};
}

ProblemSpec problem_from_json(const json& j) {
    const json& demand = require(j, "demand");
    if (!demand.is_array() || demand.empty())
        throw ParseError("field \"demand\" must be a nonempty array of [value, prob] pairs");
    std::vector<std::pair<int, double>> atoms;
    for (std::size_t i = 0; i < demand.size(); ++i) {
        const json& atom = demand[i];
        if (!atom.is_array() || atom.size() != 2)
            throw ParseError("demand atom " + std::to_string(i) +
                             " must be a [value, prob] pair");
        if (!atom[0].is_number_integer())
            throw ParseError("demand atom " + std::to_string(i) + " value must be an integer");
        const double prob = atom[1].get<double>();
        if (prob < 0.0)
            throw ParseError("demand atom " + std::to_string(i) + " (value " +
                             atom[0].dump() + ") has negative probability");
        atoms.emplace_back(atom[0].get<int>(), prob);
    }

    const json& h = require(j, "holding");
    const int x_min = require_int(h, "x_min");
    const int x_max = require_int(h, "x_max");
    if (x_min >= x_max) throw ParseError("holding.x_min must be below holding.x_max");
    const json& table = require(h, "table");
    if (!table.is_array()) throw ParseError("holding.table must be an array");
    std::vector<double> values;
    for (const json& v : table) {
        if (!v.is_number()) throw ParseError("holding.table entries must be numbers");
        values.push_back(v.get<double>());
    }
    if (static_cast<int>(values.size()) != x_max - x_min + 1)
        throw ParseError("holding.table has " + std::to_string(values.size()) +
                         " entries for a grid of " + std::to_string(x_max - x_min + 1));

    try {
        DemandPmf d(std::move(atoms));
        HoldingCost hold(Grid(x_min, x_max), std::move(values), require_number(h, "left_slope"),
                         require_number(h, "right_slope"));
        return ProblemSpec(require_number(j, "K"), require_number(j, "c_unit"), std::move(d),
                           std::move(hold));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return problem_from_json(j);
}

LeadTimeSpec leadtime_from_json(const json& j) {
    const int L = require_int(j, "L");
    try {
        return LeadTimeSpec(problem_from_json(j), L);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

LeadTimeSpec load_leadtime(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return leadtime_from_json(j);
}

json assumption_report_to_json(const AssumptionReport& rep) {
    json out{{"alpha", rep.alpha},
             {"quasiconvex", rep.quasiconvex},
             {"left_limit_ok", rep.left_limit_ok},
             {"left_limit_infinite", rep.left_limit_infinite},
             {"strictly_decreasing_left_of_r", rep.strictly_decreasing_left_of_r},
             {"r_alpha", rep.r_alpha},
             {"S_star_alpha", rep.s_star_alpha},
             {"S_star_on_grid", rep.s_star_on_grid},
             {"alpha_star_bound", rep.alpha_star_bound},
             {"all_pass", rep.all_pass()}};
    if (!rep.left_limit_infinite && std::isfinite(rep.left_limit_value))
        out["left_limit_value"] = rep.left_limit_value;
    if (rep.witness) {
        out["witness"] = {{"x", rep.witness->x_left},
                          {"y", rep.witness->x_mid},
                          {"z", rep.witness->x_right},
                          {"f_x", rep.witness->f_left},
                          {"f_y", rep.witness->f_mid},
                          {"f_z", rep.witness->f_right}};
    }
    return out;
}

json discounted_to_json(const DiscountedSolution& sol, bool include_tables) {
    json out{{"alpha", sol.alpha},
             {"s", sol.s},
             {"S", sol.S},
             {"m_alpha", sol.m_alpha},
             {"iterations", sol.iterations},
             {"residual", sol.residual},
             {"value_error_bound", sol.value_error_bound},
             {"converged", sol.converged},
             {"grid", {{"x_min", sol.v.grid().x_min}, {"x_max", sol.v.grid().x_max}}}};
    if (include_tables) {
        out["v"] = sol.v.values();
        out["G"] = sol.g.values;
    }
    return out;
}

json average_to_json(const AverageSolution& sol, bool include_tables) {
    json out{{"w", sol.w},
             {"s", sol.s},
             {"S", sol.S},
             {"acoe_residual", sol.acoe_residual},
             {"iterations", sol.iterations},
             {"span_residual", sol.span_residual},
             {"converged", sol.converged},
             {"assumptions_ok", sol.assumptions_ok},
             {"grid", {{"x_min", sol.u.grid().x_min}, {"x_max", sol.u.grid().x_max}}}};
    if (include_tables) {
        out["u"] = sol.u.values();
        out["H"] = sol.h.values;
    }
    return out;
}

json sim_stats_to_json(const SimStats& stats) {
    return json{{"horizon", stats.horizon},
                {"replications", stats.replications},
                {"seed", stats.seed},
                {"mean_cost_per_period", stats.mean_cost_per_period},
                {"ci_halfwidth", stats.ci_halfwidth},
                {"rep_means", stats.rep_means},
                {"min_inventory", stats.min_inventory},
                {"max_inventory", stats.max_inventory}};
}

json check_reports_to_json(const std::vector<CheckReport>& reports) {
    json out = json::array();
    for (const CheckReport& r : reports)
        out.push_back({{"name", r.name},
                       {"pass", r.pass},
                       {"inconclusive", r.inconclusive},
                       {"detail", r.detail}});
    return out;
}

json sweep_records_to_json(const std::vector<SweepRecord>& records) {
    json out = json::array();
    for (const SweepRecord& r : records)
        out.push_back({{"alpha", r.alpha},
                       {"s_alpha", r.s},
                       {"S_alpha", r.S},
                       {"r_alpha", r.r_alpha},
                       {"S_star_alpha", r.s_star_alpha},
                       {"m_alpha", r.m_alpha},
                       {"m_bar_alpha", r.m_bar_alpha},
                       {"scaled_gain", r.scaled_gain},
                       {"scaled_gain_bar", r.scaled_gain_bar},
                       {"h_alpha_at_s", r.h_alpha_at_s},
                       {"converged", r.standard.converged && r.transformed.converged}});
    return out;
}

json oscillation_to_json(const OscillationReport& rep) {
    json rows = json::array();
    for (const OscillationRow& r : rep.rows)
        rows.push_back({{"alpha", r.alpha},
                        {"f_alpha", r.f_alpha},
                        {"u0", r.u0},
                        {"truncation_bound", r.truncation_bound}});
    return json{{"rows", rows}, {"spread", rep.spread}};
}

json average_eval_to_json(const AverageEval& eval) {
    json out{{"kind", "average"},
             {"method", "stationary"},
             {"valid", eval.valid},
             {"w", eval.w}};
    if (!eval.note.empty()) out["note"] = eval.note;
    if (eval.valid) {
        out["support"] = {{"lo", eval.support_lo}, {"hi", eval.support_hi}};
        out["stationary"] = eval.stationary;
        out["bias"] = eval.bias;
    }
    return out;
}

json discounted_eval_to_json(const DiscountedEval& eval, const SsPolicy& pol) {
    return json{{"kind", "discounted"},
                {"method", "linear-solve"},
                {"s", pol.s},
                {"S", pol.S},
                {"order_at_s", pol.order_at_s},
                {"residual", eval.residual},
                {"grid", {{"x_min", eval.v.grid().x_min}, {"x_max", eval.v.grid().x_max}}},
                {"v", eval.v.values()}};
}

std::string solution_csv(const DiscountedSolution& sol) {
    std::ostringstream out;
    out << "x,v,G,action\n";
    for (int x = sol.v.grid().x_min; x <= sol.v.grid().x_max; ++x) {
        const int action = x < sol.s ? sol.S - x : 0;
        out << x << ',' << fmt(sol.v(x)) << ',' << fmt(sol.g.at(x)) << ',' << action << '\n';
    }
    return out.str();
}

std::string average_csv(const AverageSolution& sol) {
    std::ostringstream out;
    out << "x,v,G,action\n";
    for (int x = sol.u.grid().x_min; x <= sol.u.grid().x_max; ++x) {
        const int action = x < sol.s ? sol.S - x : 0;
        out << x << ',' << fmt(sol.u(x)) << ',' << fmt(sol.h.at(x)) << ',' << action << '\n';
    }
    return out.str();
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
    std::ostringstream out;
    out << "alpha,s_alpha,S_alpha,r_alpha,S_star_alpha,m_alpha,m_bar_alpha,scaled_gain,"
           "scaled_gain_bar,h_alpha_at_s\n";
    for (const SweepRecord& r : records)
        out << fmt(r.alpha) << ',' << r.s << ',' << r.S << ',' << r.r_alpha << ','
            << r.s_star_alpha << ',' << fmt(r.m_alpha) << ',' << fmt(r.m_bar_alpha) << ','
            << fmt(r.scaled_gain) << ',' << fmt(r.scaled_gain_bar) << ','
            << fmt(r.h_alpha_at_s) << '\n';
    return out.str();
}

std::string oscillation_csv(const OscillationReport& rep) {
    std::ostringstream out;
    out << "alpha,f_alpha,u0,truncation_bound\n";
    for (const OscillationRow& r : rep.rows)
        out << fmt(r.alpha) << ',' << fmt(r.f_alpha) << ',' << fmt(r.u0) << ','
            << fmt(r.truncation_bound) << '\n';
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

} // namespace ssinv
