#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "instances.hpp"
#include "ssinv/problem.hpp"
#include "ssinv/solver.hpp"

using namespace ssinv;
using ssinv::testing::canon1;
using ssinv::testing::canon2;
using ssinv::testing::canon3;

namespace {

// Independent quasiconvexity oracle: every triple x < y < z must satisfy
// f(y) <= max(f(x), f(z)).
bool quasiconvex_brute_force(const std::vector<double>& f) {
    const int n = static_cast<int>(f.size());
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            for (int z = y + 1; z < n; ++z)
                if (f[static_cast<std::size_t>(y)] >
                    std::max(f[static_cast<std::size_t>(x)], f[static_cast<std::size_t>(z)]))
                    return false;
    return true;
}

} // namespace

TEST_CASE("demand pmf validates its invariants") {
    CHECK_THROWS(DemandPmf({{0, 1.0}}));                  // P(D > 0) = 0
    CHECK_THROWS(DemandPmf({{1, 0.5}, {2, 0.6}}));        // sums above 1
    CHECK_THROWS(DemandPmf({{1, 0.5}, {1, 0.5}}));        // duplicate value
    CHECK_THROWS(DemandPmf({{-1, 0.5}, {2, 0.5}}));       // negative value
    CHECK_THROWS(DemandPmf({{1, -0.25}, {2, 1.25}}));     // negative probability

    const DemandPmf d({{3, 0.2}, {1, 0.5}, {2, 0.3}});
    CHECK(d.values() == std::vector<int>{1, 2, 3}); // sorted
    CHECK(d.mean() == doctest::Approx(1.7).epsilon(1e-14));
    CHECK(d.max_value() == 3);
    CHECK(d.prob_zero() == 0.0);
    CHECK(d.prob_of(2) == doctest::Approx(0.3));
    CHECK(d.prob_of(7) == 0.0);
}

TEST_CASE("holding cost extrapolates linearly outside the table") {
    const HoldingCost h = HoldingCost::two_sided_linear(Grid(-5, 5), 1.0, 1.0);
    CHECK(h(-5) == doctest::Approx(5.0));
    CHECK(h(-9) == doctest::Approx(9.0));  // left tail
    CHECK(h(8) == doctest::Approx(8.0));   // right tail
    CHECK(h(0) == 0.0);

    CHECK_THROWS(HoldingCost(Grid(0, 3), {0.0, 1.0, 2.0, 3.0}, 0.0, 1.0)); // zero slope
    CHECK_THROWS(HoldingCost(Grid(0, 3), {0.0, -1.0, 2.0, 3.0}, 1.0, 1.0)); // negative value
    CHECK_THROWS(HoldingCost(Grid(0, 3), {0.0, 1.0}, 1.0, 1.0));            // size mismatch
}

TEST_CASE("problem spec validates parameters") {
    CHECK_THROWS(ProblemSpec(0.0, 1.0, DemandPmf::point_mass(1),
                             HoldingCost::two_sided_linear(Grid(-5, 5), 1.0, 1.0)));
    CHECK_THROWS(ProblemSpec(1.0, 0.0, DemandPmf::point_mass(1),
                             HoldingCost::two_sided_linear(Grid(-5, 5), 1.0, 1.0)));
    // Grid too narrow for the largest demand atom.
    CHECK_THROWS(ProblemSpec(1.0, 1.0, DemandPmf({{4, 1.0}}),
                             HoldingCost::two_sided_linear(Grid(-4, 4), 1.0, 1.0)));
}

TEST_CASE("expected shifted cost sums atoms with tail extrapolation") {
    // Point mass at 1 queried at the grid's left edge reaches the tail.
    const HoldingCost zero_table(Grid(-3, 3), std::vector<double>(7, 0.0), 1.0, 1.0);
    const DemandPmf unit = DemandPmf::point_mass(1);
    CHECK(expected_shifted_cost(zero_table, unit, -3) == doctest::Approx(1.0));

    const HoldingCost habs = HoldingCost::two_sided_linear(Grid(-5, 5), 1.0, 1.0);
    const DemandPmf half({{1, 0.5}, {2, 0.5}});
    CHECK(expected_shifted_cost(habs, half, 0) == doctest::Approx(1.5));

    // canon1 at x = 2 against a direct scalar summation.
    const ProblemSpec p = canon1();
    double direct = 0.0;
    for (int k = 0; k < p.demand.atom_count(); ++k) {
        const int d = p.demand.values()[static_cast<std::size_t>(k)];
        const int z = 2 - d;
        direct += p.demand.probs()[static_cast<std::size_t>(k)] *
                  (z >= 0 ? 1.0 * z : 3.0 * -z);
    }
    CHECK(expected_shifted_cost(p.holding, p.demand, 2) == doctest::Approx(direct).epsilon(1e-14));
    CHECK(direct == doctest::Approx(1.1));
}

TEST_CASE("transformed cost applies the discount-dependent tilt") {
    const ProblemSpec p = canon1();

    SUBCASE("alpha = 1 leaves only the mean-demand shift") {
        const TransformedCost t = transformed_expected_cost(p, 1.0);
        for (int x : {-50, -7, 0, 13, 50})
            CHECK(t.at(x) == doctest::Approx(expected_shifted_cost(p.holding, p.demand, x) +
                                             2.0 * 1.7)
                                 .epsilon(1e-14));
    }

    SUBCASE("zero holding table isolates the formula") {
        const ProblemSpec flat(10.0, 2.0, DemandPmf({{1, 0.5}, {2, 0.3}, {3, 0.2}}),
                               HoldingCost(Grid(-10, 20), std::vector<double>(31, 0.0), 1.0,
                                           1.0));
        const TransformedCost t = transformed_expected_cost(flat, 0.9);
        CHECK(t.at(10) == doctest::Approx(5.06).epsilon(1e-12));
    }

    SUBCASE("full table matches elementwise recomputation") {
        const TransformedCost t = transformed_expected_cost(p, 0.95);
        for (int x = p.grid().x_min; x <= p.grid().x_max; ++x) {
            const double oracle = expected_shifted_cost(p.holding, p.demand, x) +
                                  0.05 * 2.0 * x + 0.95 * 2.0 * 1.7;
            CHECK(t.at(x) == doctest::Approx(oracle).epsilon(1e-12));
        }
    }

    CHECK_THROWS(transformed_expected_cost(p, 0.0));
    CHECK_THROWS(transformed_expected_cost(p, 1.5));
    CHECK_THROWS(transformed_expected_cost(p, -0.2));
}

TEST_CASE("transform identity holds pointwise") {
    for (const ProblemSpec& p : {canon1(), canon2(), canon3()}) {
        const std::vector<double> base = expected_shifted_cost_table(p, Exec::serial);
        for (double alpha : {0.5, 0.9, 1.0}) {
            const TransformedCost t = transformed_expected_cost(p, alpha);
            for (int i = 0; i < p.grid().size(); ++i) {
                const double expect = (1.0 - alpha) * p.unit_cost * p.grid().point(i) +
                                      alpha * p.unit_cost * p.demand.mean();
                CHECK(t.values[static_cast<std::size_t>(i)] -
                          base[static_cast<std::size_t>(i)] ==
                      doctest::Approx(expect).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("grid quasiconvexity detection") {
    const Grid g(0, 4);
    CHECK(!quasiconvexity_violation({5, 3, 1, 2, 4}, g));
    CHECK(!quasiconvexity_violation({1, 1, 1, 1, 1}, g)); // plateau
    CHECK(!quasiconvexity_violation({5, 3, 3, 3, 4}, g));

    const auto w = quasiconvexity_violation({1, 0, 1, 0, 2}, g);
    REQUIRE(w.has_value());
    CHECK(w->x_left == 1);
    CHECK(w->x_mid == 2);
    CHECK(w->x_right == 3);
    CHECK(w->f_mid == 1.0);

    SUBCASE("agrees with the brute-force triple scan") {
        const std::vector<std::vector<double>> cases = {
            {5, 3, 1, 2, 4}, {1, 0, 1, 0, 2},   {2, 2, 2, 2, 2}, {1, 2, 3, 2, 1},
            {3, 1, 1, 2, 2}, {0, 1, 1, 1, 0.5}, {4, 3, 2, 1, 0},
        };
        for (const auto& f : cases)
            CHECK(!quasiconvexity_violation(f, g).has_value() == quasiconvex_brute_force(f));
        for (const ProblemSpec& p : {canon1(), canon2(), canon3()})
            for (double alpha : {0.6, 0.9, 1.0}) {
                const TransformedCost t = transformed_expected_cost(p, alpha);
                CHECK(!quasiconvexity_violation(t.values, p.grid()).has_value() ==
                      quasiconvex_brute_force(t.values));
            }
    }
}

TEST_CASE("assumption checks on the canonical instances") {
    SUBCASE("canon1 at alpha = 0.9 passes everything") {
        const ProblemSpec p = canon1();
        const AssumptionReport rep = check_assumptions(p, 0.9);
        CHECK(rep.quasiconvex);
        CHECK(rep.left_limit_ok);
        CHECK(rep.left_limit_infinite);
        CHECK(rep.strictly_decreasing_left_of_r);
        CHECK(rep.all_pass());

        // r is the smallest minimizer found by an exhaustive scan.
        const TransformedCost t = transformed_expected_cost(p, 0.9);
        int best = 0;
        for (int i = 1; i < p.grid().size(); ++i)
            if (t.values[static_cast<std::size_t>(i)] < t.values[static_cast<std::size_t>(best)])
                best = i;
        CHECK(rep.r_alpha == p.grid().point(best));
        CHECK(rep.s_star_alpha >= rep.r_alpha);
        CHECK(rep.s_star_on_grid);
    }

    SUBCASE("all three instances pass across the usable range") {
        for (const ProblemSpec& p : {canon1(), canon2(), canon3()})
            for (double alpha : {0.5, 0.8, 0.9, 0.99, 1.0}) CHECK(check_assumptions(p, alpha).all_pass());
    }

    SUBCASE("a crafted bimodal cost fails with a witness") {
        // Two local minima wide enough to survive demand smoothing.
        std::vector<double> table(static_cast<std::size_t>(41));
        for (int i = 0; i <= 40; ++i) {
            const int x = i - 20;
            const double a = std::abs(x + 10.0);
            const double b = std::abs(x - 10.0) + 0.5;
            table[static_cast<std::size_t>(i)] = std::min(a, b);
        }
        const ProblemSpec p(1.0, 1.0, DemandPmf::point_mass(1),
                            HoldingCost(Grid(-20, 20), std::move(table), 1.0, 1.0));
        const AssumptionReport rep = check_assumptions(p, 1.0);
        CHECK(!rep.quasiconvex);
        REQUIRE(rep.witness.has_value());
        CHECK(rep.witness->f_mid >
              std::max(rep.witness->f_left, rep.witness->f_right));
    }
}

TEST_CASE("monotonicity of r in alpha") {
    for (const ProblemSpec& p : {canon1(), canon2(), canon3()}) {
        int prev = p.grid().x_min;
        for (double alpha = 0.5; alpha <= 1.0 + 1e-12; alpha += 0.05) {
            const int r = check_assumptions(p, std::min(alpha, 1.0)).r_alpha;
            CHECK(r >= prev);
            prev = r;
        }
    }
}

TEST_CASE("alpha star for convex holding costs") {
    CHECK(alpha_star_for_convex(canon1()) == 0.0); // 1 - 3/2 < 0

    const ProblemSpec half(10.0, 2.0, DemandPmf({{1, 0.5}, {2, 0.3}, {3, 0.2}}),
                           HoldingCost::two_sided_linear(Grid(-50, 50), 1.0, 1.0));
    CHECK(alpha_star_for_convex(half) == doctest::Approx(0.5)); // 1 - 1/2

    const ProblemSpec boundary(10.0, 2.0, DemandPmf({{1, 0.5}, {2, 0.3}, {3, 0.2}}),
                               HoldingCost::two_sided_linear(Grid(-50, 50), 1.0, 2.0));
    CHECK(alpha_star_for_convex(boundary) == 0.0); // sigma_L = c

    CHECK_THROWS(alpha_star_for_convex(canon3()));

    SUBCASE("convex instances pass the checks above alpha star") {
        const double astar = alpha_star_for_convex(half);
        for (double alpha : {astar + 0.01, 0.6, 0.9, 1.0})
            CHECK(check_assumptions(half, alpha).all_pass());
    }
}

TEST_CASE("interior window stays inside the grid") {
    const ProblemSpec p = canon1();
    const Window w = interior_window(p);
    CHECK(w.lo == p.grid().x_min + 6);
    CHECK(w.hi <= p.grid().x_max);
    CHECK(w.lo < w.hi);
}
