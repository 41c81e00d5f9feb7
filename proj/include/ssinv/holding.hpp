#pragma once

#include <optional>
#include <vector>

#include "ssinv/grid.hpp"

namespace ssinv {

/// Holding/backlog cost per period, tabulated on a grid with linear tail
/// extrapolation outside it. Both tail slopes must be positive so the cost
/// is coercive (h(x) -> +inf as |x| -> +inf).
class HoldingCost {
  public:
    HoldingCost(Grid grid, std::vector<double> table, double left_slope, double right_slope);

    /// Cost at any integer x; linear extrapolation outside the table.
    double operator()(int x) const {
        if (x < grid_.x_min)
            return table_.front() + left_slope_ * (grid_.x_min - x);
        if (x > grid_.x_max)
            return table_.back() + right_slope_ * (x - grid_.x_max);
        return table_[static_cast<std::size_t>(x - grid_.x_min)];
    }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& table() const { return table_; }
    double left_slope() const { return left_slope_; }
    double right_slope() const { return right_slope_; }

    /// Index of the first grid point violating discrete convexity (second
    /// difference < -tol, or a tail slope incompatible with the boundary
    /// segment), or nullopt if h is convex on the whole line.
    std::optional<int> convexity_violation(double tol = 1e-12) const;

    /// Piecewise-linear helper: cost a*max(x,0) + b*max(-x,0) tabulated on
    /// [x_min, x_max] with matching tail slopes (b left, a right).
    static HoldingCost two_sided_linear(Grid grid, double up_slope, double down_slope);

  private:
    Grid grid_;
    std::vector<double> table_;
    double left_slope_;
    double right_slope_;
};

} // namespace ssinv
