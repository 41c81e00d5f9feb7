#include "ssinv/holding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ssinv {

HoldingCost::HoldingCost(Grid grid, std::vector<double> table, double left_slope,
                         double right_slope)
    : grid_(grid), table_(std::move(table)), left_slope_(left_slope), right_slope_(right_slope) {
    if (static_cast<int>(table_.size()) != grid_.size())
        throw std::invalid_argument("HoldingCost: table size " + std::to_string(table_.size()) +
                                    " does not match grid size " + std::to_string(grid_.size()));
    if (!(left_slope_ > 0.0) || !(right_slope_ > 0.0))
        throw std::invalid_argument("HoldingCost: tail slopes must be positive");
    for (double v : table_)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("HoldingCost: table values must be finite and >= 0");
}

std::optional<int> HoldingCost::convexity_violation(double tol) const {
    const int n = grid_.size();
    if (table_[1] - table_[0] < -left_slope_ - tol) return 0;
    for (int i = 1; i + 1 < n; ++i) {
        const double second = table_[i + 1] - 2.0 * table_[i] + table_[i - 1];
        if (second < -tol) return i;
    }
    if (right_slope_ < table_[n - 1] - table_[n - 2] - tol) return n - 1;
    return std::nullopt;
}

HoldingCost HoldingCost::two_sided_linear(Grid grid, double up_slope, double down_slope) {
    std::vector<double> table(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) {
        const int x = grid.point(i);
        table[static_cast<std::size_t>(i)] =
            x >= 0 ? up_slope * x : down_slope * static_cast<double>(-x);
    }
    return HoldingCost(grid, std::move(table), down_slope, up_slope);
}

} // namespace ssinv
