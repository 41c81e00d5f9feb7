#pragma once

#include <vector>

#include "ssinv/grid.hpp"

namespace ssinv {

/// How a value table extends below its grid.
/// `linear`: v(x) = v(x_min) + slope * (x_min - x); used with slope = c for
/// discounted value functions, which are linear with slope -c below the
/// reorder threshold. `constant`: v(x) = v(x_min); the zero-unit-cost model's
/// value is flat below its threshold.
enum class BelowGrid { linear, constant };

class ValueTable {
  public:
    ValueTable() = default;
    ValueTable(Grid g, std::vector<double> values, BelowGrid ext, double slope = 0.0)
        : grid_(g), values_(std::move(values)), ext_(ext), slope_(slope) {}

    static ValueTable zeros(Grid g, BelowGrid ext, double slope = 0.0) {
        return ValueTable(g, std::vector<double>(static_cast<std::size_t>(g.size()), 0.0), ext,
                          slope);
    }

    double operator()(int x) const {
        if (x < grid_.x_min) {
            const double base = values_.front();
            return ext_ == BelowGrid::linear ? base + slope_ * (grid_.x_min - x) : base;
        }
        return values_[static_cast<std::size_t>(grid_.index(x))];
    }

    double at_index(int i) const { return values_[static_cast<std::size_t>(i)]; }
    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    BelowGrid extension() const { return ext_; }
    double extension_slope() const { return slope_; }

    double min_value() const;
    int min_point() const; // smallest grid point attaining the minimum

  private:
    Grid grid_;
    std::vector<double> values_;
    BelowGrid ext_ = BelowGrid::linear;
    double slope_ = 0.0;
};

/// G(x) = c x + E[h(x-D)] + alpha E[v(x-D)] for the value table it was
/// built from (without the c x term in the zero-unit-cost model).
struct GTable {
    double alpha = 0.0;
    Grid grid;
    std::vector<double> values;

    double at(int x) const { return values[static_cast<std::size_t>(grid.index(x))]; }
    double min_value() const;
    int min_point() const;
};

} // namespace ssinv
