#pragma once

#include <cassert>
#include <stdexcept>

namespace ssinv {

/// Closed integer range [x_min, x_max] used as the state grid.
struct Grid {
    int x_min = 0;
    int x_max = 0;

    Grid() = default;
    Grid(int lo, int hi) : x_min(lo), x_max(hi) {
        if (lo >= hi) throw std::invalid_argument("Grid: x_min must be < x_max");
    }

    int size() const { return x_max - x_min + 1; }
    bool contains(int x) const { return x >= x_min && x <= x_max; }
    int index(int x) const {
        assert(contains(x));
        return x - x_min;
    }
    int point(int i) const { return x_min + i; }
    int midpoint() const { return x_min + (x_max - x_min) / 2; }
};

} // namespace ssinv
