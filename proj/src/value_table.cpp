#include "ssinv/value_table.hpp"

#include <algorithm>

namespace ssinv {

double ValueTable::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

int ValueTable::min_point() const {
    const auto it = std::min_element(values_.begin(), values_.end());
    return grid_.point(static_cast<int>(it - values_.begin()));
}

double GTable::min_value() const { return *std::min_element(values.begin(), values.end()); }

int GTable::min_point() const {
    const auto it = std::min_element(values.begin(), values.end());
    return grid.point(static_cast<int>(it - values.begin()));
}

} // namespace ssinv
