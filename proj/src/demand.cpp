#include "ssinv/demand.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ssinv {

DemandPmf::DemandPmf(std::vector<std::pair<int, double>> atoms) {
    if (atoms.empty()) throw std::invalid_argument("DemandPmf: no atoms");
    std::sort(atoms.begin(), atoms.end());

    double total = 0.0;
    double positive_mass = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto [v, p] = atoms[i];
        if (v < 0)
            throw std::invalid_argument("DemandPmf: atom value " + std::to_string(v) +
                                        " is negative");
        if (i > 0 && v == atoms[i - 1].first)
            throw std::invalid_argument("DemandPmf: duplicate atom value " + std::to_string(v));
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("DemandPmf: atom " + std::to_string(v) +
                                        " has probability outside [0,1]");
        values_.push_back(v);
        probs_.push_back(p);
        total += p;
        if (v > 0) positive_mass += p;
        mean_ += static_cast<double>(v) * p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("DemandPmf: probabilities sum to " + std::to_string(total));
    if (positive_mass <= 0.0)
        throw std::invalid_argument("DemandPmf: P(D > 0) must be positive");
}

double DemandPmf::prob_of(int d) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), d);
    if (it == values_.end() || *it != d) return 0.0;
    return probs_[static_cast<std::size_t>(it - values_.begin())];
}

DemandPmf DemandPmf::point_mass(int d) { return DemandPmf({{d, 1.0}}); }

DemandPmf DemandPmf::convolve(const DemandPmf& other) const {
    const int hi = max_value() + other.max_value();
    std::vector<double> dense(static_cast<std::size_t>(hi) + 1, 0.0);
    for (std::size_t i = 0; i < values_.size(); ++i)
        for (std::size_t j = 0; j < other.values_.size(); ++j)
            dense[static_cast<std::size_t>(values_[i] + other.values_[j])] +=
                probs_[i] * other.probs_[j];

    std::vector<std::pair<int, double>> atoms;
    for (int v = 0; v <= hi; ++v)
        if (dense[static_cast<std::size_t>(v)] > 0.0)
            atoms.emplace_back(v, dense[static_cast<std::size_t>(v)]);
    return DemandPmf(std::move(atoms));
}

DemandPmf convolve_demand(const DemandPmf& d, int lead_time) {
    if (lead_time < 1) throw std::invalid_argument("convolve_demand: lead time must be >= 1");
    DemandPmf acc = d;
    for (int i = 1; i < lead_time; ++i) acc = acc.convolve(d);
    return acc;
}

} // namespace ssinv
