#pragma once

#include <utility>
#include <vector>

namespace ssinv {

/// Finite discrete demand distribution on nonnegative integers.
///
/// Atoms are kept sorted by value. Construction enforces: probabilities sum
/// to 1 (abs tol 1e-12), values are distinct nonnegative integers, and
/// P(D > 0) > 0.
class DemandPmf {
  public:
    explicit DemandPmf(std::vector<std::pair<int, double>> atoms);

    const std::vector<int>& values() const { return values_; }
    const std::vector<double>& probs() const { return probs_; }
    int atom_count() const { return static_cast<int>(values_.size()); }
    double mean() const { return mean_; }
    int max_value() const { return values_.back(); }
    int min_value() const { return values_.front(); }
    double prob_zero() const { return values_.front() == 0 ? probs_.front() : 0.0; }

    /// P(D = d); zero off the support.
    double prob_of(int d) const;

    static DemandPmf point_mass(int d);

    /// Distribution of the sum of two independent draws.
    DemandPmf convolve(const DemandPmf& other) const;

  private:
    std::vector<int> values_;
    std::vector<double> probs_;
    double mean_ = 0.0;
};

/// Exact distribution of D_1 + ... + D_L (repeated discrete convolution).
DemandPmf convolve_demand(const DemandPmf& d, int lead_time);

} // namespace ssinv
