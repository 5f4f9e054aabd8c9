#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pssim/core_types.hpp"
#include "pssim/random.hpp"

namespace pssim {

/// Absolute tolerance on |sum(probs) - 1| accepted for any Pmf.
inline constexpr double kPmfTolerance = 1e-9;

/// Normalized categorical distribution over an ordered, duplicate-free
/// label set. Instances are immutable once built.
class Pmf {
 public:
  Pmf() = default;

  /// probs[i] = counts[i] / sum(counts). Throws InputError("empty distribution")
  /// when there are no categories or every count is zero, and on negative or
  /// non-finite counts and duplicate labels.
  static Pmf from_counts(std::span<const std::pair<std::string, double>> counts);
  static Pmf from_counts(std::vector<std::string> labels, std::span<const double> counts);

  /// Takes probabilities that must already be normalized within kPmfTolerance.
  static Pmf from_probs(std::vector<std::string> labels, std::vector<double> probs);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& probs() const { return probs_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  double prob(std::size_t i) const { return probs_[i]; }

  /// Probability of a label; 0 for labels outside the support.
  double prob(std::string_view label) const;
  /// Index of a label, or size() if absent.
  std::size_t index_of(std::string_view label) const;

  std::size_t sample_index(RandomSource& rng) const;
  const std::string& sample(RandomSource& rng) const { return labels_[sample_index(rng)]; }

  bool operator==(const Pmf& other) const {
    return labels_ == other.labels_ && probs_ == other.probs_;
  }

 private:
  Pmf(std::vector<std::string> labels, std::vector<double> probs);

  std::vector<std::string> labels_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

Pmf pmf_from_counts(std::span<const std::pair<std::string, double>> counts);

/// Day-bin pmf with labels "Sunday".."Saturday".
Pmf day_pmf_from_counts(const std::array<double, kDayBinCount>& counts);
/// Time-bin pmf with labels "EM".."N".
Pmf time_pmf_from_counts(const std::array<double, kTemporalBinCount>& counts);

/// Re-indexes a day pmf into calendar order; missing labels get 0.
/// Throws InputError on labels that are not weekdays.
std::array<double, kDayBinCount> day_probs(const Pmf& pmf);
std::array<double, kTemporalBinCount> time_probs(const Pmf& pmf);

}  // namespace pssim
