#include "pssim/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace pssim {
namespace {

void check_labels(const std::vector<std::string>& labels) {
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw InputError("duplicate pmf label '" + l + "'");
  }
}

}  // namespace

Pmf::Pmf(std::vector<std::string> labels, std::vector<double> probs)
    : labels_(std::move(labels)), probs_(std::move(probs)), cumulative_(probs_.size()) {
  std::partial_sum(probs_.begin(), probs_.end(), cumulative_.begin());
  // Pin the tail at exactly 1 from the last positive category on, so that
  // u in [0, 1) can neither run off the end nor land on a zero-mass label.
  std::size_t last = probs_.size();
  while (last > 0 && probs_[last - 1] == 0.0) --last;
  for (std::size_t i = last == 0 ? 0 : last - 1; i < cumulative_.size(); ++i) cumulative_[i] = 1.0;
}

Pmf Pmf::from_counts(std::span<const std::pair<std::string, double>> counts) {
  std::vector<std::string> labels;
  std::vector<double> values;
  labels.reserve(counts.size());
  values.reserve(counts.size());
  for (const auto& [label, count] : counts) {
    labels.push_back(label);
    values.push_back(count);
  }
  return from_counts(std::move(labels), values);
}

Pmf Pmf::from_counts(std::vector<std::string> labels, std::span<const double> counts) {
  if (labels.size() != counts.size()) throw InputError("pmf labels and counts differ in length");
  check_labels(labels);
  double total = 0.0;
  for (double c : counts) {
    if (!std::isfinite(c) || c < 0.0) throw InputError("pmf counts must be finite and nonnegative");
    total += c;
  }
  if (labels.empty() || !(total > 0.0)) throw InputError("empty distribution");
  std::vector<double> probs(counts.size());
  std::transform(counts.begin(), counts.end(), probs.begin(), [total](double c) { return c / total; });
  return Pmf(std::move(labels), std::move(probs));
}

Pmf Pmf::from_probs(std::vector<std::string> labels, std::vector<double> probs) {
  if (labels.size() != probs.size()) throw InputError("pmf labels and probabilities differ in length");
  if (labels.empty()) throw InputError("empty distribution");
  check_labels(labels);
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) throw InputError("pmf probability outside [0, 1]");
    total += p;
  }
  if (std::fabs(total - 1.0) > kPmfTolerance) {
    throw InputError("pmf probabilities sum to " + std::to_string(total) + ", expected 1");
  }
  return Pmf(std::move(labels), std::move(probs));
}

double Pmf::prob(std::string_view label) const {
  const std::size_t i = index_of(label);
  return i < size() ? probs_[i] : 0.0;
}

std::size_t Pmf::index_of(std::string_view label) const {
  return static_cast<std::size_t>(std::find(labels_.begin(), labels_.end(), label) - labels_.begin());
}

std::size_t Pmf::sample_index(RandomSource& rng) const {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<std::size_t>(it - cumulative_.begin());
}

Pmf pmf_from_counts(std::span<const std::pair<std::string, double>> counts) {
  return Pmf::from_counts(counts);
}

Pmf day_pmf_from_counts(const std::array<double, kDayBinCount>& counts) {
  std::vector<std::string> labels;
  for (DayBin d : kAllDayBins) labels.emplace_back(name(d));
  return Pmf::from_counts(std::move(labels), counts);
}

Pmf time_pmf_from_counts(const std::array<double, kTemporalBinCount>& counts) {
  std::vector<std::string> labels;
  for (TemporalBin b : kAllTemporalBins) labels.emplace_back(short_name(b));
  return Pmf::from_counts(std::move(labels), counts);
}

std::array<double, kDayBinCount> day_probs(const Pmf& pmf) {
  std::array<double, kDayBinCount> out{};
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    const auto day = parse_day_bin(pmf.label(i));
    if (!day) throw InputError("'" + pmf.label(i) + "' is not a day bin");
    out[index_of(*day)] = pmf.prob(i);
  }
  return out;
}

std::array<double, kTemporalBinCount> time_probs(const Pmf& pmf) {
  std::array<double, kTemporalBinCount> out{};
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    const auto bin = parse_temporal_bin(pmf.label(i));
    if (!bin) throw InputError("'" + pmf.label(i) + "' is not a temporal bin");
    out[index_of(*bin)] = pmf.prob(i);
  }
  return out;
}

}  // namespace pssim
