#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pssim/analysis.hpp"
#include "pssim/random.hpp"
#include "pssim/sim_config.hpp"

namespace pssim {

/// Shuffles 0..n-1 and deals it round-robin into k folds, so fold sizes
/// differ by at most one. Needs 2 <= k <= n.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                    RandomSource& rng);

template <typename T>
std::vector<std::vector<T>> kfold_split(std::span<const T> items, std::size_t k,
                                        RandomSource& rng) {
  std::vector<std::vector<T>> folds;
  for (const auto& idx : kfold_indices(items.size(), k, rng)) {
    auto& fold = folds.emplace_back();
    fold.reserve(idx.size());
    for (std::size_t i : idx) fold.push_back(items[i]);
  }
  return folds;
}

enum class Axis { PerUser, PerDayBin, PerTimeBin };
inline constexpr std::array<Axis, 3> kAllAxes = {Axis::PerUser, Axis::PerDayBin, Axis::PerTimeBin};

/// "Reports per user", "Reports per day bin", "Reports per time bin".
std::string_view axis_label(Axis axis);
/// "per-user", "per-day-bin", "per-time-bin".
std::string_view axis_key(Axis axis);

/// Normalized frequencies over an ordered support. For PerUser the support
/// holds observed report counts; for the bin axes it is the bin index.
struct Histogram {
  std::vector<double> support;
  std::vector<double> fractions;
};

/// Throws InputError on empty input.
Histogram histogram(std::span<const ReportRecord> reports, Axis axis);

/// Both histograms re-expressed over the union of their supports, zero-filled.
struct Aligned {
  std::vector<double> support;
  std::vector<double> a;
  std::vector<double> b;
};
Aligned align(const Histogram& a, const Histogram& b);

/// Sample Pearson coefficient. Needs equal lengths >= 2 and nonzero variances.
double pearson_correlation(std::span<const double> a, std::span<const double> b);
/// Needs equal lengths >= 1.
double rmse(std::span<const double> a, std::span<const double> b);

struct AxisScore {
  double correlation = 0.0;
  double rmse = 0.0;
};

/// Aligned histograms behind one score, kept for plotting.
struct AxisCurve {
  std::vector<double> support;
  std::vector<double> real;
  std::vector<double> simulated;
};

/// Compares two report sets along one axis. `curve`, when given, receives
/// the aligned histograms.
AxisScore compare(std::span<const ReportRecord> real, std::span<const ReportRecord> simulated,
                  Axis axis, AxisCurve* curve = nullptr);

struct ValidationReport {
  std::size_t fold = 0;
  std::array<AxisScore, 3> scores{};  // indexed like kAllAxes
  std::array<AxisCurve, 3> curves{};
  std::size_t realReports = 0;
  std::size_t simReports = 0;
  std::size_t realUsers = 0;
  std::size_t simUsers = 0;

  const AxisScore& score(Axis axis) const { return scores[static_cast<std::size_t>(axis)]; }
};

struct CrossValidationOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  std::optional<double> outlierPct;
};

/// Users are dealt into k folds. For each fold the model is fitted on the
/// other folds, a trace with as many participants as the held-out fold is
/// simulated over the same window, and the two are compared on all axes.
std::vector<ValidationReport> cross_validate(std::span<const ReportRecord> realData,
                                             const DateWindow& window,
                                             const CrossValidationOptions& options);

struct AxisSummary {
  double meanCorrelation = 0.0;
  double sdCorrelation = 0.0;
  double meanRmse = 0.0;
  double sdRmse = 0.0;
};

std::array<AxisSummary, 3> summarize(std::span<const ValidationReport> reports);

/// Simulation config for one fold, built from a fit.
SimConfig config_from_fit(const ModelFit& fit, std::size_t participants, std::uint64_t seed);

}  // namespace pssim
