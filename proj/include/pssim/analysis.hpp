#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pssim/core_types.hpp"
#include "pssim/distributions.hpp"
#include "pssim/pmf.hpp"

namespace pssim {

/// One ingested report, reduced to its day and temporal bin (UTC).
struct ReportRecord {
  Date date;
  TemporalBin time = TemporalBin::EM;
  std::string sourceId;
  std::string loc;
  EventType incidentType;

  bool operator==(const ReportRecord&) const = default;
};

ReportRecord record_at(std::chrono::sys_seconds utc, std::string sourceId, std::string loc,
                       EventType incidentType);

/// Report counts per (day, temporal bin) cell of a window, chronological:
/// cell index = dayOffset * 8 + bin index.
struct BinnedSeries {
  std::string location;
  DateWindow window;
  std::vector<double> cells;

  double& at(int dayOffset, TemporalBin bin) {
    return cells[static_cast<std::size_t>(dayOffset) * kTemporalBinCount + index_of(bin)];
  }
};

struct BinnedData {
  DateWindow window;
  std::map<std::string, BinnedSeries> byLocation;
  /// (sourceId, week index) -> reports. Weeks start on window.first.
  std::map<std::pair<std::string, int>, std::uint64_t> userWeekCounts;
  std::uint64_t binned = 0;
  std::uint64_t excluded = 0;  // outside the window

  /// Cell-wise sum over every location.
  BinnedSeries pooled() const;
  int weeks() const { return (window.days() + 6) / 7; }
};

/// Throws InputError("empty window") when the window has no days.
BinnedData bin_reports(std::span<const ReportRecord> reports, const DateWindow& window);

struct DayTimePmfs {
  Pmf day;
  Pmf time;
};

DayTimePmfs estimate_pmfs(const BinnedSeries& series);
/// Labels sorted lexicographically.
Pmf estimate_evtype_pmf(std::span<const ReportRecord> reports);

/// Mean count per cell (the Poisson MLE).
double estimate_lambda(const BinnedSeries& series);

/// Sample autocorrelation at `lag`; lag 0 gives 1. Throws on a constant
/// series or lag >= length.
double autocorrelation(std::span<const double> series, std::size_t lag);

struct QqData {
  std::vector<std::pair<double, double>> points;  // (theoretical, empirical)
  double r2 = 0.0;
};

/// Empirical order statistics against log-normal quantiles at plotting
/// positions (i - 0.5) / n. Needs >= 10 samples with nonzero spread.
QqData qq_against_lognormal(std::span<const double> samples, const LogNormalParams& params);

struct OutlierFilter {
  std::map<std::string, double> kept;
  std::vector<std::string> rejected;  // sorted
  double threshold = 0.0;
};

/// Removes users whose count is strictly above the given percentile
/// (linear interpolation between order statistics). 0 < percentile < 100.
OutlierFilter filter_outliers(const std::map<std::string, double>& userCounts, double percentile);

/// Highest weekly count per user.
std::map<std::string, double> peak_weekly_counts(const BinnedData& data);

/// Positive (user, week) counts for the given users, in key order.
std::vector<double> weekly_samples(const BinnedData& data,
                                   const std::map<std::string, double>& users);

struct FitOptions {
  std::optional<double> outlierPct;  // percentile cut on peak weekly counts; unset keeps everyone
  bool perLocationParticipation = false;
  std::size_t acfMaxLag = 8;
};

/// Everything learned from a dataset.
struct ModelFit {
  LogNormalParams participation;
  std::map<std::string, LogNormalParams> participationByLocation;
  std::map<std::string, double> lambda;
  Pmf pmfDay;
  Pmf pmfTime;
  Pmf pmfEvType;

  DateWindow window;
  std::uint64_t reports = 0;
  std::uint64_t users = 0;
  std::uint64_t weeklySamples = 0;
  std::optional<double> outlierPct;
  std::uint64_t outlierUsers = 0;

  QqData qq;
  /// ACF at lags 1..acfMaxLag per location; locations whose series is
  /// constant or too short are left out.
  std::map<std::string, std::vector<double>> acf;
};

/// Runs the analysis end to end over one window.
ModelFit fit_model(std::span<const ReportRecord> reports, const DateWindow& window,
                   const FitOptions& options = {});

/// Smallest window holding every record. Throws on empty input.
DateWindow window_of(std::span<const ReportRecord> reports);

}  // namespace pssim
