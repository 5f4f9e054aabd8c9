#include "pssim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pssim {
namespace {

double pearson_r(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

int week_of(const DateWindow& window, Date d) { return (d - window.first) / 7; }

}  // namespace

ReportRecord record_at(std::chrono::sys_seconds utc, std::string sourceId, std::string loc,
                       EventType incidentType) {
  const auto day = std::chrono::floor<std::chrono::days>(utc);
  const std::chrono::hh_mm_ss clock{utc - day};
  ReportRecord r;
  r.date = Date{std::chrono::year_month_day{day}};
  r.time = bin_of_time(static_cast<int>(clock.hours().count()),
                       static_cast<int>(clock.minutes().count()));
  r.sourceId = std::move(sourceId);
  r.loc = std::move(loc);
  r.incidentType = std::move(incidentType);
  return r;
}

BinnedSeries BinnedData::pooled() const {
  BinnedSeries out;
  out.location = "*";
  out.window = window;
  out.cells.assign(static_cast<std::size_t>(window.days()) * kTemporalBinCount, 0.0);
  for (const auto& [loc, series] : byLocation) {
    for (std::size_t i = 0; i < out.cells.size(); ++i) out.cells[i] += series.cells[i];
  }
  return out;
}

BinnedData bin_reports(std::span<const ReportRecord> reports, const DateWindow& window) {
  if (window.days() < 1) throw InputError("empty window");
  BinnedData data;
  data.window = window;
  const std::size_t cells = static_cast<std::size_t>(window.days()) * kTemporalBinCount;
  for (const auto& r : reports) {
    if (!window.contains(r.date)) {
      ++data.excluded;
      continue;
    }
    auto [it, inserted] = data.byLocation.try_emplace(r.loc);
    if (inserted) {
      it->second.location = r.loc;
      it->second.window = window;
      it->second.cells.assign(cells, 0.0);
    }
    it->second.at(r.date - window.first, r.time) += 1.0;
    ++data.userWeekCounts[{r.sourceId, week_of(window, r.date)}];
    ++data.binned;
  }
  return data;
}

DayTimePmfs estimate_pmfs(const BinnedSeries& series) {
  std::array<double, kDayBinCount> day{};
  std::array<double, kTemporalBinCount> time{};
  const int days = static_cast<int>(series.cells.size() / kTemporalBinCount);
  for (int d = 0; d < days; ++d) {
    const std::size_t weekday = index_of(weekday_of(series.window.first + d));
    for (std::size_t b = 0; b < kTemporalBinCount; ++b) {
      const double c = series.cells[static_cast<std::size_t>(d) * kTemporalBinCount + b];
      day[weekday] += c;
      time[b] += c;
    }
  }
  return {day_pmf_from_counts(day), time_pmf_from_counts(time)};
}

Pmf estimate_evtype_pmf(std::span<const ReportRecord> reports) {
  std::map<std::string, double> counts;
  for (const auto& r : reports) counts[r.incidentType] += 1.0;
  std::vector<std::pair<std::string, double>> flat(counts.begin(), counts.end());
  return pmf_from_counts(flat);
}

double estimate_lambda(const BinnedSeries& series) {
  if (series.cells.empty()) throw InputError("series has no cells");
  return std::accumulate(series.cells.begin(), series.cells.end(), 0.0) /
         static_cast<double>(series.cells.size());
}

double autocorrelation(std::span<const double> series, std::size_t lag) {
  if (lag >= series.size()) throw InputError("lag must be shorter than the series");
  const double mean =
      std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
  double denom = 0.0;
  for (double x : series) denom += (x - mean) * (x - mean);
  if (!(denom > 0.0)) throw InputError("constant series: autocorrelation undefined");
  if (lag == 0) return 1.0;
  double num = 0.0;
  for (std::size_t t = 0; t + lag < series.size(); ++t) {
    num += (series[t] - mean) * (series[t + lag] - mean);
  }
  return num / denom;
}

QqData qq_against_lognormal(std::span<const double> samples, const LogNormalParams& params) {
  if (samples.size() < 10) throw InputError("Q-Q comparison needs at least 10 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw InputError("zero variance: Q-Q samples are constant");
  const double n = static_cast<double>(sorted.size());
  QqData qq;
  qq.points.reserve(sorted.size());
  std::vector<double> theo(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    theo[i] = lognormal_quantile((static_cast<double>(i) + 0.5) / n, params);
    qq.points.emplace_back(theo[i], sorted[i]);
  }
  const double r = pearson_r(theo, sorted);
  qq.r2 = std::clamp(r * r, 0.0, 1.0);
  return qq;
}

OutlierFilter filter_outliers(const std::map<std::string, double>& userCounts, double percentile) {
  if (!(percentile > 0.0 && percentile < 100.0)) {
    throw InputError("outlier percentile must lie strictly between 0 and 100");
  }
  OutlierFilter out;
  if (userCounts.empty()) return out;
  std::vector<double> values;
  values.reserve(userCounts.size());
  for (const auto& [user, c] : userCounts) values.push_back(c);
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * percentile / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  out.threshold = values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  for (const auto& [user, c] : userCounts) {
    if (c > out.threshold) {
      out.rejected.push_back(user);
    } else {
      out.kept.emplace(user, c);
    }
  }
  return out;
}

std::map<std::string, double> peak_weekly_counts(const BinnedData& data) {
  std::map<std::string, double> peaks;
  for (const auto& [key, count] : data.userWeekCounts) {
    double& p = peaks[key.first];
    p = std::max(p, static_cast<double>(count));
  }
  return peaks;
}

std::vector<double> weekly_samples(const BinnedData& data,
                                   const std::map<std::string, double>& users) {
  std::vector<double> out;
  for (const auto& [key, count] : data.userWeekCounts) {
    if (count > 0 && users.contains(key.first)) out.push_back(static_cast<double>(count));
  }
  return out;
}

DateWindow window_of(std::span<const ReportRecord> reports) {
  if (reports.empty()) throw InputError("dataset is empty");
  const auto [lo, hi] = std::minmax_element(
      reports.begin(), reports.end(),
      [](const ReportRecord& a, const ReportRecord& b) { return a.date < b.date; });
  return {lo->date, hi->date};
}

ModelFit fit_model(std::span<const ReportRecord> reports, const DateWindow& window,
                   const FitOptions& options) {
  const BinnedData binned = bin_reports(reports, window);
  if (binned.binned == 0) throw InputError("no reports inside the window");

  ModelFit fit;
  fit.window = window;
  fit.reports = binned.binned;

  const auto pmfs = estimate_pmfs(binned.pooled());
  fit.pmfDay = pmfs.day;
  fit.pmfTime = pmfs.time;
  std::vector<ReportRecord> inside;
  inside.reserve(binned.binned);
  for (const auto& r : reports) {
    if (window.contains(r.date)) inside.push_back(r);
  }
  fit.pmfEvType = estimate_evtype_pmf(inside);

  std::map<std::string, double> users = peak_weekly_counts(binned);
  fit.users = users.size();
  if (users.size() < 2) throw InputError("insufficient data: participation fit needs at least 2 users");
  fit.outlierPct = options.outlierPct;
  if (options.outlierPct) {
    OutlierFilter filtered = filter_outliers(users, *options.outlierPct);
    fit.outlierUsers = filtered.rejected.size();
    users = std::move(filtered.kept);
  }
  const std::vector<double> samples = weekly_samples(binned, users);
  fit.weeklySamples = samples.size();
  if (samples.size() < 2) {
    throw InputError("insufficient data: participation fit needs at least 2 user-weeks, got " +
                     std::to_string(samples.size()));
  }
  fit.participation = fit_lognormal(samples);
  if (samples.size() >= 10) fit.qq = qq_against_lognormal(samples, fit.participation);

  std::vector<const BinnedSeries*> series;
  for (const auto& [loc, s] : binned.byLocation) series.push_back(&s);
  std::vector<double> lambdas(series.size());
  std::vector<std::vector<double>> acfs(series.size());
  const auto count = static_cast<std::int64_t>(series.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    const BinnedSeries& s = *series[static_cast<std::size_t>(i)];
    lambdas[static_cast<std::size_t>(i)] = estimate_lambda(s);
    const auto [lo, hi] = std::minmax_element(s.cells.begin(), s.cells.end());
    if (*lo == *hi || s.cells.size() <= options.acfMaxLag) continue;
    auto& acf = acfs[static_cast<std::size_t>(i)];
    for (std::size_t lag = 1; lag <= options.acfMaxLag; ++lag) {
      acf.push_back(autocorrelation(s.cells, lag));
    }
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    fit.lambda[series[i]->location] = lambdas[i];
    if (!acfs[i].empty()) fit.acf[series[i]->location] = std::move(acfs[i]);
  }

  if (options.perLocationParticipation) {
    std::map<std::string, std::map<std::pair<std::string, int>, double>> perLoc;
    for (const auto& r : inside) {
      if (users.contains(r.sourceId)) {
        perLoc[r.loc][{r.sourceId, (r.date - window.first) / 7}] += 1.0;
      }
    }
    for (const auto& [loc, counts] : perLoc) {
      std::vector<double> s;
      for (const auto& [key, c] : counts) s.push_back(c);
      try {
        fit.participationByLocation[loc] = fit_lognormal(s);
      } catch (const InputError&) {
        // Too little data at this location; it falls back to the pooled fit.
      }
    }
  }
  return fit;
}

}  // namespace pssim
