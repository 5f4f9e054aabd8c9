#include "pssim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "pssim/aggregation.hpp"
#include "pssim/simulator.hpp"

namespace pssim {

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k,
                                                    RandomSource& rng) {
  if (k < 2) throw InputError("k-fold split needs k >= 2");
  if (k > n) throw InputError("k-fold split needs at least k items");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.uniform_index(i))]);
  }
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < n; ++i) folds[i % k].push_back(order[i]);
  return folds;
}

std::string_view axis_label(Axis axis) {
  switch (axis) {
    case Axis::PerUser: return "Reports per user";
    case Axis::PerDayBin: return "Reports per day bin";
    case Axis::PerTimeBin: return "Reports per time bin";
  }
  return "";
}

std::string_view axis_key(Axis axis) {
  switch (axis) {
    case Axis::PerUser: return "per-user";
    case Axis::PerDayBin: return "per-day-bin";
    case Axis::PerTimeBin: return "per-time-bin";
  }
  return "";
}

Histogram histogram(std::span<const ReportRecord> reports, Axis axis) {
  if (reports.empty()) throw InputError("histogram of an empty report set");
  Histogram h;
  const double total = static_cast<double>(reports.size());
  switch (axis) {
    case Axis::PerUser: {
      std::unordered_map<std::string_view, std::uint64_t> perUser;
      for (const auto& r : reports) ++perUser[r.sourceId];
      std::map<std::uint64_t, double> users;
      for (const auto& [id, c] : perUser) users[c] += 1.0;
      const double nUsers = static_cast<double>(perUser.size());
      for (const auto& [count, u] : users) {
        h.support.push_back(static_cast<double>(count));
        h.fractions.push_back(u / nUsers);
      }
      break;
    }
    case Axis::PerDayBin: {
      h.fractions.assign(kDayBinCount, 0.0);
      for (const auto& r : reports) h.fractions[index_of(weekday_of(r.date))] += 1.0;
      break;
    }
    case Axis::PerTimeBin: {
      h.fractions.assign(kTemporalBinCount, 0.0);
      for (const auto& r : reports) h.fractions[index_of(r.time)] += 1.0;
      break;
    }
  }
  if (axis != Axis::PerUser) {
    for (std::size_t i = 0; i < h.fractions.size(); ++i) {
      h.support.push_back(static_cast<double>(i));
      h.fractions[i] /= total;
    }
  }
  return h;
}

Aligned align(const Histogram& a, const Histogram& b) {
  std::map<double, std::pair<double, double>> merged;
  for (std::size_t i = 0; i < a.support.size(); ++i) merged[a.support[i]].first += a.fractions[i];
  for (std::size_t i = 0; i < b.support.size(); ++i) merged[b.support[i]].second += b.fractions[i];
  Aligned out;
  for (const auto& [x, v] : merged) {
    out.support.push_back(x);
    out.a.push_back(v.first);
    out.b.push_back(v.second);
  }
  return out;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("correlation needs vectors of equal length");
  if (a.size() < 2) throw InputError("correlation needs at least two points");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) throw InputError("zero variance: correlation undefined");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double rmse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("rmse needs vectors of equal length");
  if (a.empty()) throw InputError("rmse of empty vectors");
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(ss / static_cast<double>(a.size()));
}

AxisScore compare(std::span<const ReportRecord> real, std::span<const ReportRecord> simulated,
                  Axis axis, AxisCurve* curve) {
  Aligned v = align(histogram(real, axis), histogram(simulated, axis));
  const AxisScore score{pearson_correlation(v.a, v.b), rmse(v.a, v.b)};
  if (curve) *curve = AxisCurve{std::move(v.support), std::move(v.a), std::move(v.b)};
  return score;
}

SimConfig config_from_fit(const ModelFit& fit, std::size_t participants, std::uint64_t seed) {
  SimConfig c;
  c.tau = fit.window.days();
  c.startDate = fit.window.first;
  c.pmfDay = fit.pmfDay;
  c.pmfTime = fit.pmfTime;
  c.pmfEvType = fit.pmfEvType;
  c.evType = fit.pmfEvType.labels();
  c.prLie = 0.0;
  c.n = participants;
  c.mlog = fit.participation.location;
  c.sdlog = fit.participation.scale;
  c.lambdaE = 0.0;
  for (const auto& [loc, l] : fit.lambda) c.lambdaE += l;
  c.loc = fit.lambda.size() == 1 ? fit.lambda.begin()->first : std::string("pooled");
  c.seed = seed;
  return c;
}

std::vector<ValidationReport> cross_validate(std::span<const ReportRecord> realData,
                                             const DateWindow& window,
                                             const CrossValidationOptions& options) {
  if (options.folds < 2) throw InputError("cross-validation needs k >= 2");
  std::vector<std::string> users;
  {
    std::unordered_set<std::string_view> seen;
    for (const auto& r : realData) {
      if (window.contains(r.date) && seen.insert(r.sourceId).second) users.push_back(r.sourceId);
    }
  }
  std::sort(users.begin(), users.end());
  RandomSource master(options.seed);
  RandomSource splitRng = master.split(0);
  const auto folds = kfold_split<std::string>(users, options.folds, splitRng);

  std::unordered_map<std::string_view, std::size_t> foldOf;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    for (const auto& u : folds[f]) foldOf.emplace(u, f);
  }

  std::vector<ValidationReport> reports(folds.size());
  std::vector<std::exception_ptr> errors(folds.size());
  const auto nf = static_cast<std::int64_t>(folds.size());
  FitOptions fitOptions;
  fitOptions.outlierPct = options.outlierPct;
  fitOptions.acfMaxLag = 0;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t fi = 0; fi < nf; ++fi) {
    const auto f = static_cast<std::size_t>(fi);
    try {
      std::vector<ReportRecord> train, test;
      for (const auto& r : realData) {
        if (!window.contains(r.date)) continue;
        (foldOf.at(r.sourceId) == f ? test : train).push_back(r);
      }
      const ModelFit fit = fit_model(train, window, fitOptions);
      const SimConfig config = config_from_fit(fit, folds[f].size(), master.split(f + 1).seed());
      const Trace trace = simulate(config);
      const auto simulated = records_from_trace(trace.reports, config.loc);

      ValidationReport& out = reports[f];
      out.fold = f;
      out.realReports = test.size();
      out.simReports = simulated.size();
      out.realUsers = folds[f].size();
      std::unordered_set<std::string_view> simUsers;
      for (const auto& r : simulated) simUsers.insert(r.sourceId);
      out.simUsers = simUsers.size();
      for (Axis axis : kAllAxes) {
        const auto a = static_cast<std::size_t>(axis);
        out.scores[a] = compare(test, simulated, axis, &out.curves[a]);
      }
    } catch (...) {
      errors[f] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return reports;
}

std::array<AxisSummary, 3> summarize(std::span<const ValidationReport> reports) {
  std::array<AxisSummary, 3> out{};
  if (reports.empty()) return out;
  const double n = static_cast<double>(reports.size());
  for (std::size_t a = 0; a < 3; ++a) {
    double sc = 0.0, sr = 0.0;
    for (const auto& r : reports) {
      sc += r.scores[a].correlation;
      sr += r.scores[a].rmse;
    }
    out[a].meanCorrelation = sc / n;
    out[a].meanRmse = sr / n;
    double vc = 0.0, vr = 0.0;
    for (const auto& r : reports) {
      vc += std::pow(r.scores[a].correlation - out[a].meanCorrelation, 2);
      vr += std::pow(r.scores[a].rmse - out[a].meanRmse, 2);
    }
    out[a].sdCorrelation = reports.size() > 1 ? std::sqrt(vc / (n - 1.0)) : 0.0;
    out[a].sdRmse = reports.size() > 1 ? std::sqrt(vr / (n - 1.0)) : 0.0;
  }
  return out;
}

}  // namespace pssim
