#include "pssim/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pssim/aggregation.hpp"
#include "pssim/analysis.hpp"
#include "pssim/io.hpp"
#include "pssim/parallel.hpp"
#include "pssim/simulator.hpp"
#include "pssim/validation.hpp"

namespace pssim::cli {
namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

int guarded(std::ostream& log, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const InputError& e) {
    log << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ModelError& e) {
    log << "error: " << e.what() << '\n';
    return kExitModel;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitModel;
  }
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

fs::path sidecar_path(const fs::path& dataset) {
  return fs::path(dataset.string() + ".rejects.json");
}

std::optional<ordered_json> read_sidecar(const fs::path& dataset) {
  const fs::path p = sidecar_path(dataset);
  if (!fs::exists(p)) return std::nullopt;
  std::ifstream in(p);
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;  // metadata only; a broken sidecar should not block a fit
  }
}

/// Explicit bounds win; then the window recorded at ingest; then the data.
DateWindow resolve_window(std::span<const ReportRecord> records, const std::optional<Date>& from,
                          const std::optional<Date>& to, const std::optional<ordered_json>& meta) {
  std::optional<DateWindow> recorded;
  if (meta && meta->contains("window_start") && (*meta)["window_start"].is_string()) {
    recorded = DateWindow{Date::parse_iso((*meta)["window_start"].get<std::string>()),
                          Date::parse_iso((*meta)["window_end"].get<std::string>())};
  }
  DateWindow w;
  if (from && to) {
    w = {*from, *to};
  } else {
    const DateWindow base = recorded ? *recorded : window_of(records);
    w = {from.value_or(base.first), to.value_or(base.last)};
  }
  if (w.days() <= 0) throw InputError("empty window");
  return w;
}

std::vector<ReportRecord> load_dataset(const fs::path& path) {
  auto in = open_in(path);
  auto records = io::read_dataset_csv(in);
  if (records.empty()) throw InputError("dataset '" + path.string() + "' has no reports");
  return records;
}

void write_plot_fit(const fs::path& dir, std::span<const ReportRecord> records,
                    const ModelFit& fit) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const BinnedData binned = bin_reports(records, fit.window);

  // Participation histogram plus day and time frequencies.
  {
    auto out = open_out(dir / "fig2.csv");
    out << "panel,x,y\n";
    std::map<std::string, std::uint64_t> perUser;
    for (const auto& r : records) {
      if (fit.window.contains(r.date)) ++perUser[r.sourceId];
    }
    std::map<std::uint64_t, std::uint64_t> users;
    for (const auto& [u, c] : perUser) ++users[c];
    for (const auto& [c, u] : users) out << "reports-per-user," << c << ',' << u << '\n';
    const BinnedSeries pooled = binned.pooled();
    std::array<double, kDayBinCount> days{};
    std::array<double, kTemporalBinCount> times{};
    for (int d = 0; d < fit.window.days(); ++d) {
      const auto day = index_of(weekday_of(fit.window.first + d));
      for (TemporalBin b : kAllTemporalBins) {
        const double v = pooled.cells[static_cast<std::size_t>(d) * kTemporalBinCount + index_of(b)];
        days[day] += v;
        times[index_of(b)] += v;
      }
    }
    for (DayBin d : kAllDayBins) out << "day," << name(d) << ',' << io::format_double(days[index_of(d)]) << '\n';
    for (TemporalBin b : kAllTemporalBins) {
      out << "time," << short_name(b) << ',' << io::format_double(times[index_of(b)]) << '\n';
    }
  }
  {
    auto out = open_out(dir / "fig4_qq.csv");
    out << "theoretical,empirical\n";
    for (const auto& [t, e] : fit.qq.points) {
      out << io::format_double(t) << ',' << io::format_double(e) << '\n';
    }
  }
  {
    auto out = open_out(dir / "fig5_acf.csv");
    out << "location,lag,acf\n";
    for (const auto& [loc, values] : fit.acf) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        out << io::csv_field(loc) << ',' << i + 1 << ',' << io::format_double(values[i]) << '\n';
      }
    }
  }
}

}  // namespace

int run_ingest(const IngestOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    io::ColumnMap columns;
    for (const auto& m : options.columnMap) columns.apply(m);
    if (options.outlierPct && !(*options.outlierPct > 0.0 && *options.outlierPct < 100.0)) {
      throw InputError("--outlier-pct must lie in (0, 100)");
    }
    auto in = open_in(options.input);
    io::IngestResult result = io::read_ingest_csv(in, columns, std::nullopt);

    std::optional<DateWindow> window;
    if (!result.accepted.empty() || (options.from && options.to)) {
      window = resolve_window(result.accepted, options.from, options.to, std::nullopt);
      std::erase_if(result.accepted, [&](const ReportRecord& r) {
        const bool outside = !window->contains(r.date);
        if (outside) ++result.outsideWindow;
        return outside;
      });
    }

    std::vector<std::string> outliers;
    std::uint64_t outlierReports = 0;
    if (options.outlierPct && window && !result.accepted.empty()) {
      const BinnedData binned = bin_reports(result.accepted, *window);
      const auto peaks = peak_weekly_counts(binned);
      if (peaks.size() >= 2) {
        OutlierFilter f = filter_outliers(peaks, *options.outlierPct);
        outliers = std::move(f.rejected);
        const std::set<std::string> drop(outliers.begin(), outliers.end());
        outlierReports = std::erase_if(result.accepted,
                                       [&](const ReportRecord& r) { return drop.count(r.sourceId) > 0; });
      }
    }

    {
      auto out = open_out(options.out);
      io::write_dataset_csv(out, result.accepted);
    }
    ordered_json meta;
    meta["rows"] = result.rows;
    meta["accepted"] = result.accepted.size();
    meta["rejected"] = result.rejected;
    meta["reasons"] = ordered_json::object();
    for (const auto& [reason, n] : result.reasons) meta["reasons"][reason] = n;
    meta["outside_window"] = result.outsideWindow;
    meta["dmy_dates"] = result.dmyDates;
    meta["window_start"] = window ? ordered_json(window->first.iso()) : ordered_json(nullptr);
    meta["window_end"] = window ? ordered_json(window->last.iso()) : ordered_json(nullptr);
    meta["outlier_pct"] = options.outlierPct ? ordered_json(*options.outlierPct) : ordered_json(nullptr);
    meta["outlier_users"] = outliers.size();
    meta["outlier_reports"] = outlierReports;
    {
      auto out = open_out(sidecar_path(options.out));
      out << meta.dump(2) << '\n';
    }

    log << "rows: " << result.rows << "\naccepted: " << result.accepted.size()
        << "\nrejected: " << result.rejected << '\n';
    for (const auto& [reason, n] : result.reasons) log << "  " << reason << ": " << n << '\n';
    if (result.outsideWindow) log << "outside window: " << result.outsideWindow << '\n';
    if (result.dmyDates) log << "DD/MM/YYYY dates: " << result.dmyDates << '\n';
    if (!outliers.empty()) {
      log << "outlier users removed: " << outliers.size() << " (" << outlierReports << " reports)\n";
    }
  });
}

int run_fit(const FitCmdOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const auto records = load_dataset(options.dataset);
    const auto meta = read_sidecar(options.dataset);
    const DateWindow window = resolve_window(records, options.from, options.to, meta);

    FitOptions fo;
    fo.outlierPct = options.outlierPct;
    fo.perLocationParticipation = options.perLocation;
    ModelFit fit = fit_model(records, window, fo);
    // Filtering already done at ingest is recorded rather than repeated.
    if (!options.outlierPct && meta && (*meta)["outlier_pct"].is_number()) {
      fit.outlierPct = (*meta)["outlier_pct"].get<double>();
      fit.outlierUsers = (*meta)["outlier_users"].get<std::uint64_t>();
    }
    {
      auto out = open_out(options.out);
      io::write_model(out, fit);
    }
    if (options.plotData) write_plot_fit(*options.plotData, records, fit);

    log << "window: " << window.first.iso() << " .. " << window.last.iso() << " (" << window.days()
        << " days)\nreports: " << fit.reports << "\nusers: " << fit.users
        << "\nparticipation: mlog=" << io::format_double(fit.participation.location)
        << " sdlog=" << io::format_double(fit.participation.scale)
        << "\nQ-Q r^2: " << std::fixed << std::setprecision(4) << fit.qq.r2 << '\n';

    // ACF table for the busiest locations; the model file has all of them.
    std::vector<std::pair<double, std::string>> busiest;
    for (const auto& [loc, l] : fit.lambda) {
      if (fit.acf.count(loc)) busiest.emplace_back(l, loc);
    }
    std::sort(busiest.begin(), busiest.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    constexpr std::size_t kShown = 10;
    if (!busiest.empty()) {
      log << "ACF lags 1.." << fit.acf.at(busiest.front().second).size() << ":\n";
      for (std::size_t i = 0; i < std::min(kShown, busiest.size()); ++i) {
        const auto& loc = busiest[i].second;
        log << "  " << loc << " (lambda " << std::setprecision(2) << busiest[i].first << "):";
        for (double v : fit.acf.at(loc)) log << ' ' << std::setprecision(3) << v;
        log << '\n';
      }
      if (busiest.size() > kShown) {
        log << "  (" << busiest.size() - kShown << " more locations in the model file)\n";
      }
    }
    log.unsetf(std::ios::floatfield);
  });
}

namespace {

SimConfig simulate_config(const SimulateOptions& o) {
  SimConfig c = default_config();
  if (o.model) {
    auto in = open_in(*o.model);
    const ModelFit fit = io::read_model(in);
    c.pmfDay = fit.pmfDay;
    c.pmfTime = fit.pmfTime;
    c.pmfEvType = fit.pmfEvType;
    c.evType = fit.pmfEvType.labels();
    c.startDate = fit.window.first;
    c.tau = fit.window.days();
    c.mlog = fit.participation.location;
    c.sdlog = fit.participation.scale;
    if (fit.users > 0) c.n = fit.users;
    if (fit.lambda.empty()) throw InputError("model has no event rates");
    if (o.loc) {
      const auto it = fit.lambda.find(*o.loc);
      if (it == fit.lambda.end()) throw InputError("location '" + *o.loc + "' not in model");
      c.loc = *o.loc;
      c.lambdaE = it->second;
      if (const auto p = fit.participationByLocation.find(*o.loc);
          p != fit.participationByLocation.end()) {
        c.mlog = p->second.location;
        c.sdlog = p->second.scale;
      }
    } else if (fit.lambda.size() == 1) {
      c.loc = fit.lambda.begin()->first;
      c.lambdaE = fit.lambda.begin()->second;
    } else {
      c.loc = "pooled";
      c.lambdaE = 0.0;
      for (const auto& [loc, l] : fit.lambda) c.lambdaE += l;
    }
  } else if (o.loc) {
    c.loc = *o.loc;
  }
  if (o.tau) {
    if (*o.tau <= 0) throw InputError("--tau must be positive");
    c.tau = *o.tau;
  }
  if (o.n) {
    if (*o.n <= 0) throw InputError("--n must be positive");
    c.n = static_cast<std::size_t>(*o.n);
  }
  if (o.lambda) c.lambdaE = *o.lambda;
  if (o.prLie) c.prLie = *o.prLie;
  if (o.mlog) c.mlog = *o.mlog;
  if (o.sdlog) c.sdlog = *o.sdlog;
  if (o.startDate) c.startDate = *o.startDate;
  c.seed = o.seed;
  c.validate();
  return c;
}

}  // namespace

int run_simulate(const SimulateOptions& options, std::ostream& log) {
  return run_simulate(options, log, std::cout);
}

int run_simulate(const SimulateOptions& options, std::ostream& log, std::ostream& data) {
  return guarded(log, [&] {
    const SimConfig config = simulate_config(options);
    const Trace trace = simulate(config);
    if (options.out.empty() || options.out == "-") {
      io::write_trace_csv(data, trace.reports);
    } else {
      auto out = open_out(options.out);
      io::write_trace_csv(out, trace.reports);
    }
    const std::uint64_t lies = trace.false_reports();
    log << "events: " << trace.events.size() << "\nreports: " << trace.reports.size()
        << "\nfalse reports: " << lies << '\n';
  });
}

int run_aggregate(const AggregateCmdOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    if (options.workers < 0) throw InputError("--workers must be non-negative");
    const int workers = options.workers > 0 ? options.workers : default_worker_count();
    if (options.minSupport < 1) throw InputError("--min-support must be at least 1");

    std::string header;
    {
      auto in = open_in(options.input);
      std::getline(in, header);
    }
    auto in = open_in(options.input);
    std::vector<ReportRecord> records;
    std::uint64_t rejectedAtRead = 0;
    if (header.rfind("EventNo", 0) == 0 || header.rfind("\xEF\xBB\xBF" "EventNo", 0) == 0) {
      records = records_from_trace(io::read_trace_csv(in), options.loc, options.useOccurred);
    } else if (header.find("Date") != std::string::npos && header.find("Loc") != std::string::npos) {
      records = io::read_dataset_csv(in);
    } else {
      io::IngestResult r = io::read_ingest_csv(in, io::ColumnMap{}, std::nullopt);
      records = std::move(r.accepted);
      rejectedAtRead = r.rejected;
    }

    set_worker_count(workers);
    AggregateOptions ao;
    ao.partitions = static_cast<std::size_t>(workers);
    ao.minSupport = options.minSupport;
    const AggregateResult result = aggregate(records, ao);
    {
      auto out = open_out(options.out);
      io::write_events_csv(out, result.events);
    }
    log << "reports: " << records.size() << "\nrejected: " << result.rejected + rejectedAtRead
        << "\nevents: " << result.events.size() << "\nworkers: " << workers << '\n';
  });
}

int run_validate(const ValidateCmdOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const auto records = load_dataset(options.dataset);
    const DateWindow window =
        resolve_window(records, std::nullopt, std::nullopt, read_sidecar(options.dataset));
    CrossValidationOptions cv;
    cv.folds = options.folds;
    cv.seed = options.seed;
    cv.outlierPct = options.outlierPct;
    const auto reports = cross_validate(records, window, cv);
    {
      auto out = open_out(options.out);
      io::write_validation_csv(out, reports);
    }
    if (options.plotData) {
      std::error_code ec;
      fs::create_directories(*options.plotData, ec);
      auto out = open_out(*options.plotData / "fig6.csv");
      out << "fold,axis,x,source,fraction\n";
      for (const auto& r : reports) {
        for (Axis axis : kAllAxes) {
          const AxisCurve& c = r.curves[static_cast<std::size_t>(axis)];
          for (std::size_t i = 0; i < c.support.size(); ++i) {
            const std::string prefix = std::to_string(r.fold) + ',' + std::string(axis_key(axis)) +
                                       ',' + io::format_double(c.support[i]) + ',';
            out << prefix << "real," << io::format_double(c.real[i]) << '\n';
            out << prefix << "simulated," << io::format_double(c.simulated[i]) << '\n';
          }
        }
      }
    }
    io::write_validation_summary(log, reports);
  });
}

BenchResult run_bench_grid(const BenchOptions& o) {
  if (o.nMin <= 0 || o.nMax < o.nMin || o.nStep <= 0 || o.mMin <= 0 || o.mMax < o.mMin ||
      o.mStep <= 0) {
    throw InputError("bench ranges must be positive and ordered");
  }
  if (o.repeats < 1) throw InputError("--repeats must be at least 1");
  set_worker_count(o.workers > 0 ? o.workers : default_worker_count());

  BenchResult result;
  SimConfig base = default_config();
  base.mlog = std::log(3.0);
  base.seed = o.seed;
  for (int m = o.mMin; m <= o.mMax; m += o.mStep) {
    for (long long n = o.nMin; n <= o.nMax; n += o.nStep) {
      SimConfig c = base;
      c.n = static_cast<std::size_t>(n);
      c.tau = m;
      std::vector<double> times;
      for (int rep = 0; rep < o.repeats; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        const Trace trace = simulate(c);
        const auto t1 = std::chrono::steady_clock::now();
        if (trace.reports.empty()) throw ModelError("bench produced an empty trace");
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
      }
      std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
      result.points.push_back({n, m, times[times.size() / 2]});
    }
  }

  // Normal equations for ln T = c + a ln n + b ln m.
  double s[3][3] = {}, t[3] = {};
  for (const auto& p : result.points) {
    const double x[3] = {1.0, std::log(static_cast<double>(p.n)), std::log(static_cast<double>(p.m))};
    const double y = std::log(std::max(p.seconds, 1e-9));
    for (int i = 0; i < 3; ++i) {
      t[i] += x[i] * y;
      for (int j = 0; j < 3; ++j) s[i][j] += x[i] * x[j];
    }
  }
  auto det3 = [](const double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  const double d = det3(s);
  if (std::abs(d) > 1e-12) {
    double coef[3];
    for (int k = 0; k < 3; ++k) {
      double a[3][3];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) a[i][j] = j == k ? t[i] : s[i][j];
      }
      coef[k] = det3(a) / d;
    }
    result.intercept = coef[0];
    result.exponentN = coef[1];
    result.exponentM = coef[2];
  }
  // TODO: a single-row or single-column grid leaves the fit singular; fall back to a 1-D fit.
  return result;
}

int run_bench(const BenchOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    const BenchResult r = run_bench_grid(options);
    if (!options.out.empty()) {
      auto out = open_out(options.out);
      out << "n,m,seconds\n";
      for (const auto& p : r.points) {
        out << p.n << ',' << p.m << ',' << io::format_double(p.seconds) << '\n';
      }
    }
    const auto largest = std::max_element(r.points.begin(), r.points.end(),
                                          [](const auto& a, const auto& b) {
                                            return std::tie(a.n, a.m) < std::tie(b.n, b.m);
                                          });
    log << "grid points: " << r.points.size() << "\nworkers: " << worker_count() << '\n';
    log << std::fixed << std::setprecision(4) << "largest point (n=" << largest->n
        << ", m=" << largest->m << "): " << largest->seconds << " s\n"
        << std::setprecision(3) << "fitted T ~ n^" << r.exponentN << " * m^" << r.exponentM
        << " (quadratic bound: n^2 * m^2)\n";
    log.unsetf(std::ios::floatfield);
  });
}

}  // namespace pssim::cli
