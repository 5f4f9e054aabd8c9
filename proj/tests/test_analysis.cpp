#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "pssim/aggregation.hpp"
#include "pssim/analysis.hpp"
#include "pssim/random.hpp"
#include "pssim/simulator.hpp"

using namespace pssim;

namespace {

ReportRecord rec(Date d, TemporalBin t, std::string user, std::string loc = "A",
                 std::string type = "Jam") {
  return {d, t, std::move(user), std::move(loc), std::move(type)};
}

// Textbook definition, written independently of the library.
double acf_oracle(const std::vector<double>& x, std::size_t k) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    den += (x[t] - mean) * (x[t] - mean);
    if (t + k < x.size()) num += (x[t] - mean) * (x[t + k] - mean);
  }
  return num / den;
}

}  // namespace

TEST_CASE("record_at bins in UTC") {
  using namespace std::chrono;
  const sys_seconds t = sys_days{2015y / 2 / 24} + 1h + 30min;
  const ReportRecord r = record_at(t, "u", "A", "Jam");
  CHECK(r.date == Date(2015, 2, 24));
  CHECK(r.time == TemporalBin::N);
}

TEST_CASE("binning a hand-built sample") {
  const Date mon(2015, 2, 23);
  const DateWindow w{mon, mon + 13};
  const std::vector<ReportRecord> rs = {
      rec(mon, TemporalBin::M, "u1"),
      rec(mon, TemporalBin::M, "u2"),
      rec(mon + 1, TemporalBin::E, "u1", "B"),
      rec(mon + 7, TemporalBin::M, "u1"),
      rec(mon + 8, TemporalBin::N, "u3", "B", "Hazard"),
      rec(mon + 20, TemporalBin::M, "u1"),  // outside
  };
  const BinnedData b = bin_reports(rs, w);
  CHECK(b.binned == 5);
  CHECK(b.excluded == 1);
  CHECK(b.weeks() == 2);
  REQUIRE(b.byLocation.size() == 2);
  const auto& a = b.byLocation.at("A");
  CHECK(a.cells.size() == 14 * 8);
  CHECK(a.cells[index_of(TemporalBin::M)] == 2.0);
  CHECK(a.cells[7 * 8 + index_of(TemporalBin::M)] == 1.0);
  CHECK(b.userWeekCounts.at({"u1", 0}) == 2);
  CHECK(b.userWeekCounts.at({"u1", 1}) == 1);
  CHECK(b.userWeekCounts.at({"u3", 1}) == 1);

  const auto pmfs = estimate_pmfs(b.pooled());
  CHECK(pmfs.day.prob("Monday") == doctest::Approx(3.0 / 5));
  CHECK(pmfs.day.prob("Tuesday") == doctest::Approx(2.0 / 5));
  CHECK(pmfs.time.prob("M") == doctest::Approx(3.0 / 5));
  CHECK(pmfs.time.prob("N") == doctest::Approx(1.0 / 5));
  CHECK(estimate_lambda(a) == doctest::Approx(3.0 / (14 * 8)));

  std::vector<ReportRecord> inside(rs.begin(), rs.end() - 1);
  const Pmf types = estimate_evtype_pmf(inside);
  CHECK(types.labels() == std::vector<std::string>{"Hazard", "Jam"});
  CHECK(types.prob("Jam") == doctest::Approx(0.8));

  const auto peaks = peak_weekly_counts(b);
  CHECK(peaks.at("u1") == 2.0);
  CHECK(peaks.at("u2") == 1.0);
  const auto samples = weekly_samples(b, peaks);
  CHECK(samples.size() == 4);

  CHECK_THROWS_WITH_AS(bin_reports(rs, DateWindow{mon, mon + (-1)}), "empty window", InputError);
}

TEST_CASE("autocorrelation matches the textbook formula") {
  RandomSource rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(10 + rng.uniform_index(60));
    for (double& v : x) v = static_cast<double>(rng.poisson(4.0));
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) continue;
    for (std::size_t k = 0; k < 9; ++k) {
      REQUIRE(autocorrelation(x, k) == doctest::Approx(acf_oracle(x, k)).epsilon(1e-12));
    }
  }
  const std::vector<double> flat(16, 3.0);
  CHECK_THROWS_AS(autocorrelation(flat, 1), InputError);
  CHECK_THROWS_AS(autocorrelation(std::vector<double>{1, 2}, 2), InputError);
}

TEST_CASE("property: ACF is invariant under positive affine maps and reversal") {
  RandomSource rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> x(12 + rng.uniform_index(100));
    for (double& v : x) v = rng.normal() * 3.0 + 10.0;
    const double a = 0.1 + 10.0 * rng.uniform01();
    const double b = 100.0 * (rng.uniform01() - 0.5);
    std::vector<double> y(x.size()), rev(x.rbegin(), x.rend());
    std::transform(x.begin(), x.end(), y.begin(), [&](double v) { return a * v + b; });
    const std::size_t k = 1 + rng.uniform_index(8);
    const double r = autocorrelation(x, k);
    REQUIRE(autocorrelation(y, k) == doctest::Approx(r).epsilon(1e-9));
    REQUIRE(autocorrelation(rev, k) == doctest::Approx(r).epsilon(1e-9));
    REQUIRE(std::abs(r) <= 1.0 + 1e-12);
  }
}

TEST_CASE("a day-periodic series peaks at lag 8") {
  std::vector<double> x;
  const double profile[8] = {1, 3, 5, 8, 6, 7, 4, 2};
  for (int d = 0; d < 7; ++d) {
    for (double p : profile) x.push_back(p);
  }
  const double r8 = autocorrelation(x, 8);
  CHECK(r8 > 0.6);
  for (std::size_t k = 1; k < 8; ++k) CHECK(autocorrelation(x, k) < r8);
}

TEST_CASE("Q-Q against the generating log-normal is near perfect") {
  RandomSource rng(19);
  std::vector<double> xs;
  for (int i = 0; i < 5000; ++i) xs.push_back(lognormal_sample({1.0, 0.4}, rng));
  const QqData qq = qq_against_lognormal(xs, fit_lognormal(xs));
  CHECK(qq.points.size() == 5000);
  CHECK(qq.r2 > 0.99);
  CHECK(std::is_sorted(qq.points.begin(), qq.points.end()));
  CHECK_THROWS_AS(qq_against_lognormal(std::vector<double>(5, 1.0), {0, 1}), InputError);
  CHECK_THROWS_AS(qq_against_lognormal(std::vector<double>(20, 1.0), {0, 1}), InputError);
}

TEST_CASE("outlier filter uses interpolated percentiles and a strict cut") {
  std::map<std::string, double> users;
  for (int i = 1; i <= 10; ++i) users["u" + std::to_string(i)] = i;
  // (10 - 1) * 0.9 = 8.1 -> 9 + 0.1 * (10 - 9) = 9.1
  const OutlierFilter f = filter_outliers(users, 90.0);
  CHECK(f.threshold == doctest::Approx(9.1));
  CHECK(f.rejected == std::vector<std::string>{"u10"});
  CHECK(f.kept.size() == 9);
  const OutlierFilter none = filter_outliers({{"a", 2.0}, {"b", 2.0}}, 50.0);
  CHECK(none.rejected.empty());
  CHECK_THROWS_AS(filter_outliers(users, 100.0), InputError);
  CHECK_THROWS_AS(filter_outliers(users, 0.0), InputError);
}

TEST_CASE("fit_model on a simulated trace") {
  SimConfig c = default_config();
  c.n = 3000;
  c.tau = 28;
  c.lambdaE = 40.0;
  c.seed = 3;
  const Trace t = simulate(c);
  const auto records = records_from_trace(t.reports, c.loc);
  FitOptions fo;
  fo.perLocationParticipation = true;
  const ModelFit fit = fit_model(records, c.window(), fo);
  CHECK(fit.reports == records.size());
  CHECK(fit.users <= c.n);
  REQUIRE(fit.lambda.size() == 1);
  CHECK(fit.lambda.at(c.loc) == doctest::Approx(static_cast<double>(records.size()) / (28 * 8)));
  for (DayBin d : kAllDayBins) {
    CHECK(std::abs(fit.pmfDay.prob(name(d)) - c.pmfDay.prob(name(d))) < 0.02);
  }
  for (TemporalBin b : kAllTemporalBins) {
    CHECK(std::abs(fit.pmfTime.prob(short_name(b)) - c.pmfTime.prob(short_name(b))) < 0.02);
  }
  CHECK(fit.acf.at(c.loc).size() == 8);
  CHECK(fit.participationByLocation.count(c.loc) == 1);
  CHECK(fit.qq.r2 > 0.8);
}

TEST_CASE("fit_model rejects degenerate data") {
  const Date mon(2015, 2, 23);
  const DateWindow w{mon, mon + 6};
  const std::vector<ReportRecord> one = {rec(mon, TemporalBin::M, "solo"),
                                         rec(mon + 1, TemporalBin::D, "solo")};
  CHECK_THROWS_AS(fit_model(one, w), InputError);
  CHECK_THROWS_AS(fit_model(std::vector<ReportRecord>{}, w), InputError);
}
