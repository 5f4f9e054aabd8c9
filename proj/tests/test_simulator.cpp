#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "pssim/distributions.hpp"
#include "pssim/parallel.hpp"
#include "pssim/serial_reference.hpp"
#include "pssim/simulator.hpp"

using namespace pssim;

namespace {

SimConfig small_config(std::uint64_t seed = 1) {
  SimConfig c = default_config();
  c.n = 300;
  c.lambdaE = 3.0;
  c.tau = 14;
  c.seed = seed;
  return c;
}

struct WorkerGuard {
  explicit WorkerGuard(int n) { set_worker_count(n); }
  ~WorkerGuard() { set_worker_count(0); }
};

}  // namespace

TEST_CASE("parallel kernels match the serial reference exactly") {
  for (int workers : {1, 3, 8}) {
    WorkerGuard guard(workers);
    for (std::uint64_t seed : {1u, 2u, 99u}) {
      SimConfig c = small_config(seed);
      c.prLie = 0.2;
      const Trace par = simulate(c);
      const Trace ser = serial::simulate(c);
      CAPTURE(workers);
      CAPTURE(seed);
      CHECK(par.events == ser.events);
      CHECK(par.reports == ser.reports);
    }
  }
}

TEST_CASE("simulate is deterministic per seed") {
  const SimConfig c = small_config(5);
  CHECK(simulate(c).reports == simulate(c).reports);
  CHECK(simulate(c).reports != simulate(small_config(6)).reports);
}

TEST_CASE("every participant files exactly its quota") {
  const SimConfig c = small_config(17);
  const Trace t = simulate(c);
  RandomSource quotaRng = RandomSource(c.seed).split(static_cast<std::uint64_t>(SimStream::Quotas));
  const auto quotas = lognormal_sample_counts(c.n, rescale(c.mlog, c.sdlog, c.tau), quotaRng);
  std::map<std::string, std::uint64_t> filed;
  for (const auto& r : t.reports) ++filed[r.sourceId];
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < quotas.size(); ++i) {
    const auto it = filed.find(participant_id(i + 1));
    CHECK((it == filed.end() ? 0 : it->second) == quotas[i]);
    total += quotas[i];
  }
  CHECK(t.reports.size() == total);
}

TEST_CASE("reports inherit their event's date, slot and true type") {
  SimConfig c = small_config(23);
  c.prLie = 0.3;
  const Trace t = simulate(c);
  const DateWindow w = c.window();
  for (std::size_t i = 0; i < t.events.size(); ++i) {
    const Event& e = t.events[i];
    REQUIRE(e.eventNo == i + 1);
    REQUIRE(w.contains(e.date));
    REQUIRE(weekday_of(e.date) == e.day);
    REQUIRE(e.loc == c.loc);
  }
  for (std::size_t i = 0; i < t.reports.size(); ++i) {
    const Report& r = t.reports[i];
    REQUIRE(r.reportNo == i + 1);
    const Event& e = t.events.at(r.eventNo - 1);
    REQUIRE(r.date == e.date);
    REQUIRE(r.day == e.day);
    REQUIRE(r.time == e.time);
    REQUIRE(r.eventOccurred == e.incidentType);
  }
}

TEST_CASE("no lies when prLie is zero; lies always name a different type") {
  SimConfig c = small_config(3);
  c.prLie = 0.0;
  CHECK(simulate(c).false_reports() == 0);
  c.prLie = 1.0;
  const Trace t = simulate(c);
  CHECK(t.false_reports() == t.reports.size());
}

TEST_CASE("inject_false_report") {
  const std::vector<EventType> types = {"Jam", "Accident", "Hazard"};
  RandomSource rng(1);
  for (int i = 0; i < 1000; ++i) CHECK(inject_false_report("Jam", types, 0.0, rng) == "Jam");
  std::map<EventType, int> seen;
  for (int i = 0; i < 3000; ++i) ++seen[inject_false_report("Jam", types, 1.0, rng)];
  CHECK(seen.count("Jam") == 0);
  CHECK(std::abs(seen["Accident"] - 1500) < 200);
  CHECK_THROWS_AS(inject_false_report("Flood", types, 0.5, rng), InputError);
  CHECK_THROWS_AS(inject_false_report("Jam", types, 1.5, rng), InputError);
}

TEST_CASE("uniform report attribution spreads reports over events") {
  SimConfig c = small_config(4);
  c.n = 2000;
  const Trace t = simulate(c);
  std::vector<int> perEvent(t.events.size(), 0);
  for (const auto& r : t.reports) ++perEvent[r.eventNo - 1];
  const double mean = static_cast<double>(t.reports.size()) / static_cast<double>(t.events.size());
  double var = 0.0;
  for (int k : perEvent) var += (k - mean) * (k - mean);
  var /= static_cast<double>(perEvent.size());
  // Multinomial with equal cells is close to Poisson: variance near the mean.
  CHECK(var == doctest::Approx(mean).epsilon(0.15));
}

TEST_CASE("event slots follow the time pmf") {
  SimConfig c = default_config();
  c.lambdaE = 200.0;
  c.tau = 28;
  c.n = 10;
  const Trace t = simulate(c);
  std::array<double, kTemporalBinCount> counts{};
  for (const auto& e : t.events) counts[index_of(e.time)] += 1.0;
  const auto probs = time_probs(c.pmfTime);
  const double n = static_cast<double>(t.events.size());
  for (std::size_t b = 0; b < kTemporalBinCount; ++b) {
    CHECK(std::abs(counts[b] / n - probs[b]) < 5.0 * std::sqrt(probs[b] * (1 - probs[b]) / n));
  }
}

TEST_CASE("configuration errors") {
  SimConfig c = default_config();
  c.tau = 0;
  CHECK_THROWS_AS(simulate(c), InputError);
  c = default_config();
  c.tau = 3;  // default day pmf needs every weekday
  CHECK_THROWS_AS(simulate(c), ModelError);
  c = default_config();
  c.prLie = -0.1;
  CHECK_THROWS_AS(simulate(c), InputError);
  c = default_config();
  c.mlog = -20.0;  // every quota rounds to zero
  CHECK_THROWS_AS(simulate(c), ModelError);
  c = default_config();
  c.evType = {"Jam"};
  CHECK_THROWS_AS(simulate(c), InputError);
}

TEST_CASE("short windows work when the day pmf only covers their weekdays") {
  SimConfig c = default_config();
  c.tau = 1;  // 2015-02-23 is a Monday
  c.pmfDay = Pmf::from_probs({"Monday"}, {1.0});
  const Trace t = simulate(c);
  for (const auto& e : t.events) CHECK(e.date == c.startDate);
}

TEST_CASE("attribute_reports drains the pool") {
  const SimConfig c = small_config(8);
  RandomSource master(c.seed);
  const auto events = assign_event_attributes(50, c, master.split(3));
  ParticipantPool pool = ParticipantPool::from_quotas({3, 0, 5, 1});
  const auto reports = attribute_reports(events, pool, 0.0, c.evType, master.split(4));
  CHECK(reports.size() == 9);
  CHECK(pool.total() == 0);
  std::set<std::string> who;
  for (const auto& r : reports) who.insert(r.sourceId);
  CHECK(who == std::set<std::string>{"UID000001", "UID000003", "UID000004"});
}
