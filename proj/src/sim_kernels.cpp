#include "sim_kernels.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace pssim::detail {

EventSampler::EventSampler(const SimConfig& config) : config_(config) {
  for (int d = 0; d < config.tau; ++d) {
    const Date date = config.startDate + d;
    datesByDay_[index_of(weekday_of(date))].push_back(date);
  }
  dayOfLabel_.reserve(config.pmfDay.size());
  for (std::size_t i = 0; i < config.pmfDay.size(); ++i) {
    const auto day = parse_day_bin(config.pmfDay.label(i));
    if (!day) throw InputError("'" + config.pmfDay.label(i) + "' is not a day bin");
    if (config.pmfDay.prob(i) > 0.0 && datesByDay_[index_of(*day)].empty()) {
      throw ModelError("window too short for day pmf: no " + std::string(name(*day)) + " in a " +
                       std::to_string(config.tau) + "-day window");
    }
    dayOfLabel_.push_back(*day);
  }
}

Event EventSampler::draw(std::uint64_t index, const RandomSource& base) const {
  RandomSource rng = base.split(index);
  Event e;
  e.eventNo = index + 1;
  e.day = dayOfLabel_[config_.pmfDay.sample_index(rng)];
  const auto& dates = datesByDay_[index_of(e.day)];
  e.date = dates[rng.uniform_index(dates.size())];
  e.time = *parse_temporal_bin(config_.pmfTime.sample(rng));
  e.incidentType = config_.pmfEvType.sample(rng);
  e.loc = config_.loc;
  return e;
}

std::uint64_t cell_event_count(double lambda, const RandomSource& base, std::uint64_t cell) {
  RandomSource rng = base.split(cell);
  return rng.poisson(lambda);
}

std::size_t false_type_index(std::size_t actual, std::size_t typeCount, double prLie,
                             RandomSource& rng) {
  const double u = rng.uniform01();
  if (!(u < prLie)) return actual;
  // Uniform over the typeCount - 1 labels other than `actual`.
  const auto pick = static_cast<std::size_t>(rng.uniform_index(typeCount - 1));
  return pick < actual ? pick : pick + 1;
}

ReportSampler::ReportSampler(std::span<const Event> events, std::span<const EventType> evTypes,
                             double prLie, const RandomSource& base)
    : typeCount_(evTypes.size()), prLie_(prLie), stream_(base.split(kEventChoiceStream)) {
  eventType_.reserve(events.size());
  for (const auto& e : events) {
    const auto it = std::find(evTypes.begin(), evTypes.end(), e.incidentType);
    if (it == evTypes.end()) {
      throw ModelError("event type '" + e.incidentType + "' is not in the configured list");
    }
    eventType_.push_back(static_cast<std::uint32_t>(it - evTypes.begin()));
  }
}

ReportDraw ReportSampler::draw(std::uint64_t reportIndex) const {
  RandomSource rng = stream_.split(reportIndex);
  ReportDraw d;
  d.event = static_cast<std::uint32_t>(rng.uniform_index(eventType_.size()));
  d.reportedType =
      static_cast<std::uint32_t>(false_type_index(eventType_[d.event], typeCount_, prLie_, rng));
  return d;
}

std::vector<std::uint32_t> assign_participants(ParticipantPool& pool, const RandomSource& base) {
  RandomSource rng = base.split(kParticipantStream);
  std::vector<std::uint32_t> active;
  active.reserve(pool.quotas.size());
  for (std::size_t i = 0; i < pool.quotas.size(); ++i) {
    if (pool.quotas[i] > 0) active.push_back(static_cast<std::uint32_t>(i));
  }
  std::vector<std::uint32_t> out;
  out.reserve(pool.total());
  while (!active.empty()) {
    const auto slot = static_cast<std::size_t>(rng.uniform_index(active.size()));
    const std::uint32_t id = active[slot];
    out.push_back(id);
    if (--pool.quotas[id] == 0) {
      active[slot] = active.back();
      active.pop_back();
    }
  }
  return out;
}

std::vector<Report> build_reports(std::span<const Event> events, std::span<const ReportDraw> draws,
                                  std::span<const std::uint32_t> participants,
                                  const ParticipantPool& pool, std::span<const EventType> evTypes,
                                  bool parallel) {
  std::vector<Report> reports(draws.size());
  const auto count = static_cast<std::int64_t>(draws.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t r = 0; r < count; ++r) {
    const auto& d = draws[static_cast<std::size_t>(r)];
    const Event& e = events[d.event];
    Report& out = reports[static_cast<std::size_t>(r)];
    out.eventNo = e.eventNo;
    out.date = e.date;
    out.day = e.day;
    out.time = e.time;
    out.reportNo = static_cast<std::uint64_t>(r) + 1;
    out.sourceId = pool.ids[participants[static_cast<std::size_t>(r)]];
    out.eventReported = evTypes[d.reportedType];
    out.eventOccurred = e.incidentType;
  }
  return reports;
}

void check_report_inputs(std::span<const Event> events, const ParticipantPool& pool, double prLie,
                         std::span<const EventType> evTypes) {
  if (events.empty()) throw ModelError("no events to attribute reports to");
  if (pool.total() == 0) throw ModelError("empty participant pool: every quota is zero");
  if (pool.ids.size() != pool.quotas.size()) throw InputError("participant ids and quotas differ");
  if (!(prLie >= 0.0 && prLie <= 1.0)) throw InputError("prLie must lie in [0, 1]");
  if (prLie > 0.0 && evTypes.size() < 2) {
    throw InputError("false reports need at least two event types");
  }
  if (events.size() > std::numeric_limits<std::uint32_t>::max() ||
      pool.quotas.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ModelError("too many events or participants");
  }
}

}  // namespace pssim::detail
