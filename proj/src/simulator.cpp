#include "pssim/simulator.hpp"

#include <algorithm>
#include <numeric>

#include "pssim/distributions.hpp"
#include "pssim/serial_reference.hpp"
#include "sim_kernels.hpp"

namespace pssim {
namespace {

using detail::cell_count;

void check_event_total(std::uint64_t total) {
  if (total == 0) throw ModelError("no events generated; increase lambdaE or tau");
}

// Shared driver; the two kernel sets plug in through the three callables.
template <typename CountFn, typename AttrFn, typename ReportFn>
Trace run_pipeline(const SimConfig& config, CountFn count_events, AttrFn assign, ReportFn attribute) {
  config.validate();
  const RandomSource master(config.seed);
  const LogNormalParams params = rescale(config.mlog, config.sdlog, config.tau);
  RandomSource quotaRng = master.split(static_cast<std::uint64_t>(SimStream::Quotas));
  ParticipantPool pool =
      ParticipantPool::from_quotas(lognormal_sample_counts(config.n, params, quotaRng));
  if (pool.total() == 0) {
    throw ModelError("every participant quota rounded to zero; increase n, mlog or tau");
  }
  Trace trace;
  trace.config = config;
  const std::uint64_t count =
      count_events(config, master.split(static_cast<std::uint64_t>(SimStream::EventCount)));
  trace.events =
      assign(count, config, master.split(static_cast<std::uint64_t>(SimStream::EventAttributes)));
  trace.reports = attribute(trace.events, pool, config.prLie, config.evType,
                            master.split(static_cast<std::uint64_t>(SimStream::Reports)));
  return trace;
}

}  // namespace

ParticipantPool ParticipantPool::from_quotas(std::vector<std::uint64_t> quotas) {
  ParticipantPool pool;
  pool.ids.reserve(quotas.size());
  for (std::size_t i = 0; i < quotas.size(); ++i) pool.ids.push_back(participant_id(i + 1));
  pool.quotas = std::move(quotas);
  return pool;
}

std::uint64_t ParticipantPool::total() const {
  return std::accumulate(quotas.begin(), quotas.end(), std::uint64_t{0});
}

std::uint64_t Trace::false_reports() const {
  std::uint64_t n = 0;
  for (const auto& r : reports) n += r.eventReported != r.eventOccurred ? 1 : 0;
  return n;
}

std::uint64_t gen_poisson_events(const SimConfig& config, const RandomSource& rng) {
  if (!(config.lambdaE > 0.0)) throw InputError("lambdaE must be positive");
  const auto cells = static_cast<std::int64_t>(cell_count(config));
  std::uint64_t total = 0;
#pragma omp parallel for schedule(static) reduction(+ : total)
  for (std::int64_t c = 0; c < cells; ++c) {
    total += detail::cell_event_count(config.lambdaE, rng, static_cast<std::uint64_t>(c));
  }
  check_event_total(total);
  return total;
}

std::vector<Event> assign_event_attributes(std::uint64_t count, const SimConfig& config,
                                           const RandomSource& rng) {
  if (count == 0) throw InputError("event count must be positive");
  const detail::EventSampler sampler(config);
  std::vector<Event> events(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    events[static_cast<std::size_t>(i)] = sampler.draw(static_cast<std::uint64_t>(i), rng);
  }
  return events;
}

EventType inject_false_report(const EventType& actual, std::span<const EventType> evTypes,
                              double prLie, RandomSource& rng) {
  if (!(prLie >= 0.0 && prLie <= 1.0)) throw InputError("prLie must lie in [0, 1]");
  if (prLie > 0.0 && evTypes.size() < 2) {
    throw InputError("false reports need at least two event types");
  }
  const auto it = std::find(evTypes.begin(), evTypes.end(), actual);
  if (it == evTypes.end()) throw InputError("event type '" + actual + "' is not in the list");
  const auto idx = static_cast<std::size_t>(it - evTypes.begin());
  return evTypes[detail::false_type_index(idx, evTypes.size(), prLie, rng)];
}

std::vector<Report> attribute_reports(std::span<const Event> events, ParticipantPool& pool,
                                      double prLie, std::span<const EventType> evTypes,
                                      const RandomSource& rng) {
  detail::check_report_inputs(events, pool, prLie, evTypes);
  const detail::ReportSampler sampler(events, evTypes, prLie, rng);
  const std::uint64_t total = pool.total();
  std::vector<detail::ReportDraw> draws(total);
  const auto n = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) {
    draws[static_cast<std::size_t>(r)] = sampler.draw(static_cast<std::uint64_t>(r));
  }
  const auto participants = detail::assign_participants(pool, rng);
  return detail::build_reports(events, draws, participants, pool, evTypes, true);
}

Trace simulate(const SimConfig& config) {
  return run_pipeline(
      config, [](const SimConfig& c, const RandomSource& r) { return gen_poisson_events(c, r); },
      [](std::uint64_t k, const SimConfig& c, const RandomSource& r) {
        return assign_event_attributes(k, c, r);
      },
      [](std::span<const Event> e, ParticipantPool& p, double lie, std::span<const EventType> t,
         const RandomSource& r) { return attribute_reports(e, p, lie, t, r); });
}

namespace serial {

std::uint64_t gen_poisson_events(const SimConfig& config, const RandomSource& rng) {
  if (!(config.lambdaE > 0.0)) throw InputError("lambdaE must be positive");
  std::uint64_t total = 0;
  for (std::uint64_t c = 0; c < cell_count(config); ++c) {
    total += detail::cell_event_count(config.lambdaE, rng, c);
  }
  check_event_total(total);
  return total;
}

std::vector<Event> assign_event_attributes(std::uint64_t count, const SimConfig& config,
                                           const RandomSource& rng) {
  if (count == 0) throw InputError("event count must be positive");
  const detail::EventSampler sampler(config);
  std::vector<Event> events;
  events.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) events.push_back(sampler.draw(i, rng));
  return events;
}

std::vector<Report> attribute_reports(std::span<const Event> events, ParticipantPool& pool,
                                      double prLie, std::span<const EventType> evTypes,
                                      const RandomSource& rng) {
  detail::check_report_inputs(events, pool, prLie, evTypes);
  const detail::ReportSampler sampler(events, evTypes, prLie, rng);
  const std::uint64_t total = pool.total();
  std::vector<detail::ReportDraw> draws;
  draws.reserve(total);
  for (std::uint64_t r = 0; r < total; ++r) draws.push_back(sampler.draw(r));
  const auto participants = detail::assign_participants(pool, rng);
  return detail::build_reports(events, draws, participants, pool, evTypes, false);
}

Trace simulate(const SimConfig& config) {
  return run_pipeline(
      config,
      [](const SimConfig& c, const RandomSource& r) { return serial::gen_poisson_events(c, r); },
      [](std::uint64_t k, const SimConfig& c, const RandomSource& r) {
        return serial::assign_event_attributes(k, c, r);
      },
      [](std::span<const Event> e, ParticipantPool& p, double lie, std::span<const EventType> t,
         const RandomSource& r) { return serial::attribute_reports(e, p, lie, t, r); });
}

}  // namespace serial
}  // namespace pssim
