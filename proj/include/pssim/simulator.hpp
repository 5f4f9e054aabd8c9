#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pssim/core_types.hpp"
#include "pssim/random.hpp"
#include "pssim/sim_config.hpp"

namespace pssim {

/// Remaining report quota per participant, with its source id.
struct ParticipantPool {
  std::vector<std::uint64_t> quotas;
  std::vector<std::string> ids;

  /// Ids are participant_id(1..n).
  static ParticipantPool from_quotas(std::vector<std::uint64_t> quotas);
  std::uint64_t total() const;
};

struct Trace {
  std::vector<Event> events;
  std::vector<Report> reports;  // reportNo runs 1..reports.size()
  SimConfig config;

  std::uint64_t seed() const { return config.seed; }
  std::uint64_t false_reports() const;
};

/// Named sub-streams of the master seed, one per pipeline stage.
enum class SimStream : std::uint64_t {
  Quotas = 1,
  EventCount = 2,
  EventAttributes = 3,
  Reports = 4,
};

/// Sum over every (date, temporal bin) cell of the window of independent
/// Poisson(lambdaE) draws. Throws ModelError when the total is zero.
std::uint64_t gen_poisson_events(const SimConfig& config, const RandomSource& rng);

/// Draws day, time and type for events 1..count. The date is uniform among
/// window dates whose weekday equals the sampled day. Throws ModelError when
/// the day pmf gives mass to a weekday missing from the window.
std::vector<Event> assign_event_attributes(std::uint64_t count, const SimConfig& config,
                                           const RandomSource& rng);

/// With probability prLie returns a type drawn uniformly from evTypes minus
/// `actual`; otherwise `actual`. Always consumes exactly one uniform, plus one
/// index draw when lying.
EventType inject_false_report(const EventType& actual, std::span<const EventType> evTypes,
                              double prLie, RandomSource& rng);

/// Emits one report per unit of quota. Each report picks an event uniformly,
/// then a participant uniformly among those with quota left (decrementing it).
/// On return every quota in `pool` is zero.
std::vector<Report> attribute_reports(std::span<const Event> events, ParticipantPool& pool,
                                      double prLie, std::span<const EventType> evTypes,
                                      const RandomSource& rng);

/// Full pipeline: rescale, quotas, event count, event attributes, reports.
Trace simulate(const SimConfig& config);

}  // namespace pssim
