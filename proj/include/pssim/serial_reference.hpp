#pragma once

// Single-threaded reference versions of the parallel kernels. They run the
// same per-item bodies in plain loops and exist so tests and the benchmark
// can check the OpenMP paths against them.

#include <cstdint>
#include <span>
#include <vector>

#include "pssim/simulator.hpp"

namespace pssim::serial {

std::uint64_t gen_poisson_events(const SimConfig& config, const RandomSource& rng);

std::vector<Event> assign_event_attributes(std::uint64_t count, const SimConfig& config,
                                           const RandomSource& rng);

std::vector<Report> attribute_reports(std::span<const Event> events, ParticipantPool& pool,
                                      double prLie, std::span<const EventType> evTypes,
                                      const RandomSource& rng);

Trace simulate(const SimConfig& config);

}  // namespace pssim::serial
