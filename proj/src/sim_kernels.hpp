#pragma once

// Per-item bodies shared by the OpenMP kernels and the serial reference.
// Every item draws from its own split stream, so loop order and thread
// count cannot change the result.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pssim/simulator.hpp"

namespace pssim::detail {

inline constexpr std::uint64_t kEventChoiceStream = 1;
inline constexpr std::uint64_t kParticipantStream = 2;

class EventSampler {
 public:
  /// Throws ModelError when pmfDay puts mass on a weekday absent from the window.
  explicit EventSampler(const SimConfig& config);
  Event draw(std::uint64_t index, const RandomSource& base) const;

 private:
  const SimConfig& config_;
  std::vector<DayBin> dayOfLabel_;
  std::array<std::vector<Date>, kDayBinCount> datesByDay_;
};

std::uint64_t cell_event_count(double lambda, const RandomSource& base, std::uint64_t cell);

inline std::size_t cell_count(const SimConfig& config) {
  return static_cast<std::size_t>(config.tau) * kTemporalBinCount;
}

/// Index into the type list; equals `actual` unless a lie is drawn.
std::size_t false_type_index(std::size_t actual, std::size_t typeCount, double prLie,
                             RandomSource& rng);

struct ReportDraw {
  std::uint32_t event;
  std::uint32_t reportedType;
};

class ReportSampler {
 public:
  ReportSampler(std::span<const Event> events, std::span<const EventType> evTypes, double prLie,
                const RandomSource& base);
  ReportDraw draw(std::uint64_t reportIndex) const;
  std::size_t occurred_type(std::uint32_t event) const { return eventType_[event]; }

 private:
  std::vector<std::uint32_t> eventType_;
  std::size_t typeCount_;
  double prLie_;
  RandomSource stream_;
};

/// Sequential participant selection: uniform over participants with quota
/// left, decrementing as it goes. Returns one participant index per report.
std::vector<std::uint32_t> assign_participants(ParticipantPool& pool, const RandomSource& base);

std::vector<Report> build_reports(std::span<const Event> events, std::span<const ReportDraw> draws,
                                  std::span<const std::uint32_t> participants,
                                  const ParticipantPool& pool, std::span<const EventType> evTypes,
                                  bool parallel);

void check_report_inputs(std::span<const Event> events, const ParticipantPool& pool, double prLie,
                         std::span<const EventType> evTypes);

}  // namespace pssim::detail
