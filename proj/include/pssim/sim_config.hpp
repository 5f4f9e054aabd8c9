#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pssim/core_types.hpp"
#include "pssim/pmf.hpp"

namespace pssim {

/// Full parameter set for one simulation run.
struct SimConfig {
  int tau = 7;                       // days simulated
  Date startDate{2015, 2, 23};
  std::vector<EventType> evType;     // incident labels; support of pmfEvType
  double prLie = 0.0;                // probability a report names the wrong type
  std::size_t n = 1000;              // participants
  double lambdaE = 25.29;            // events per temporal bin
  double mlog = 1.0986122886681098;  // weekly log-location (ln 3)
  double sdlog = 0.5;                // weekly log-scale
  Pmf pmfTime;
  Pmf pmfDay;
  Pmf pmfEvType;
  std::uint64_t seed = 1;
  std::string loc = "Boylston Street";

  /// Throws InputError when an invariant does not hold.
  void validate() const;

  DateWindow window() const { return {startDate, startDate + (tau - 1)}; }
};

/// Weekday-heavy, weekend-light day profile.
Pmf default_day_pmf();
/// Bimodal time-of-day profile peaking at MD and N.
Pmf default_time_pmf();
Pmf default_evtype_pmf();

/// Defaults for every field, including the three pmfs and evType.
SimConfig default_config();

}  // namespace pssim
