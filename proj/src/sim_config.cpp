#include "pssim/sim_config.hpp"

#include <cmath>
#include <unordered_set>

namespace pssim {

void SimConfig::validate() const {
  if (tau < 1) throw InputError("tau must be at least 1 day");
  if (n < 1) throw InputError("participant count n must be positive");
  if (!(lambdaE > 0.0) || !std::isfinite(lambdaE)) throw InputError("lambdaE must be positive");
  if (!(sdlog > 0.0) || !std::isfinite(sdlog)) throw InputError("sdlog must be positive");
  if (!std::isfinite(mlog)) throw InputError("mlog must be finite");
  if (!(prLie >= 0.0 && prLie <= 1.0)) throw InputError("prLie must lie in [0, 1]");
  if (evType.empty()) throw InputError("evType list is empty");
  std::unordered_set<std::string> seen;
  for (const auto& t : evType) {
    if (!seen.insert(t).second) throw InputError("duplicate event type '" + t + "'");
  }
  if (pmfDay.empty() || pmfTime.empty() || pmfEvType.empty()) {
    throw InputError("day, time and event-type pmfs are required");
  }
  day_probs(pmfDay);
  time_probs(pmfTime);
  for (const auto& label : pmfEvType.labels()) {
    if (!seen.contains(label)) throw InputError("pmfEvType label '" + label + "' not in evType");
  }
  if (prLie > 0.0 && evType.size() < 2) {
    throw InputError("false reports need at least two event types");
  }
}

Pmf default_day_pmf() {
  return day_pmf_from_counts({0.080, 0.160, 0.155, 0.160, 0.165, 0.175, 0.105});
}

Pmf default_time_pmf() {
  return time_pmf_from_counts({0.050, 0.110, 0.120, 0.185, 0.125, 0.145, 0.085, 0.180});
}

Pmf default_evtype_pmf() {
  return Pmf::from_probs({"Jam", "Accident", "RoadClosure", "Hazard"}, {0.55, 0.20, 0.10, 0.15});
}

SimConfig default_config() {
  SimConfig c;
  c.pmfDay = default_day_pmf();
  c.pmfTime = default_time_pmf();
  c.pmfEvType = default_evtype_pmf();
  c.evType = c.pmfEvType.labels();
  c.prLie = 0.1;
  return c;
}

}  // namespace pssim
