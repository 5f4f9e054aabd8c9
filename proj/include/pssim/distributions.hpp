#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pssim/core_types.hpp"
#include "pssim/random.hpp"

namespace pssim {

/// Log-normal location/scale pair, both in log space. scale > 0.
struct LogNormalParams {
  double location = 0.0;
  double scale = 1.0;

  bool operator==(const LogNormalParams&) const = default;
};

/// Throws InputError("support violation") for x <= 0.
double lognormal_pdf(double x, const LogNormalParams& params);
double lognormal_cdf(double x, const LogNormalParams& params);
/// Quantile for 0 < p < 1.
double lognormal_quantile(double p, const LogNormalParams& params);

/// Inverse of the standard normal CDF for 0 < p < 1.
double standard_normal_quantile(double p);

double lognormal_sample(const LogNormalParams& params, RandomSource& rng);

/// Per-participant report quotas: n continuous log-normal draws, each
/// rounded to the nearest nonnegative integer.
std::vector<std::uint64_t> lognormal_sample_counts(std::size_t n, const LogNormalParams& params,
                                                   RandomSource& rng);

/// Log-moment estimator: mean and sample standard deviation (n - 1) of
/// ln(samples). Needs >= 2 positive samples with nonzero spread.
LogNormalParams fit_lognormal(std::span<const double> samples);

/// Rescales weekly participation parameters to a tau-day horizon:
/// location + ln(tau / 7), scale unchanged. The expected quota is therefore
/// linear in tau.
LogNormalParams rescale(double mlog, double sdlog, int tau_days);

/// e^-lambda * lambda^k / k!, evaluated in log space. Throws on k < 0 or lambda <= 0.
double poisson_pmf(long long k, double lambda);

std::uint64_t poisson_sample(double lambda, RandomSource& rng);

}  // namespace pssim
