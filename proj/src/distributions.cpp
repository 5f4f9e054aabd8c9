#include "pssim/distributions.hpp"

#include <cmath>
#include <numbers>

#include "pssim/core_types.hpp"

namespace pssim {
namespace {

void check_params(const LogNormalParams& p) {
  if (!(p.scale > 0.0) || !std::isfinite(p.location)) {
    throw InputError("log-normal scale must be positive");
  }
}

}  // namespace

double lognormal_pdf(double x, const LogNormalParams& params) {
  check_params(params);
  if (!(x > 0.0)) throw InputError("support violation: log-normal density needs x > 0");
  const double z = (std::log(x) - params.location) / params.scale;
  return std::exp(-0.5 * z * z) / (x * params.scale * std::sqrt(2.0 * std::numbers::pi));
}

double lognormal_cdf(double x, const LogNormalParams& params) {
  check_params(params);
  if (x <= 0.0) return 0.0;
  const double z = (std::log(x) - params.location) / params.scale;
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("normal quantile needs 0 < p < 1");
  // Acklam's rational approximation, then one Halley step against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double lognormal_quantile(double p, const LogNormalParams& params) {
  check_params(params);
  return std::exp(params.location + params.scale * standard_normal_quantile(p));
}

double lognormal_sample(const LogNormalParams& params, RandomSource& rng) {
  return std::exp(params.location + params.scale * rng.normal());
}

std::vector<std::uint64_t> lognormal_sample_counts(std::size_t n, const LogNormalParams& params,
                                                   RandomSource& rng) {
  check_params(params);
  if (n == 0) throw InputError("participant count must be positive");
  std::vector<std::uint64_t> quotas(n);
  for (auto& q : quotas) {
    q = static_cast<std::uint64_t>(std::llround(lognormal_sample(params, rng)));
  }
  return quotas;
}

LogNormalParams fit_lognormal(std::span<const double> samples) {
  if (samples.size() < 2) throw InputError("log-normal fit needs at least 2 samples");
  double sum = 0.0;
  for (double s : samples) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InputError("log-normal fit needs positive samples");
    sum += std::log(s);
  }
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double s : samples) {
    const double dev = std::log(s) - mean;
    ss += dev * dev;
  }
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) throw InputError("zero variance: log-normal fit needs spread samples");
  return {mean, sd};
}

LogNormalParams rescale(double mlog, double sdlog, int tau_days) {
  if (tau_days < 1) throw InputError("duration must be at least one day");
  if (!(sdlog > 0.0)) throw InputError("sdlog must be positive");
  if (tau_days == 7) return {mlog, sdlog};
  return {mlog + std::log(static_cast<double>(tau_days) / 7.0), sdlog};
}

double poisson_pmf(long long k, double lambda) {
  if (k < 0) throw InputError("Poisson pmf needs k >= 0");
  if (!(lambda > 0.0)) throw InputError("Poisson rate must be positive");
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0));
}

std::uint64_t poisson_sample(double lambda, RandomSource& rng) {
  if (!(lambda > 0.0)) throw InputError("Poisson rate must be positive");
  return rng.poisson(lambda);
}

}  // namespace pssim
