#include "synthcat/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "synthcat/errors.hpp"

namespace synthcat {

double sample_normal(RngStream& rng) {
  for (;;) {
    double u = 2.0 * rng.next_double() - 1.0;
    double v = 2.0 * rng.next_double() - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

double sample_normal(RngStream& rng, double mean, double sd) {
  return mean + sd * sample_normal(rng);
}

double sample_gamma(RngStream& rng, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw NumericError("sample_gamma: shape and rate must be positive");
  }
  if (shape < 1.0) {
    double u = rng.next_double();
    while (u <= 0.0) u = rng.next_double();
    return sample_gamma(rng, shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = sample_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = rng.next_double();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v / rate;
    }
  }
}

double sample_beta(RngStream& rng, double a, double b) {
  double x = sample_gamma(rng, a, 1.0);
  double y = sample_gamma(rng, b, 1.0);
  double s = x + y;
  if (s <= 0.0) return 0.5;
  return x / s;
}

std::vector<double> sample_dirichlet(RngStream& rng,
                                     std::span<const double> alpha) {
  if (alpha.empty()) throw NumericError("sample_dirichlet: empty alpha");
  std::vector<double> out(alpha.size());
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0)) {
      throw NumericError("sample_dirichlet: nonpositive alpha at component " +
                         std::to_string(i));
    }
    out[i] = sample_gamma(rng, alpha[i], 1.0);
    total += out[i];
  }
  if (total <= 0.0) {
    // all gammas underflowed; fall back to the largest-alpha vertex
    std::size_t k = 0;
    for (std::size_t i = 1; i < alpha.size(); ++i) {
      if (alpha[i] > alpha[k]) k = i;
    }
    std::fill(out.begin(), out.end(), 0.0);
    out[k] = 1.0;
    return out;
  }
  for (double& v : out) v /= total;
  double check = 0.0;
  for (double v : out) check += v;
  if (std::abs(check - 1.0) > 1e-12) {
    for (double& v : out) v /= check;
  }
  return out;
}

int sample_categorical(RngStream& rng, std::span<const double> weights) {
  if (weights.empty()) throw NumericError("sample_categorical: empty weights");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || std::isnan(w)) {
      throw NumericError("sample_categorical: negative or NaN weight");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw NumericError("sample_categorical: weights sum to zero");
  }
  double u = rng.next_double() * total;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
    acc += weights[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(weights.size()) - 1;
}

int sample_categorical_log(RngStream& rng,
                           std::span<const double> log_weights) {
  if (log_weights.empty()) {
    throw NumericError("sample_categorical_log: empty weights");
  }
  double mx = log_weights[0];
  for (double w : log_weights) mx = std::max(mx, w);
  if (std::isnan(mx) || mx == -std::numeric_limits<double>::infinity()) {
    throw NumericError("sample_categorical_log: degenerate log weights");
  }
  std::vector<double> w(log_weights.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = std::exp(log_weights[k] - mx);
  }
  return sample_categorical(rng, w);
}

long sample_poisson(RngStream& rng, double lambda) {
  if (!(lambda >= 0.0)) throw NumericError("sample_poisson: negative rate");
  if (lambda == 0.0) return 0;
  if (lambda < 30.0) {
    double limit = std::exp(-lambda);
    long k = 0;
    double p = rng.next_double();
    while (p > limit) {
      ++k;
      p *= rng.next_double();
    }
    return k;
  }
  // PTRS transformed rejection (Hormann)
  double b = 0.931 + 2.53 * std::sqrt(lambda);
  double a = -0.059 + 0.02483 * b;
  double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = rng.next_double() - 0.5;
    double v = rng.next_double();
    double us = 0.5 - std::abs(u);
    long k = static_cast<long>(std::floor((2.0 * a / us + b) * u + lambda + 0.43));
    if (us >= 0.07 && v <= v_r) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * std::log(lambda) - lambda - std::lgamma(k + 1.0)) {
      return k;
    }
  }
}

double sample_student_t(RngStream& rng, double nu) {
  if (!(nu > 0.0)) throw NumericError("sample_student_t: nonpositive df");
  double z = sample_normal(rng);
  double g = sample_gamma(rng, nu / 2.0, 0.5);  // chi-square(nu)
  return z / std::sqrt(g / nu);
}

std::vector<double> stick_breaking(std::span<const double> betas) {
  if (betas.empty()) throw NumericError("stick_breaking: empty input");
  for (double b : betas) {
    if (!(b >= 0.0 && b <= 1.0)) {
      throw NumericError("stick_breaking: entry outside [0,1]");
    }
  }
  if (betas.back() != 1.0) {
    throw NumericError("stick_breaking: last entry must equal 1");
  }
  std::vector<double> pi(betas.size());
  double remaining = 1.0;
  for (std::size_t k = 0; k < betas.size(); ++k) {
    pi[k] = betas[k] * remaining;
    remaining *= (1.0 - betas[k]);
  }
  return pi;
}

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  double mx = x[0];
  for (double v : x) mx = std::max(mx, v);
  if (mx == -std::numeric_limits<double>::infinity()) return mx;
  double s = 0.0;
  for (double v : x) s += std::exp(v - mx);
  return mx + std::log(s);
}

}  // namespace synthcat
