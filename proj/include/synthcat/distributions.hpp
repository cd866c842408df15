#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "synthcat/rng.hpp"

namespace synthcat {

// Standard normal via the polar method.
double sample_normal(RngStream& rng);

double sample_normal(RngStream& rng, double mean, double sd);

// Gamma(shape, rate), mean shape/rate. Marsaglia-Tsang squeeze; shapes below
// one use the boosting identity G(a) = G(a+1) * U^{1/a}.
double sample_gamma(RngStream& rng, double shape, double rate);

double sample_beta(RngStream& rng, double a, double b);

// Dirichlet draw, renormalized so the components sum to 1 within 1e-12.
std::vector<double> sample_dirichlet(RngStream& rng,
                                     std::span<const double> alpha);

// Index k with probability weights[k] / sum(weights); weights need not be
// normalized. Rejects all-zero or negative input.
int sample_categorical(RngStream& rng, std::span<const double> weights);

// Same draw from unnormalized log weights (max-shifted internally).
int sample_categorical_log(RngStream& rng, std::span<const double> log_weights);

long sample_poisson(RngStream& rng, double lambda);

// Student t with nu degrees of freedom.
double sample_student_t(RngStream& rng, double nu);

// pi_k = beta_k * prod_{l<k} (1 - beta_l); requires betas.back() == 1.
std::vector<double> stick_breaking(std::span<const double> betas);

double log_sum_exp(std::span<const double> x);

}  // namespace synthcat
