#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace valproj {

/// Full PMF of the number of successes among independent Bernoulli trials
/// with success probabilities `q`. O(N^2).
std::vector<double> poisson_binomial_pmf(std::span<const double> q);

/// P(X >= n_obs) for X ~ Poisson-Binomial(q). Exact convolution restricted to
/// states 0..n_obs with n_obs absorbing, so the tail mass is accumulated from
/// positive terms only; O(N * n_obs). Falls back to log space when the linear
/// recursion underflows. Throws DataError for q outside [0, 1].
double poisson_binomial_sf(std::span<const double> q, std::size_t n_obs);

/// Natural log of P(X >= n_obs); -inf when the event is impossible.
double poisson_binomial_log_sf(std::span<const double> q, std::size_t n_obs);

/// P(X >= k) for X ~ Binomial(n, p).
double binomial_sf(std::size_t n, double p, std::size_t k);

}  // namespace valproj
