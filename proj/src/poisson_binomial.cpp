#include "valproj/poisson_binomial.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "valproj/error.hpp"

namespace valproj {

namespace {

void check_probabilities(std::span<const double> q) {
    for (std::size_t i = 0; i < q.size(); ++i)
        if (!(q[i] >= 0.0 && q[i] <= 1.0))
            throw DataError(fmt::format("probability {} at position {} is outside [0, 1]", q[i], i));
}

std::size_t possible_successes(std::span<const double> q) {
    std::size_t n = 0;
    for (double v : q) n += v > 0.0;
    return n;
}

// log(exp(a) + exp(b))
double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

double log_sf_impl(std::span<const double> q, std::size_t n_obs) {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<double> s(n_obs + 1, kNegInf);
    s[0] = 0.0;
    for (double p : q) {
        const double lp = p > 0.0 ? std::log(p) : kNegInf;
        const double lq = p < 1.0 ? std::log1p(-p) : kNegInf;
        s[n_obs] = log_add(s[n_obs], s[n_obs - 1] + lp);
        for (std::size_t k = n_obs - 1; k > 0; --k) s[k] = log_add(s[k] + lq, s[k - 1] + lp);
        s[0] += lq;
    }
    return s[n_obs];
}

}  // namespace

std::vector<double> poisson_binomial_pmf(std::span<const double> q) {
    check_probabilities(q);
    std::vector<double> pmf(q.size() + 1, 0.0);
    pmf[0] = 1.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double p = q[i];
        for (std::size_t k = i + 1; k > 0; --k) pmf[k] = pmf[k] * (1.0 - p) + pmf[k - 1] * p;
        pmf[0] *= 1.0 - p;
    }
    return pmf;
}

double poisson_binomial_sf(std::span<const double> q, std::size_t n_obs) {
    check_probabilities(q);
    if (n_obs == 0) return 1.0;
    if (n_obs > q.size()) return 0.0;

    // s[k] = P(k successes so far) for k < n_obs; s[n_obs] = P(at least n_obs).
    std::vector<double> s(n_obs + 1, 0.0);
    s[0] = 1.0;
    double tail_comp = 0.0;  // Neumaier compensation for the absorbing state
    for (double p : q) {
        const double add = s[n_obs - 1] * p;
        const double t = s[n_obs] + add;
        if (std::abs(s[n_obs]) >= std::abs(add))
            tail_comp += (s[n_obs] - t) + add;
        else
            tail_comp += (add - t) + s[n_obs];
        s[n_obs] = t;
        for (std::size_t k = n_obs - 1; k > 0; --k) s[k] = s[k] * (1.0 - p) + s[k - 1] * p;
        s[0] *= 1.0 - p;
    }
    // The states below n_obs hold the PMF prefix, identical for every n_obs.
    // Taking 1 - CDF while the CDF is small keeps the result monotone in n_obs.
    // Plain summation: adding non-negative terms in a fixed order never decreases.
    double cdf = 0.0;
    for (std::size_t k = 0; k < n_obs; ++k) cdf += s[k];
    if (cdf <= 0.5) return 1.0 - cdf;
    const double sf = s[n_obs] + tail_comp;
    if (sf < std::numeric_limits<double>::min() && possible_successes(q) >= n_obs)
        return std::exp(log_sf_impl(q, n_obs));
    return std::min(sf, 1.0);
}

double poisson_binomial_log_sf(std::span<const double> q, std::size_t n_obs) {
    check_probabilities(q);
    if (n_obs == 0) return 0.0;
    if (n_obs > q.size() || possible_successes(q) < n_obs) return -std::numeric_limits<double>::infinity();
    return log_sf_impl(q, n_obs);
}

double binomial_sf(std::size_t n, double p, std::size_t k) {
    if (!(p >= 0.0 && p <= 1.0)) throw DataError(fmt::format("binomial probability {} outside [0, 1]", p));
    if (k == 0) return 1.0;
    if (k > n) return 0.0;
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;

    const double dn = static_cast<double>(n);
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    auto log_pmf = [&](std::size_t j) {
        const double dj = static_cast<double>(j);
        return std::lgamma(dn + 1.0) - std::lgamma(dj + 1.0) - std::lgamma(dn - dj + 1.0) + dj * log_p +
               (dn - dj) * log_q;
    };
    const double odds = p / (1.0 - p);
    const double mode = std::floor((dn + 1.0) * p);

    // Sum the tail away from the mode so terms decrease; relative to the first term.
    auto sum_terms = [&](std::size_t start, bool upward) {
        double sum = 1.0, comp = 0.0, term = 1.0;
        std::size_t j = start;
        for (;;) {
            if (upward) {
                if (j == n) break;
                term *= static_cast<double>(n - j) / static_cast<double>(j + 1) * odds;
                ++j;
            } else {
                if (j == 0) break;
                term *= static_cast<double>(j) / (static_cast<double>(n - j + 1) * odds);
                --j;
            }
            const double y = term - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            if (term < sum * 1e-18) break;
        }
        return sum;
    };

    if (static_cast<double>(k) > mode) return std::min(1.0, std::exp(log_pmf(k)) * sum_terms(k, true));
    const double cdf = std::exp(log_pmf(k - 1)) * sum_terms(k - 1, false);
    return std::clamp(1.0 - cdf, 0.0, 1.0);
}

}  // namespace valproj
