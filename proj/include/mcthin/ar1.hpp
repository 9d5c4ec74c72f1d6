// Closed-form thinning efficiency for AR(1) autocorrelation, plus the
// analytic thresholds that decide when thinning pays off.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mcthin
{
  // rho^k via exp(k*log|rho|) with explicit sign handling. Underflow rounds
  // to 0, which is the correct limit of every formula below, so no error is
  // raised. k == 1 returns rho itself so that eff(1) stays an exact ratio of
  // identical factors.
  inline double rho_pow(double rho, long long k)
  {
    if (k == 1 || rho == 0.0)
      return k == 1 ? rho : 0.0;
    const double mag = std::exp(double(k) * std::log(std::abs(rho)));
    return (rho < 0.0 && (k & 1)) ? -mag : mag;
  }

  // Cost ratio theta (function evaluations per chain transition) and AR(1)
  // lag-1 autocorrelation rho.
  struct ThinningProblem
  {
    double theta;
    double rho;

    ThinningProblem(double theta, double rho) : theta(theta), rho(rho)
    {
      if (!(theta >= 0.0))
        throw std::invalid_argument("theta must be nonnegative");
      if (!(rho > -1.0 && rho < 1.0))
        throw std::invalid_argument("rho must be in (-1, 1)");
    }
  };

  // Same model when the chain is Metropolis-like: alpha is the proposal
  // acceptance rate and theta is the cost of f per accepted proposal.
  struct AcceptanceAdjustedProblem
  {
    double theta;
    double rho;
    double alpha;

    AcceptanceAdjustedProblem(double theta, double rho, double alpha)
      : theta(theta), rho(rho), alpha(alpha)
    {
      if (!(theta >= 0.0))
        throw std::invalid_argument("theta must be nonnegative");
      if (!(rho > -1.0 && rho < 1.0))
        throw std::invalid_argument("rho must be in (-1, 1)");
      if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must be in [0, 1]");
    }
  };

  // Asymptotic efficiency of keeping every k-th observation versus keeping
  // all of them, at equal compute budget. Values above 1 mean thinning wins.
  inline double eff(long long k, const ThinningProblem& p)
  {
    if (k < 1)
      throw std::invalid_argument("k must be >= 1");
    const double rk = rho_pow(p.rho, k);
    return (1.0 + p.theta) / (double(k) + p.theta)
         * (1.0 + p.rho) / (1.0 - p.rho)
         * (1.0 - rk) / (1.0 + rk);
  }

  // log(eff(k)) up to a k-independent constant; the form the optimizer
  // maximizes. Stays finite when rho^k underflows to zero: the result is
  // then -log(k+theta), the exact mathematical limit. Intended for rho in
  // [0, 1); negative rho callers should use eff directly.
  inline double leff_prime(long long k, const ThinningProblem& p)
  {
    if (k < 1)
      throw std::invalid_argument("k must be >= 1");
    const double rk = rho_pow(p.rho, k);
    return -std::log(double(k) + p.theta) + std::log1p(-rk) - std::log1p(rk);
  }

  // Limit of eff(k) as rho -> 1: k(1+theta)/(k+theta), increasing in k with
  // supremum 1+theta.
  inline double eff_limit_rho1(long long k, double theta)
  {
    if (k < 1)
      throw std::invalid_argument("k must be >= 1");
    if (!(theta >= 0.0))
      throw std::invalid_argument("theta must be nonnegative");
    return double(k) * (1.0 + theta) / (double(k) + theta);
  }

  // Cost threshold theta*(k, rho): thinning by factor k beats k=1 exactly
  // when theta exceeds it. Uses expm1 for 1-rho^(k-1) so the denominator
  // does not cancel as rho -> 1.
  inline double critical_theta(long long k, double rho)
  {
    if (k < 2)
      throw std::invalid_argument("critical_theta requires k >= 2");
    if (!(rho > 0.0 && rho < 1.0))
      throw std::invalid_argument("critical_theta requires rho in (0, 1)");
    const double rk = rho_pow(rho, k);
    const double rho_minus_rk = rho * -std::expm1(double(k - 1) * std::log(rho));
    return 0.5 * double(k - 1) * (1.0 - rho) * (1.0 + rk) / rho_minus_rk - 1.0;
  }

  // True when k=1 maximizes eff over all k >= 1: always for rho <= 0, and
  // otherwise when theta <= (1-rho)^2 / (2 rho) (non-strict at the boundary).
  inline bool no_thinning_is_optimal(const ThinningProblem& p)
  {
    if (p.rho <= 0.0)
      return true;
    return p.theta <= (1.0 - p.rho) * (1.0 - p.rho) / (2.0 * p.rho);
  }

  // Efficiency when f is only recomputed after an accepted proposal, so the
  // per-retained-sample cost becomes theta*(1-alpha^k).
  inline double acceptance_adjusted_eff(long long k, const AcceptanceAdjustedProblem& q)
  {
    if (k < 1)
      throw std::invalid_argument("k must be >= 1");
    const double rk = rho_pow(q.rho, k);
    const double ak = rho_pow(q.alpha, k);
    return (1.0 + q.theta * (1.0 - q.alpha)) / (double(k) + q.theta * (1.0 - ak))
         * (1.0 + q.rho) / (1.0 - q.rho)
         * (1.0 - rk) / (1.0 + rk);
  }
}
