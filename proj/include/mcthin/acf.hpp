// Thinning efficiency under an arbitrary autocorrelation sequence: the sums
// R, R_k, R_{-k}, the efficiency ratio efford, the inefficiency criterion and
// cost bound for monotone sequences, and estimation of the sequence from a
// sampled trace.

#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "mcthin/ar1.hpp"

namespace mcthin
{
  // How lags beyond the stored values contribute to the sums: drop them, or
  // continue them geometrically with ratio rho_L / rho_{L-1}. The geometric
  // option falls back to truncation unless that ratio lies in (0, 1); a
  // ratio >= 1 is rejected outright as a divergent tail.
  enum class TailPolicy
  {
    truncate,
    geometric_extrapolate,
  };

  // Lag autocorrelations rho_1..rho_L of the stationary output series.
  struct AcfSequence
  {
    Eigen::ArrayXd values;
    TailPolicy tail_policy = TailPolicy::truncate;

    explicit AcfSequence(Eigen::ArrayXd values,
                         TailPolicy tail_policy = TailPolicy::truncate);
  };

  // R = sum of all rho_l, R_k = sum over lags that are multiples of k, and
  // the remainder; R always equals R_k + R_minus_k by construction.
  struct AcfSums
  {
    double R;
    double R_k;
    double R_minus_k;
    long long k;
  };

  // Total compute allowance in chain-transition units.
  struct Budget
  {
    double B;

    explicit Budget(double B) : B(B)
    {
      if (!(B > 0.0))
        throw std::invalid_argument("budget must be positive");
    }
  };

  AcfSums acf_sums(const AcfSequence& acf, long long k);

  // Asymptotic efficiency of thinning by k versus not thinning:
  // ((1+theta)/(k+theta)) * (1+2R)/(1+2R_k).
  double efford(long long k, const AcfSequence& acf, double theta);

  // Finite-budget variant with the sample counts floor(B/(k+theta)) and
  // floor(B/(1+theta)) in place of the cost ratio.
  double efford_finite_budget(long long k, const AcfSequence& acf, double theta,
                              Budget b);

  // True exactly when efford(k) < 1, decided through the equivalent
  // inequality R_{-k} < ((k-1)/(theta+1)) (R_k + 1/2).
  bool thinning_hurts(long long k, const AcfSequence& acf, double theta);

  // For nonincreasing nonnegative sequences: efford(k) < 1 is impossible
  // once theta >= 1/(2 R_k). Returns +infinity when R_k = 0 (no constraint).
  double monotone_theta_bound(const AcfSequence& acf, long long k);

  // Sample autocorrelations of a (post-warmup) trace, cut where the initial
  // positive sequence ends: at the first lag l with rho_l + rho_{l+1} <= 0
  // the estimate keeps lags 1..l-1 (never fewer than one lag).
  AcfSequence estimate_acf(const Eigen::ArrayXd& series, long long max_lag);

  // Lag-1 readoff, clamped away from +-1; the AR(1) bridge from data to the
  // closed-form module.
  double fit_ar1_rho(const AcfSequence& acf);
}
