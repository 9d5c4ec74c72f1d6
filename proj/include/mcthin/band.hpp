// Robust efficiency bounds when the autocorrelations are only known to lie
// between two geometric envelopes: pairwise bounds on efford(r,s), intervals
// of certified gain, and elimination of dominated thinning factors.

#pragma once

#include <vector>

#include "mcthin/ar1.hpp"

namespace mcthin
{
  // Envelope rho_lo^l <= rho_l <= rho_hi^l.
  struct RhoBand
  {
    double rho_lo;
    double rho_hi;

    RhoBand(double rho_lo, double rho_hi) : rho_lo(rho_lo), rho_hi(rho_hi)
    {
      if (!(rho_lo >= 0.0 && rho_lo <= rho_hi && rho_hi < 1.0))
        throw std::invalid_argument("band must satisfy 0 <= rho_lo <= rho_hi < 1");
    }
  };

  struct EffBounds
  {
    double lower;
    double upper;
  };

  // Contiguous run of integers; empty when hi < lo. hull_warning marks the
  // (never yet observed) case where the certified set was not contiguous and
  // the enclosing hull is reported instead.
  struct IntInterval
  {
    long long lo = 0;
    long long hi = -1;
    bool hull_warning = false;

    bool empty() const { return hi < lo; }
    bool contains(long long k) const { return k >= lo && k <= hi; }
  };

  struct BandReport
  {
    RhoBand band;
    double theta;
    long long k_search_cap;
    std::vector<double> gains;
    std::vector<IntInterval> gain_sets;  // aligned with gains
    IntInterval candidate_set;
  };

  // Sandwich for efford(r, s) over every acf inside the band; the two bounds
  // coincide with the exact AR(1) ratio when the band is degenerate.
  EffBounds eff_bounds(long long r, long long s, const RhoBand& band, double theta);

  // All k <= k_cap certified at least gain-fold better than not thinning for
  // every acf in the band (upper bound of efford(1,k) below 1/gain).
  IntInterval guaranteed_gain_interval(const RhoBand& band, double theta,
                                       double gain, long long k_cap);

  // All r <= k_cap not dominated by any other factor: no s with U_rs < 1.
  // The optimal k for any acf in the band lies in this set. Rejects a cap
  // below getkmax(theta, rho_hi) or one the resulting set runs into.
  IntInterval nondominated_set(const RhoBand& band, double theta, long long k_cap);

  // Gain intervals plus the candidate set in one report. k_cap = 0 picks a
  // cap that provably covers both: past (1+theta)(1+rho_lo)/(1-rho_lo) - theta
  // no k can be certified better than k=1, and the candidate scan only needs
  // the descending regime of the upper envelope.
  BandReport analyze_band(const RhoBand& band, double theta,
                          const std::vector<double>& gains, long long k_cap = 0);
}
