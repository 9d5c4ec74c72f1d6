#include "mcthin/band.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mcthin/optimize.hpp"

namespace mcthin
{
  namespace
  {
    // The autocorrelation factor (1+rho^j)/(1-rho^j) of the asymptotic
    // variance at stride j.
    double acov_factor(double rho, long long j)
    {
      const double rj = rho_pow(rho, j);
      return (1.0 + rj) / (1.0 - rj);
    }

    // Scan {k <= k_cap : keep(k)} and return it as an interval, falling back
    // to the hull with a warning if it ever came out non-contiguous.
    template <typename Pred>
    IntInterval scan_interval(long long k_cap, Pred keep)
    {
      IntInterval out;
      long long count = 0;
      for (long long k = 1; k <= k_cap; ++k)
      {
        if (!keep(k))
          continue;
        if (count == 0)
          out.lo = k;
        out.hi = k;
        ++count;
      }
      if (count > 0 && count != out.hi - out.lo + 1)
        out.hull_warning = true;
      return out;
    }
  }

  EffBounds eff_bounds(long long r, long long s, const RhoBand& band, double theta)
  {
    if (r < 1 || s < 1)
      throw std::invalid_argument("thinning factors must be >= 1");
    if (r == s)
      throw std::invalid_argument("eff_bounds requires r != s");
    if (!(theta >= 0.0))
      throw std::invalid_argument("theta must be nonnegative");

    const double ratio = (double(s) + theta) / (double(r) + theta);
    return EffBounds{
        ratio * acov_factor(band.rho_lo, s) / acov_factor(band.rho_hi, r),
        ratio * acov_factor(band.rho_hi, s) / acov_factor(band.rho_lo, r),
    };
  }

  IntInterval guaranteed_gain_interval(const RhoBand& band, double theta,
                                       double gain, long long k_cap)
  {
    if (!(gain >= 1.0))
      throw std::invalid_argument("gain must be >= 1");
    if (k_cap < 1)
      throw std::invalid_argument("k_cap must be >= 1");
    if (!(theta >= 0.0))
      throw std::invalid_argument("theta must be nonnegative");

    // U_{1k} < 1/gain, cleared of divisions:
    // gain * (k+theta) * A_hi(k) < (1+theta) * A_lo(1).
    const double budget = (1.0 + theta) * acov_factor(band.rho_lo, 1);
    return scan_interval(k_cap, [&](long long k) {
      return gain * (double(k) + theta) * acov_factor(band.rho_hi, k) < budget;
    });
  }

  IntInterval nondominated_set(const RhoBand& band, double theta, long long k_cap)
  {
    if (k_cap < 1)
      throw std::invalid_argument("k_cap must be >= 1");
    if (!(theta >= 0.0))
      throw std::invalid_argument("theta must be nonnegative");

    // The dominance test factorizes: U_rs < 1 for some s iff
    // (r+theta) A_lo(r) > min_s (s+theta) A_hi(s). The minimum over all
    // integers is attained at kopt(theta, rho_hi), so a cap at least
    // getkmax(theta, rho_hi) makes the scanned minimum the global one.
    const ThinningProblem upper(theta, band.rho_hi);
    if (k_cap < getkmax(upper))
      throw std::domain_error("k_cap below getkmax of the upper envelope");

    double min_hi = std::numeric_limits<double>::infinity();
    for (long long s = 1; s <= k_cap; ++s)
      min_hi = std::min(min_hi, (double(s) + theta) * acov_factor(band.rho_hi, s));

    // Including s = r in the minimum is harmless: U_rr >= 1 always since
    // A_lo(r) <= A_hi(r).
    IntInterval out = scan_interval(k_cap, [&](long long r) {
      return (double(r) + theta) * acov_factor(band.rho_lo, r) <= min_hi;
    });
    if (out.hi == k_cap)
      throw std::domain_error("k_cap too small: nondominated set reaches the cap");
    return out;
  }

  BandReport analyze_band(const RhoBand& band, double theta,
                          const std::vector<double>& gains, long long k_cap)
  {
    if (gains.empty())
      throw std::invalid_argument("at least one gain level required");
    const double gain_min = *std::min_element(gains.begin(), gains.end());
    if (!(gain_min >= 1.0))
      throw std::invalid_argument("gain must be >= 1");

    if (k_cap == 0)
    {
      // Past k_star no k can satisfy U_{1k} < 1/gain even with A_hi(k) = 1,
      // so ceil(k_star)+1 closes the gain scans; the candidate scan needs
      // the descending regime of the upper envelope, with slack.
      const double k_star = (1.0 + theta) * (1.0 + band.rho_lo)
                          / (gain_min * (1.0 - band.rho_lo)) - theta;
      const long long cap_gain = (long long)(std::ceil(std::max(k_star, 1.0))) + 1;
      const long long cap_opt = 4 * getkmax(ThinningProblem(theta, band.rho_hi));
      k_cap = std::min(std::max(cap_gain, cap_opt), k_limit_default);
    }

    BandReport report{band, theta, k_cap, gains, {}, {}};
    report.gain_sets.reserve(gains.size());
    for (double gain : gains)
      report.gain_sets.push_back(guaranteed_gain_interval(band, theta, gain, k_cap));
    report.candidate_set = nondominated_set(band, theta, k_cap);
    return report;
  }
}
