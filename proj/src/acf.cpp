#include "mcthin/acf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mcthin
{
  AcfSequence::AcfSequence(Eigen::ArrayXd values_, TailPolicy tail_policy_)
    : values(std::move(values_)), tail_policy(tail_policy_)
  {
    if (values.size() < 1)
      throw std::invalid_argument("acf needs at least one lag");
    if (!(values.abs() < 1.0).all())
      throw std::invalid_argument("every autocorrelation must satisfy |rho_l| < 1");
  }

  namespace
  {
    // Ratio of the implied geometric tail, or 0 when the policy (or the data)
    // says to truncate. A ratio >= 1 would make the sums diverge.
    double tail_ratio(const AcfSequence& acf)
    {
      if (acf.tail_policy != TailPolicy::geometric_extrapolate)
        return 0.0;
      const Eigen::Index L = acf.values.size();
      if (L < 2)
        return 0.0;
      const double r = acf.values(L - 1) / acf.values(L - 2);
      if (r >= 1.0)
        throw std::domain_error("geometric tail ratio >= 1: divergent tail");
      if (!(r > 0.0))  // covers r <= 0 and NaN from 0/0
        return 0.0;
      return r;
    }
  }

  AcfSums acf_sums(const AcfSequence& acf, long long k)
  {
    if (k < 1)
      throw std::invalid_argument("k must be >= 1");

    const Eigen::Index L = acf.values.size();
    const double r = tail_ratio(acf);

    // Stored lags, split into multiples of k and the rest so that
    // R = R_k + R_minus_k holds exactly as written.
    double stored_k = 0.0;
    double stored_rest = 0.0;
    for (Eigen::Index l = 1; l <= L; ++l)
    {
      if (l % k == 0)
        stored_k += acf.values(l - 1);
      else
        stored_rest += acf.values(l - 1);
    }

    double tail_k = 0.0;
    double tail_rest = 0.0;
    if (r > 0.0)
    {
      // rho_l = rho_L r^(l-L) beyond the stored range; both pieces are
      // closed-form geometric sums.
      const double rho_L = acf.values(L - 1);
      const double tail_total = rho_L * r / (1.0 - r);
      const long long m0 = (long long)(L) / k + 1;  // first multiple of k past L
      tail_k = rho_L * rho_pow(r, m0 * k - L) / (1.0 - rho_pow(r, k));
      tail_rest = tail_total - tail_k;
    }

    AcfSums sums;
    sums.k = k;
    sums.R_k = stored_k + tail_k;
    sums.R_minus_k = stored_rest + tail_rest;
    sums.R = sums.R_k + sums.R_minus_k;
    return sums;
  }

  double efford(long long k, const AcfSequence& acf, double theta)
  {
    if (!(theta >= 0.0))
      throw std::invalid_argument("theta must be nonnegative");
    const AcfSums sums = acf_sums(acf, k);
    const double var_full = 1.0 + 2.0 * sums.R;
    const double var_thinned = 1.0 + 2.0 * sums.R_k;
    if (!(var_full > 0.0) || !(var_thinned > 0.0))
      throw std::domain_error("non-positive asymptotic variance: invalid acf");
    return (1.0 + theta) / (double(k) + theta) * var_full / var_thinned;
  }

  double efford_finite_budget(long long k, const AcfSequence& acf, double theta,
                              Budget b)
  {
    if (!(theta >= 0.0))
      throw std::invalid_argument("theta must be nonnegative");
    const double n_1 = std::floor(b.B / (1.0 + theta));
    const double n_k = std::floor(b.B / (double(k) + theta));
    if (n_1 < 1.0)
      throw std::domain_error("budget too small for even one unthinned sample");
    if (n_k < 1.0)
      throw std::domain_error("zero samples at this thinning factor");

    const AcfSums sums = acf_sums(acf, k);
    const double var_full = 1.0 + 2.0 * sums.R;
    const double var_thinned = 1.0 + 2.0 * sums.R_k;
    if (!(var_full > 0.0) || !(var_thinned > 0.0))
      throw std::domain_error("non-positive asymptotic variance: invalid acf");
    return n_k / n_1 * var_full / var_thinned;
  }

  bool thinning_hurts(long long k, const AcfSequence& acf, double theta)
  {
    if (k < 2)
      throw std::invalid_argument("thinning_hurts requires k >= 2");
    if (!(theta >= 0.0))
      throw std::invalid_argument("theta must be nonnegative");
    const AcfSums sums = acf_sums(acf, k);
    return sums.R_minus_k < double(k - 1) / (theta + 1.0) * (sums.R_k + 0.5);
  }

  double monotone_theta_bound(const AcfSequence& acf, long long k)
  {
    if (k < 1)
      throw std::invalid_argument("k must be >= 1");
    const Eigen::Index L = acf.values.size();
    if ((acf.values < 0.0).any())
      throw std::invalid_argument("monotone bound requires nonnegative acf");
    for (Eigen::Index l = 1; l < L; ++l)
      if (acf.values(l) > acf.values(l - 1))
        throw std::invalid_argument("monotone bound requires nonincreasing acf");

    const double R_k = acf_sums(acf, k).R_k;
    if (R_k == 0.0)
      return std::numeric_limits<double>::infinity();  // no constraint
    return 1.0 / (2.0 * R_k);
  }

  AcfSequence estimate_acf(const Eigen::ArrayXd& series, long long max_lag)
  {
    if (max_lag < 1)
      throw std::invalid_argument("max_lag must be >= 1");
    const Eigen::Index n = series.size();
    if (n <= max_lag)
      throw std::invalid_argument("series must be longer than max_lag");

    const Eigen::VectorXd centered = (series - series.mean()).matrix();
    const double denom = centered.squaredNorm();
    if (denom == 0.0)
      throw std::domain_error("constant series: zero variance");

    // Compute lags one at a time so the positive-sequence cut stops the work
    // early; long traces rarely need anywhere near max_lag lags.
    std::vector<double> rho;
    rho.reserve(16);
    for (long long lag = 1; lag <= max_lag; ++lag)
    {
      rho.push_back(centered.head(n - lag).dot(centered.tail(n - lag)) / denom);
      const std::size_t m = rho.size();
      if (m >= 2 && rho[m - 2] + rho[m - 1] <= 0.0)
      {
        rho.resize(m >= 3 ? m - 2 : 1);  // drop the offending pair, keep >= 1 lag
        break;
      }
    }

    Eigen::ArrayXd kept = Eigen::Map<const Eigen::ArrayXd>(rho.data(),
                                                           Eigen::Index(rho.size()));
    return AcfSequence(std::move(kept), TailPolicy::truncate);
  }

  double fit_ar1_rho(const AcfSequence& acf)
  {
    const double limit = 1.0 - 1e-12;
    const double rho1 = acf.values(0);
    return rho1 > limit ? limit : (rho1 < -limit ? -limit : rho1);
  }
}
