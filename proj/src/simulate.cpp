#include "mcthin/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace mcthin
{
  std::uint64_t splitmix64(std::uint64_t z)
  {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t replicate_seed(std::uint64_t seed, long long k, long long replicate)
  {
    // Two mixing rounds keep distinct (k, replicate) cells uncorrelated even
    // for adjacent indices.
    const std::uint64_t by_k = splitmix64(seed + 0x9e3779b97f4a7c15ull
                                                     * std::uint64_t(k));
    return splitmix64(by_k + std::uint64_t(replicate));
  }

  SimulationConfig::SimulationConfig(double rho_, double theta_, Budget budget_,
                                     std::vector<long long> k_values_,
                                     long long replications_, std::uint64_t seed_,
                                     double sigma2_)
    : rho(rho_), theta(theta_), budget(budget_), k_values(std::move(k_values_)),
      replications(replications_), seed(seed_), sigma2(sigma2_)
  {
    if (!(rho > -1.0 && rho < 1.0))
      throw std::invalid_argument("rho must be in (-1, 1)");
    if (!(theta > 0.0))
      throw std::invalid_argument("theta must be positive");
    if (!(sigma2 > 0.0))
      throw std::invalid_argument("sigma2 must be positive");
    if (k_values.empty())
      throw std::invalid_argument("at least one thinning factor required");
    if (replications < 3)
      throw std::invalid_argument("at least 3 replications required for "
                                  "jackknife standard errors");
    for (long long k : k_values)
    {
      if (k < 1)
        throw std::invalid_argument("thinning factors must be >= 1");
      if (samples_at(k) < 10)
        throw std::invalid_argument("budget allows fewer than 10 samples at k="
                                    + std::to_string(k));
    }
  }

  long long SimulationConfig::samples_at(long long k) const
  {
    return (long long)(std::floor(budget.B / (double(k) + theta)));
  }

  Eigen::ArrayXd generate_ar1(double rho, long long n, double sigma2,
                              std::uint64_t seed)
  {
    if (!(rho > -1.0 && rho < 1.0))
      throw std::invalid_argument("rho must be in (-1, 1)");
    if (n < 1)
      throw std::invalid_argument("n must be >= 1");
    if (!(sigma2 > 0.0))
      throw std::invalid_argument("sigma2 must be positive");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sigma = std::sqrt(sigma2);
    const double innovation = std::sqrt(sigma2 * (1.0 - rho * rho));

    Eigen::ArrayXd y(n);
    y(0) = sigma * normal(rng);
    for (long long t = 1; t < n; ++t)
      y(t) = rho * y(t - 1) + innovation * normal(rng);
    return y;
  }

  double thinned_chain_mean(double rho, double sigma2, long long k, long long n_k,
                            std::uint64_t stream_seed)
  {
    if (k < 1 || n_k < 1)
      throw std::invalid_argument("k and n_k must be >= 1");

    std::mt19937_64 rng(stream_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sigma = std::sqrt(sigma2);
    const double innovation = std::sqrt(sigma2 * (1.0 - rho * rho));

    // Same recurrence and draw order as generate_ar1; the chain is exactly
    // k*n_k long and values at positions k, 2k, ... are retained.
    double y = sigma * normal(rng);
    double sum = (k == 1) ? y : 0.0;
    const long long length = k * n_k;
    for (long long t = 2; t <= length; ++t)
    {
      y = rho * y + innovation * normal(rng);
      if (t % k == 0)
        sum += y;
    }
    return sum / double(n_k);
  }

  namespace
  {
    // One thinned mean per replicate, each from its own stream; replicate
    // ranges are split across threads and written into fixed slots so the
    // result does not depend on scheduling.
    Eigen::ArrayXd replicate_means(const SimulationConfig& cfg, long long k,
                                   long long n_k)
    {
      const long long reps = cfg.replications;
      Eigen::ArrayXd means(reps);

      const auto run_range = [&](long long lo, long long hi) {
        for (long long rep = lo; rep < hi; ++rep)
          means(rep) = thinned_chain_mean(cfg.rho, cfg.sigma2, k, n_k,
                                          replicate_seed(cfg.seed, k, rep));
      };

      const unsigned hw = std::thread::hardware_concurrency();
      const long long workers =
          std::max<long long>(1, std::min<long long>(hw == 0 ? 1 : hw, reps));
      if (workers == 1)
      {
        run_range(0, reps);
        return means;
      }

      std::vector<std::thread> pool;
      pool.reserve(std::size_t(workers));
      const long long chunk = (reps + workers - 1) / workers;
      for (long long w = 0; w < workers; ++w)
      {
        const long long lo = w * chunk;
        const long long hi = std::min(reps, lo + chunk);
        if (lo < hi)
          pool.emplace_back(run_range, lo, hi);
      }
      for (std::thread& t : pool)
        t.join();
      return means;
    }
  }

  MeanVar thinned_mean_variance(const SimulationConfig& cfg, long long k)
  {
    const long long n_k = cfg.samples_at(k);
    if (n_k < 1)
      throw std::domain_error("zero samples at this thinning factor");

    const Eigen::ArrayXd means = replicate_means(cfg, k, n_k);
    const double R = double(cfg.replications);
    const Eigen::ArrayXd centered = means - means.mean();
    const double ss = centered.square().sum();
    const double var_hat = ss / (R - 1.0);

    // Leave-one-out variances collapse to a closed form in the centered sum
    // of squares; their spread gives the jackknife standard error.
    const Eigen::ArrayXd loo =
        (ss - centered.square() * (R / (R - 1.0))) / (R - 2.0);
    const double loo_mean = loo.mean();
    const double se =
        std::sqrt((R - 1.0) / R * (loo - loo_mean).square().sum());

    return MeanVar{n_k, var_hat, se};
  }

  SimulationReport empirical_efficiency(const SimulationConfig& cfg)
  {
    if (std::find(cfg.k_values.begin(), cfg.k_values.end(), 1)
        == cfg.k_values.end())
      throw std::invalid_argument("k_values must include 1 as the baseline");

    const MeanVar base = thinned_mean_variance(cfg, 1);

    SimulationReport report{cfg, {}};
    report.records.reserve(cfg.k_values.size());
    for (long long k : cfg.k_values)
    {
      SimRecord rec;
      rec.k = k;
      if (k == 1)
      {
        // The baseline compared against itself: the ratio is identically 1.
        rec.n_k = base.n_k;
        rec.var_hat = base.var_hat;
        rec.eff_emp = 1.0;
        rec.se = 0.0;
        rec.eff_pred = 1.0;
        rec.flag = false;
      }
      else
      {
        const MeanVar mv = thinned_mean_variance(cfg, k);
        rec.n_k = mv.n_k;
        rec.var_hat = mv.var_hat;
        rec.eff_emp = base.var_hat / mv.var_hat;
        // Delta method across the two independent variance estimates.
        const double rel1 = base.se / base.var_hat;
        const double relk = mv.se / mv.var_hat;
        rec.se = rec.eff_emp * std::sqrt(rel1 * rel1 + relk * relk);

        const double rk = rho_pow(cfg.rho, k);
        rec.eff_pred = double(mv.n_k) / double(base.n_k)
                     * ((1.0 + cfg.rho) / (1.0 - cfg.rho))
                     / ((1.0 + rk) / (1.0 - rk));
        rec.flag = std::abs(rec.eff_emp - rec.eff_pred) > 3.0 * rec.se;
      }
      report.records.push_back(rec);
    }
    return report;
  }
}
