// Monte Carlo oracle: stationary Gaussian AR(1) chains, budgeted thinned-mean
// estimation across replicates, and empirical efficiency ratios with
// uncertainty, for validating the closed forms.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "mcthin/acf.hpp"

namespace mcthin
{
  // SplitMix64 mixing step; the basis for all derived streams.
  std::uint64_t splitmix64(std::uint64_t z);

  // Deterministic, well-separated stream seed for one (k, replicate) cell of
  // a run. Parallel and serial execution draw identical numbers because each
  // replicate owns its stream.
  std::uint64_t replicate_seed(std::uint64_t seed, long long k, long long replicate);

  struct SimulationConfig
  {
    double rho;
    double theta;     // accounting only; no artificial delay is injected
    Budget budget;
    std::vector<long long> k_values;
    long long replications;
    std::uint64_t seed;
    double sigma2 = 1.0;

    SimulationConfig(double rho, double theta, Budget budget,
                     std::vector<long long> k_values, long long replications,
                     std::uint64_t seed, double sigma2 = 1.0);

    // floor(B / (k + theta)) samples fit the budget at stride k.
    long long samples_at(long long k) const;
  };

  struct SimRecord
  {
    long long k;
    long long n_k;
    double var_hat;   // across-replicate variance of the thinned mean
    double se;        // standard error of eff_emp (0 at k = 1)
    double eff_emp;   // var_hat at k=1 over var_hat at k
    double eff_pred;  // finite-budget closed form for the same ratio
    bool flag;        // |eff_emp - eff_pred| > 3 se
  };

  struct SimulationReport
  {
    SimulationConfig config;
    std::vector<SimRecord> records;  // in k_values order
  };

  // Stationary AR(1): y_1 ~ N(0, sigma2), y_{t+1} = rho y_t + eps with
  // eps ~ N(0, sigma2 (1 - rho^2)). Stationary from t = 1; no burn-in.
  Eigen::ArrayXd generate_ar1(double rho, long long n, double sigma2,
                              std::uint64_t seed);

  // Mean of every k-th value of a fresh chain of length exactly k*n_k, drawn
  // from the given stream without materializing the chain. Value-identical
  // to thinning generate_ar1(rho, k*n_k, sigma2, stream_seed).
  double thinned_chain_mean(double rho, double sigma2, long long k, long long n_k,
                            std::uint64_t stream_seed);

  struct MeanVar
  {
    long long n_k;
    double var_hat;
    double se;  // jackknife standard error of var_hat
  };

  // Across-replicate variance of the thinned mean at stride k, with a
  // leave-one-out jackknife standard error.
  MeanVar thinned_mean_variance(const SimulationConfig& cfg, long long k);

  // Empirical efficiency var(mu_1)/var(mu_k) per k under equal budget,
  // against the finite-budget prediction; flags any k off by more than
  // 3 standard errors. Requires 1 in k_values.
  SimulationReport empirical_efficiency(const SimulationConfig& cfg);
}
