// Optimal and near-optimal thinning factors for the AR(1) model: bracket the
// optimum by doubling, enumerate in the log domain, and build the reference
// grids of k_opt / efficiency / k_ok.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mcthin/ar1.hpp"

namespace mcthin
{
  inline constexpr long long k_limit_default = 10'000'000;

  // leff_prime profile over 1..kmax with the located optimum and the
  // smallest k whose efficiency is within a factor 1-eta of it.
  struct EfficiencyCurve
  {
    ThinningProblem problem;
    long long kmax;
    Eigen::ArrayXd values;  // values(k-1) = leff_prime(k)
    long long k_opt;
    long long k_ok;
    double eta;
  };

  // Grid over which make_tables evaluates; defaults match the reference
  // decade grid for theta and the 1-10^-j ladder for rho.
  struct TableSpec
  {
    std::vector<double> theta_values;
    std::vector<double> rho_values;
    double eta = 0.05;

    static TableSpec defaults();
  };

  // One failed grid cell (kopt refused), kept so renderers can show NA.
  struct TableCellError
  {
    Eigen::Index row;
    Eigen::Index col;
    std::string message;
  };

  struct Tables
  {
    TableSpec spec;
    Eigen::ArrayXX<std::int64_t> k_opt;
    Eigen::ArrayXXd eff_at_kopt;
    Eigen::ArrayXX<std::int64_t> k_ok;
    std::vector<TableCellError> errors;  // empty on the default grid
  };

  // Upper bound for the argmax of eff: double k until leff_prime stops
  // increasing and return the first value that failed to improve. Requires
  // rho >= 0 (eff is unimodal there).
  long long getkmax(const ThinningProblem& p);

  // Exhaustive argmax of leff_prime over 1..getkmax, first index on ties.
  // Refuses when getkmax exceeds k_limit.
  long long kopt(const ThinningProblem& p, long long k_limit = k_limit_default);

  // Smallest k whose efficiency is at least (1-eta) times the optimum.
  long long kok(const ThinningProblem& p, double eta = 0.05,
                long long k_limit = k_limit_default);

  // Smallest k reaching relative efficiency 1-eta in the rho -> 1 limit:
  // ceil(theta (1-eta) / eta).
  long long k_for_rho1_limit(double theta, double eta);

  // Full leff_prime profile plus k_opt and k_ok in one scan.
  EfficiencyCurve efficiency_curve(const ThinningProblem& p, double eta = 0.05,
                                   long long k_limit = k_limit_default);

  // The three (theta, rho) grids: optimal k, efficiency at the optimum
  // (exponentiated log difference, never a raw ratio), and k_ok.
  Tables make_tables(const TableSpec& spec, long long k_limit = k_limit_default);
}
