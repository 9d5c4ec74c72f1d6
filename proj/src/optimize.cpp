#include "mcthin/optimize.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcthin
{
  long long getkmax(const ThinningProblem& p)
  {
    if (p.rho < 0.0)
      throw std::domain_error("getkmax requires rho >= 0");

    // Non-strict termination (<=) so a floating-point plateau ends the loop.
    long long m = 1;
    while (leff_prime(2 * m, p) > leff_prime(m, p))
      m *= 2;
    return 2 * m;
  }

  long long kopt(const ThinningProblem& p, long long k_limit)
  {
    const long long kmax = getkmax(p);
    if (kmax > k_limit)
      throw std::domain_error("optimal k too expensive: requires checking "
                              + std::to_string(kmax) + " values");

    long long best = 1;
    double best_value = leff_prime(1, p);
    for (long long k = 2; k <= kmax; ++k)
    {
      const double value = leff_prime(k, p);
      if (value > best_value)  // strict: ties keep the smallest k
      {
        best_value = value;
        best = k;
      }
    }
    return best;
  }

  long long kok(const ThinningProblem& p, double eta, long long k_limit)
  {
    if (!(eta > 0.0 && eta < 1.0))
      throw std::invalid_argument("eta must be in (0, 1)");

    const long long best = kopt(p, k_limit);
    const double target = leff_prime(best, p) + std::log1p(-eta);
    for (long long k = 1; k < best; ++k)
      if (leff_prime(k, p) >= target)
        return k;
    return best;
  }

  long long k_for_rho1_limit(double theta, double eta)
  {
    if (!(theta > 0.0))
      throw std::invalid_argument("theta must be positive");
    if (!(eta > 0.0 && eta < 1.0))
      throw std::invalid_argument("eta must be in (0, 1)");
    return static_cast<long long>(std::ceil(theta * (1.0 - eta) / eta));
  }

  EfficiencyCurve efficiency_curve(const ThinningProblem& p, double eta,
                                   long long k_limit)
  {
    if (!(eta > 0.0 && eta < 1.0))
      throw std::invalid_argument("eta must be in (0, 1)");

    const long long kmax = getkmax(p);
    if (kmax > k_limit)
      throw std::domain_error("optimal k too expensive: requires checking "
                              + std::to_string(kmax) + " values");

    Eigen::ArrayXd values(kmax);
    long long best = 1;
    for (long long k = 1; k <= kmax; ++k)
    {
      values(k - 1) = leff_prime(k, p);
      if (values(k - 1) > values(best - 1))
        best = k;
    }

    const double target = values(best - 1) + std::log1p(-eta);
    long long ok = best;
    for (long long k = 1; k <= best; ++k)
      if (values(k - 1) >= target)
      {
        ok = k;
        break;
      }

    return EfficiencyCurve{p, kmax, std::move(values), best, ok, eta};
  }

  TableSpec TableSpec::defaults()
  {
    TableSpec spec;
    spec.theta_values = {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0};
    spec.rho_values = {0.1, 0.5, 0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999999};
    spec.eta = 0.05;
    return spec;
  }

  Tables make_tables(const TableSpec& spec, long long k_limit)
  {
    if (spec.theta_values.empty() || spec.rho_values.empty())
      throw std::invalid_argument("table grids must be nonempty");
    if (!(spec.eta > 0.0 && spec.eta < 1.0))
      throw std::invalid_argument("eta must be in (0, 1)");

    const Eigen::Index rows = Eigen::Index(spec.theta_values.size());
    const Eigen::Index cols = Eigen::Index(spec.rho_values.size());

    Tables out;
    out.spec = spec;
    out.k_opt = Eigen::ArrayXX<std::int64_t>::Zero(rows, cols);
    out.eff_at_kopt = Eigen::ArrayXXd::Zero(rows, cols);
    out.k_ok = Eigen::ArrayXX<std::int64_t>::Zero(rows, cols);

    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
      {
        try
        {
          const ThinningProblem p(spec.theta_values[std::size_t(i)],
                                  spec.rho_values[std::size_t(j)]);
          const EfficiencyCurve curve = efficiency_curve(p, spec.eta, k_limit);
          out.k_opt(i, j) = curve.k_opt;
          out.eff_at_kopt(i, j) =
              std::exp(curve.values(curve.k_opt - 1) - curve.values(0));
          out.k_ok(i, j) = curve.k_ok;
        }
        catch (const std::exception& e)
        {
          out.k_opt(i, j) = -1;
          out.eff_at_kopt(i, j) = std::numeric_limits<double>::quiet_NaN();
          out.k_ok(i, j) = -1;
          out.errors.push_back({i, j, e.what()});
        }
      }
    return out;
  }
}
