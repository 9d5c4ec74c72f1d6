#include <cmath>
#include <cstdint>
#include <set>

#include "doctest.h"

#include "mcthin/acf.hpp"
#include "mcthin/simulate.hpp"

using namespace mcthin;

TEST_SUITE("simulate")
{
  TEST_CASE("splitmix64 matches its reference outputs")
  {
    CHECK(splitmix64(0x0ull) == 0xe220a8397b1dcdafull);
    CHECK(splitmix64(0x1ull) == 0x910a2dec89025cc1ull);
    CHECK(splitmix64(0xdeadbeefull) == 0x4adfb90f68c9eb9bull);
  }

  TEST_CASE("replicate_seed derives distinct deterministic streams")
  {
    CHECK(replicate_seed(7, 3, 11) == replicate_seed(7, 3, 11));
    // Two mixing rounds over the (k, replicate) pair, laid bare.
    const std::uint64_t by_k = splitmix64(7ull + 0x9e3779b97f4a7c15ull * 3ull);
    CHECK(replicate_seed(7, 3, 11) == splitmix64(by_k + 11ull));

    std::set<std::uint64_t> seen;
    for (long long k = 1; k <= 40; ++k)
      for (long long rep = 0; rep < 25; ++rep)
        seen.insert(replicate_seed(20240917, k, rep));
    CHECK(seen.size() == 1000);

    CHECK(replicate_seed(1, 2, 3) != replicate_seed(2, 2, 3));
  }

  TEST_CASE("generate_ar1 is deterministic with exact length")
  {
    const Eigen::ArrayXd a = generate_ar1(0.7, 1000, 1.0, 99);
    const Eigen::ArrayXd b = generate_ar1(0.7, 1000, 1.0, 99);
    const Eigen::ArrayXd c = generate_ar1(0.7, 1000, 1.0, 100);
    CHECK(a.size() == 1000);
    CHECK((a == b).all());
    CHECK_FALSE((a == c).all());
    CHECK(generate_ar1(0.0, 1, 1.0, 5).size() == 1);

    CHECK_THROWS_AS(generate_ar1(1.0, 10, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_ar1(-1.0, 10, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_ar1(0.5, 0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(generate_ar1(0.5, 10, 0.0, 0), std::invalid_argument);
  }

  TEST_CASE("white noise shows the advertised moments")
  {
    const long long n = 200000;
    const Eigen::ArrayXd y = generate_ar1(0.0, n, 2.0, 501);
    CHECK(std::abs(y.mean()) < 3.0 * std::sqrt(2.0 / double(n)));

    const Eigen::ArrayXd c = y - y.mean();
    const double var = c.square().sum() / double(n - 1);
    CHECK(std::abs(var - 2.0) < 0.02);

    const double lag1 = (c.head(n - 1) * c.tail(n - 1)).sum() / c.square().sum();
    CHECK(std::abs(lag1) < 3.0 / std::sqrt(double(n)));
  }

  TEST_CASE("the stationary chain keeps unit variance at any rho")
  {
    const long long n = 400000;
    const Eigen::ArrayXd y = generate_ar1(0.6, n, 1.0, 502);
    const Eigen::ArrayXd c = y - y.mean();
    const double var = c.square().sum() / double(n - 1);
    CHECK(std::abs(var - 1.0) < 0.01);

    const double lag1 = (c.head(n - 1) * c.tail(n - 1)).sum() / c.square().sum();
    CHECK(std::abs(lag1 - 0.6) < 0.01);
  }

  TEST_CASE("thinned_chain_mean thins a full chain exactly")
  {
    const long long k = 4, n_k = 500;
    const Eigen::ArrayXd chain = generate_ar1(0.7, k * n_k, 1.5, 77);
    double sum = 0.0;
    for (long long j = 1; j <= n_k; ++j)
      sum += chain(j * k - 1);
    CHECK(thinned_chain_mean(0.7, 1.5, k, n_k, 77) == sum / double(n_k));

    // k = 1 degenerates to the plain chain mean, in the same addition order.
    const Eigen::ArrayXd whole = generate_ar1(0.3, 200, 1.0, 78);
    double all = 0.0;
    for (long long t = 0; t < 200; ++t)
      all += whole(t);
    CHECK(thinned_chain_mean(0.3, 1.0, 1, 200, 78) == all / 200.0);

    CHECK_THROWS_AS(thinned_chain_mean(0.5, 1.0, 0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(thinned_chain_mean(0.5, 1.0, 2, 0, 1), std::invalid_argument);
  }

  TEST_CASE("replicate variance of a white-noise mean is sigma^2/n")
  {
    const SimulationConfig cfg(0.0, 1.0, Budget(1e5), {1}, 600, 503);
    const MeanVar mv = thinned_mean_variance(cfg, 1);
    CHECK(mv.n_k == 50000);
    CHECK(mv.se > 0.0);
    CHECK(mv.se < mv.var_hat);
    CHECK(std::abs(double(mv.n_k) * mv.var_hat - 1.0)
          <= 3.0 * double(mv.n_k) * mv.se);
  }

  TEST_CASE("autocorrelation inflates the mean variance by (1+rho)/(1-rho)")
  {
    const SimulationConfig cfg(0.9, 1.0, Budget(1e5), {1}, 800, 504);
    const MeanVar mv = thinned_mean_variance(cfg, 1);
    const double scaled = double(mv.n_k) * mv.var_hat;
    // The sampling sd of an 800-replication variance estimate is about 5%,
    // so the absolute window is 3 sigma; the se-scaled check below is the
    // sharp one.
    CHECK(std::abs(scaled - 19.0) <= 0.15 * 19.0);
    CHECK(std::abs(scaled - 19.0) <= 3.0 * double(mv.n_k) * mv.se);

    // Thinning by k leaves an AR(1) with parameter rho^k.
    const SimulationConfig cfg3(0.9, 1.0, Budget(1e5), {1}, 300, 531);
    const MeanVar mv3 = thinned_mean_variance(cfg3, 3);
    CHECK(mv3.n_k == 25000);
    const double target = (1.0 + std::pow(0.9, 3)) / (1.0 - std::pow(0.9, 3));
    CHECK(std::abs(double(mv3.n_k) * mv3.var_hat - target)
          <= 3.0 * double(mv3.n_k) * mv3.se);
  }

  TEST_CASE("zero samples at a stride is refused at run time")
  {
    const SimulationConfig cfg(0.0, 1.0, Budget(100.0), {1}, 5, 1);
    CHECK_THROWS_WITH_AS(thinned_mean_variance(cfg, 200),
                         "zero samples at this thinning factor",
                         std::domain_error);
  }

  TEST_CASE("empirical efficiency on white noise matches the exact ratio")
  {
    const SimulationConfig cfg(0.0, 1.0, Budget(1e5), {1, 3}, 200, 506);
    const SimulationReport report = empirical_efficiency(cfg);
    REQUIRE(report.records.size() == 2);

    const SimRecord& base = report.records[0];
    CHECK(base.k == 1);
    CHECK(base.n_k == 50000);
    CHECK(base.eff_emp == 1.0);
    CHECK(base.se == 0.0);
    CHECK(base.eff_pred == 1.0);
    CHECK_FALSE(base.flag);
    CHECK(base.var_hat > 0.0);

    const SimRecord& rec = report.records[1];
    CHECK(rec.k == 3);
    CHECK(rec.n_k == 25000);
    // With no correlation the prediction is the bare sample-count ratio.
    CHECK(rec.eff_pred == 0.5);
    CHECK(rec.se > 0.0);
    CHECK(std::abs(rec.eff_emp - 0.5) <= 3.0 * rec.se);
    CHECK_FALSE(rec.flag);
  }

  TEST_CASE("eff_pred equals the finite-budget forecast of the acf module")
  {
    const SimulationConfig cfg(0.9, 1.0, Budget(2e4), {1, 2, 8, 17}, 3, 9);
    const SimulationReport report = empirical_efficiency(cfg);

    Eigen::ArrayXd two(2);
    two << 0.9, 0.81;
    const AcfSequence geo(two, TailPolicy::geometric_extrapolate);
    for (const SimRecord& rec : report.records)
    {
      CHECK(rec.n_k == cfg.samples_at(rec.k));
      if (rec.k == 1)
        continue;
      CHECK(rec.eff_pred
            == doctest::Approx(efford_finite_budget(rec.k, geo, 1.0,
                                                    Budget(2e4))).epsilon(1e-9));
    }
  }

  TEST_CASE("reports are bit-identical across runs")
  {
    const SimulationConfig cfg(0.5, 1.0, Budget(5e3), {1, 2, 5}, 20, 42);
    const SimulationReport a = empirical_efficiency(cfg);
    const SimulationReport b = empirical_efficiency(cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i)
    {
      CHECK(a.records[i].k == b.records[i].k);
      CHECK(a.records[i].n_k == b.records[i].n_k);
      CHECK(a.records[i].var_hat == b.records[i].var_hat);
      CHECK(a.records[i].se == b.records[i].se);
      CHECK(a.records[i].eff_emp == b.records[i].eff_emp);
      CHECK(a.records[i].eff_pred == b.records[i].eff_pred);
      CHECK(a.records[i].flag == b.records[i].flag);
    }
  }

  TEST_CASE("configuration validation refuses unusable setups")
  {
    const std::vector<long long> ks{1};
    CHECK_THROWS_WITH_AS(SimulationConfig(1.0, 1.0, Budget(1e4), ks, 10, 0),
                         "rho must be in (-1, 1)", std::invalid_argument);
    CHECK_THROWS_WITH_AS(SimulationConfig(0.5, 0.0, Budget(1e4), ks, 10, 0),
                         "theta must be positive", std::invalid_argument);
    CHECK_THROWS_WITH_AS(SimulationConfig(0.5, 1.0, Budget(1e4), ks, 10, 0, 0.0),
                         "sigma2 must be positive", std::invalid_argument);
    CHECK_THROWS_WITH_AS(SimulationConfig(0.5, 1.0, Budget(1e4), {}, 10, 0),
                         "at least one thinning factor required",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(SimulationConfig(0.5, 1.0, Budget(1e4), ks, 2, 0),
                         "at least 3 replications required for jackknife "
                         "standard errors",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(SimulationConfig(0.5, 1.0, Budget(1e4), {1, 0}, 10, 0),
                         "thinning factors must be >= 1", std::invalid_argument);
    CHECK_THROWS_WITH_AS(SimulationConfig(0.5, 1.0, Budget(100.0), {1, 50}, 10, 0),
                         "budget allows fewer than 10 samples at k=50",
                         std::invalid_argument);
    CHECK_THROWS_AS(Budget(-1.0), std::invalid_argument);

    const SimulationConfig no_base(0.5, 1.0, Budget(1e4), {2, 4}, 10, 0);
    CHECK_THROWS_WITH_AS(empirical_efficiency(no_base),
                         "k_values must include 1 as the baseline",
                         std::invalid_argument);
  }

  TEST_CASE("thinning an AR(1) chain leaves an AR(1) chain")
  {
    const long long k = 4, n_k = 30000;
    const Eigen::ArrayXd chain = generate_ar1(0.8, k * n_k, 1.0, 507);
    Eigen::ArrayXd thinned(n_k);
    for (long long j = 1; j <= n_k; ++j)
      thinned(j - 1) = chain(j * k - 1);

    const AcfSequence est = estimate_acf(thinned, 10);
    CHECK(std::abs(est.values(0) - std::pow(0.8, 4))
          < 3.0 / std::sqrt(double(n_k)));
  }

  TEST_CASE("simulation agrees with the closed forms across a grid")
  {
    for (double rho : {0.0, 0.5, 0.9})
      for (double th : {0.5, 2.0})
      {
        const SimulationConfig cfg(rho, th, Budget(3e4), {1, 2, 5, 10}, 200, 508);
        const SimulationReport report = empirical_efficiency(cfg);
        for (const SimRecord& rec : report.records)
        {
          if (rec.flag)
            FAIL("prediction missed at rho=" << rho << " theta=" << th
                 << " k=" << rec.k << ": emp=" << rec.eff_emp
                 << " pred=" << rec.eff_pred << " se=" << rec.se);
        }
      }
  }
}
