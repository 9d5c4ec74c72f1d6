#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "golden_tables.hpp"
#include "mcthin/optimize.hpp"

using namespace mcthin;

TEST_SUITE("optimize")
{
  TEST_CASE("getkmax brackets the optimum by doubling")
  {
    for (double th : {0.0, 1.0, 1000.0})
      CHECK(getkmax(ThinningProblem(th, 0.0)) == 2);

    const long long km = getkmax(ThinningProblem(1.0, 0.99));
    CHECK(km == 64);  // first power of 2 past the optimum at 39
    CHECK((km & (km - 1)) == 0);

    const long long km_big = getkmax(ThinningProblem(100.0, 0.999999));
    CHECK(km_big >= 84333);
    CHECK((km_big & (km_big - 1)) == 0);

    CHECK_THROWS_AS(getkmax(ThinningProblem(1.0, -0.1)), std::domain_error);
  }

  TEST_CASE("kopt pins its reference values")
  {
    CHECK(kopt(ThinningProblem(1.0, 0.99)) == 39);
    CHECK(kopt(ThinningProblem(10.0, 0.9)) == 17);
    CHECK(kopt(ThinningProblem(1000.0, 0.999999)) == 181612);
    for (double th : {0.0, 0.3, 50.0})
      CHECK(kopt(ThinningProblem(th, 0.0)) == 1);

    // The search refuses rather than silently scanning past the limit.
    CHECK_THROWS_WITH_AS(kopt(ThinningProblem(1.0, 0.99), 32),
                         doctest::Contains("too expensive"), std::domain_error);
    CHECK_THROWS_AS(kopt(ThinningProblem(1000.0, 0.9999999999)), std::domain_error);
  }

  TEST_CASE("kok pins its reference values")
  {
    CHECK(kok(ThinningProblem(1.0, 0.999)) == 17);
    CHECK(kok(ThinningProblem(10.0, 0.999)) == 109);
    CHECK(kok(ThinningProblem(0.01, 0.9)) == 1);
    CHECK_THROWS_AS(kok(ThinningProblem(1.0, 0.9), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(kok(ThinningProblem(1.0, 0.9), 1.0), std::invalid_argument);
  }

  TEST_CASE("kok lands exactly at the efficiency cutoff")
  {
    std::mt19937_64 rng(201);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 200; ++i)
    {
      const double th = std::pow(10.0, -3.0 + 6.0 * unif(rng));
      const double r = unif(rng) * (1.0 - 1e-5);
      const double eta = 0.01 + unif(rng) * 0.5;
      const ThinningProblem p(th, r);

      const long long best = kopt(p);
      const long long ok = kok(p, eta);
      CHECK(ok <= best);
      const double ratio = std::exp(leff_prime(ok, p) - leff_prime(best, p));
      CHECK(ratio >= (1.0 - eta) * (1.0 - 1e-12));
      if (ok > 1)
      {
        const double below = std::exp(leff_prime(ok - 1, p) - leff_prime(best, p));
        CHECK(below < (1.0 - eta) * (1.0 + 1e-12));
      }
    }
  }

  TEST_CASE("k_for_rho1_limit realizes the target efficiency share")
  {
    CHECK(k_for_rho1_limit(1.0, 0.05) == 19);
    CHECK(k_for_rho1_limit(10.0, 0.5) == 10);

    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 100; ++i)
    {
      const double th = std::pow(10.0, -2.0 + 4.0 * unif(rng));
      const double eta = 0.01 + unif(rng) * 0.9;
      const long long k = k_for_rho1_limit(th, eta);
      CHECK(eff_limit_rho1(k, th) >= (1.0 - eta) * (1.0 + th) * (1.0 - 1e-9));
      if (k > 1)
        CHECK(eff_limit_rho1(k - 1, th) < (1.0 - eta) * (1.0 + th) * (1.0 + 1e-9));
    }
  }

  TEST_CASE("the doubling cap never cuts off the true argmax")
  {
    std::mt19937_64 rng(203);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 500; ++i)
    {
      const double th = std::pow(10.0, -3.0 + 6.0 * unif(rng));
      const double r = unif(rng) * (1.0 - 1e-6);
      const ThinningProblem p(th, r);

      const long long kmax = getkmax(p);
      long long best = 1;
      double best_v = leff_prime(1, p);
      for (long long k = 2; k <= 4 * kmax; ++k)
      {
        const double v = leff_prime(k, p);
        if (v > best_v)
        {
          best_v = v;
          best = k;
        }
      }
      CHECK(best <= kmax);
      CHECK(best == kopt(p, 4 * kmax));
    }
  }

  TEST_CASE("kopt equals 1 exactly below the cost threshold")
  {
    std::mt19937_64 rng(204);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 500; ++i)
    {
      const double th = std::pow(10.0, -3.0 + 6.0 * unif(rng));
      const double r = 0.001 + unif(rng) * 0.998;
      const double threshold = (1.0 - r) * (1.0 - r) / (2.0 * r);
      if (std::abs(th - threshold) < 1e-9 * threshold)
        continue;  // knife edge: ties decided by rounding
      CHECK((kopt(ThinningProblem(th, r)) == 1) == (th <= threshold));
    }
  }

  TEST_CASE("efficiency_curve agrees with the scalar searches")
  {
    const ThinningProblem p(1.0, 0.99);
    const EfficiencyCurve curve = efficiency_curve(p, 0.05);
    CHECK(curve.kmax == getkmax(p));
    CHECK(curve.values.size() == curve.kmax);
    CHECK(curve.k_opt == kopt(p));
    CHECK(curve.k_ok == kok(p, 0.05));
    CHECK(curve.eta == 0.05);
    for (long long k = 1; k <= curve.kmax; ++k)
      CHECK(curve.values(curve.k_opt - 1) >= curve.values(k - 1));
    // The exponentiated log difference stays under the ceiling.
    CHECK(std::exp(curve.values(curve.k_opt - 1) - curve.values(0)) <= 1.0 + p.theta);
  }

  TEST_CASE("make_tables reproduces the golden grids")
  {
    const Tables t = make_tables(TableSpec::defaults());
    REQUIRE(t.k_opt.rows() == golden::n_theta);
    REQUIRE(t.k_opt.cols() == golden::n_rho);
    CHECK(t.errors.empty());

    for (int i = 0; i < golden::n_theta; ++i)
      for (int j = 0; j < golden::n_rho; ++j)
      {
        CAPTURE(i);
        CAPTURE(j);
        CHECK(t.k_opt(i, j) == golden::k_opt[i][j]);
        CHECK(t.k_ok(i, j) == golden::k_ok[i][j]);
        CHECK(std::round(t.eff_at_kopt(i, j) * 100.0) / 100.0
              == golden::eff_2dp[i][j]);
      }
  }

  TEST_CASE("make_tables isolates failing cells instead of aborting")
  {
    TableSpec spec;
    spec.theta_values = {1.0, 1000.0};
    spec.rho_values = {0.5, 0.99999999};
    const Tables t = make_tables(spec, 2000000);

    // Only the corner past the search limit fails; everything else still
    // fills in, including the million-step neighbor.
    REQUIRE(t.errors.size() == 1);
    CHECK(t.errors[0].row == 1);
    CHECK(t.errors[0].col == 1);
    CHECK(t.errors[0].message.find("too expensive") != std::string::npos);
    CHECK(t.k_opt(1, 1) == -1);
    CHECK(t.k_ok(1, 1) == -1);
    CHECK(std::isnan(t.eff_at_kopt(1, 1)));
    CHECK(t.k_opt(0, 0) == 2);
    CHECK(t.k_opt(1, 0) > 1);

    TableSpec bad;
    bad.theta_values = {};
    bad.rho_values = {0.5};
    CHECK_THROWS_AS(make_tables(bad), std::invalid_argument);
  }

  TEST_CASE("default table grids match the documented decades")
  {
    const TableSpec spec = TableSpec::defaults();
    REQUIRE(spec.theta_values.size() == std::size_t(golden::n_theta));
    REQUIRE(spec.rho_values.size() == std::size_t(golden::n_rho));
    for (int i = 0; i < golden::n_theta; ++i)
      CHECK(spec.theta_values[std::size_t(i)] == golden::theta_grid[i]);
    for (int j = 0; j < golden::n_rho; ++j)
      CHECK(spec.rho_values[std::size_t(j)] == golden::rho_grid[j]);
    CHECK(spec.eta == 0.05);
  }
}
