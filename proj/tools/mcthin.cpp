// Command-line driver: opt, tables, analyze, band, and simulate subcommands
// over the thinning-efficiency library. All reports render as aligned text,
// CSV, or JSON and can be written to stdout or a file.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mcthin/report_io.hpp"

namespace
{
  void emit(const std::string& text, const std::string& out_path)
  {
    if (out_path.empty())
    {
      std::cout << text;
      return;
    }
    std::ofstream out(out_path);
    if (!out)
      throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
  }
}

int main(int argc, char** argv)
{
  CLI::App app{"Statistical efficiency of thinning an autocorrelated sampler\n"
               "under a compute-cost model: theta is the cost of using one\n"
               "retained draw, in units of the cost of one chain transition."};
  app.require_subcommand(1);
  app.footer("rho^k is evaluated as exp(k log rho); if that underflows to 0\n"
             "the efficiency formulas take their exact limiting values rather\n"
             "than raising a range error.");

  std::string format = "text";
  std::string out_path;
  const auto add_output_flags = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", out_path, "write the report to this file");
  };

  // opt: closed-form optimum for one (theta, rho).
  double theta = 1.0;
  double rho = 0.0;
  double eta = 0.05;
  CLI::App* opt_cmd = app.add_subcommand(
      "opt", "optimal and near-optimal thinning factors for AR(1) decay");
  opt_cmd->add_option("--theta", theta, "cost of one retained draw")->required();
  opt_cmd->add_option("--rho", rho, "lag-1 autocorrelation")->required();
  opt_cmd->add_option("--eta", eta, "slack for k_ok: efficiency >= (1-eta) * optimum")
      ->capture_default_str();
  add_output_flags(opt_cmd);

  // tables: the reference grids, optionally overridden.
  std::vector<double> theta_grid;
  std::vector<double> rho_grid;
  CLI::App* tables_cmd = app.add_subcommand(
      "tables", "grids of k_opt, efficiency at k_opt, and k_ok");
  tables_cmd->add_option("--theta", theta_grid, "theta grid (default decades 0.001..1000)")
      ->delimiter(',');
  tables_cmd->add_option("--rho", rho_grid, "rho grid (default 0.1, 0.5, 1-10^-j)")
      ->delimiter(',');
  tables_cmd->add_option("--eta", eta, "slack for the k_ok table")
      ->capture_default_str();
  add_output_flags(tables_cmd);

  // analyze: recommendation from a sampled trace.
  std::string trace_file;
  long long max_lag = 1000;
  std::string mode = "ar1";
  CLI::App* analyze_cmd = app.add_subcommand(
      "analyze", "estimate the trace acf and recommend a thinning factor");
  analyze_cmd->add_option("trace_file", trace_file,
                          "single-column numeric text/CSV of post-warmup draws")
      ->required();
  analyze_cmd->add_option("--theta", theta, "cost of one retained draw")->required();
  analyze_cmd->add_option("--max-lag,--max_lag", max_lag, "largest lag to estimate")
      ->capture_default_str();
  analyze_cmd->add_option("--mode", mode, "ar1: fit rho_hat; generic: use the acf as is")
      ->check(CLI::IsMember({"ar1", "generic"}))
      ->capture_default_str();
  add_output_flags(analyze_cmd);

  // band: robust intervals when only an envelope on the acf is known.
  double rho_lo = 0.0;
  double rho_hi = 0.0;
  std::vector<double> gains = {1.0, 2.0, 4.0, 10.0};
  CLI::App* band_cmd = app.add_subcommand(
      "band", "guaranteed-gain intervals and non-dominated thinning factors");
  band_cmd->add_option("--lo", rho_lo, "lower envelope base rho_lo")->required();
  band_cmd->add_option("--hi", rho_hi, "upper envelope base rho_hi")->required();
  band_cmd->add_option("--theta", theta, "cost of one retained draw")->required();
  band_cmd->add_option("--gains", gains, "gain factors to certify")
      ->delimiter(',')
      ->capture_default_str();
  add_output_flags(band_cmd);

  // simulate: Monte Carlo check of the closed forms.
  double budget = 1e6;
  std::vector<long long> k_values;
  long long reps = 200;
  std::uint64_t seed = 12345;
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "empirical thinning efficiencies from budgeted AR(1) runs");
  sim_cmd->add_option("--rho", rho, "lag-1 autocorrelation")->required();
  sim_cmd->add_option("--theta", theta, "cost of one retained draw")
      ->capture_default_str();
  sim_cmd->add_option("--budget", budget, "total transitions + evaluation cost per run")
      ->capture_default_str();
  sim_cmd->add_option("--k", k_values, "thinning factors (must include 1)")
      ->delimiter(',')
      ->required();
  sim_cmd->add_option("--reps", reps, "independent replications per k")
      ->capture_default_str();
  sim_cmd->add_option("--seed", seed, "base seed for the replicate streams")
      ->capture_default_str();
  add_output_flags(sim_cmd);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForAllHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e)
  {
    app.exit(e);  // prints the usage message
    return 2;
  }

  try
  {
    const mcthin::OutputFormat fmt = mcthin::parse_format(format);

    if (opt_cmd->parsed())
    {
      emit(render(mcthin::make_opt_report(theta, rho, eta), fmt), out_path);
    }
    else if (tables_cmd->parsed())
    {
      mcthin::TableSpec spec = mcthin::TableSpec::defaults();
      spec.eta = eta;
      if (!theta_grid.empty())
        spec.theta_values = theta_grid;
      if (!rho_grid.empty())
        spec.rho_values = rho_grid;
      const mcthin::Tables tables = mcthin::make_tables(spec);
      for (const mcthin::TableCellError& e : tables.errors)
        std::cerr << "note: cell theta="
                  << spec.theta_values[std::size_t(e.row)]
                  << " rho=" << spec.rho_values[std::size_t(e.col)]
                  << " failed (" << e.message << "); rendered as NA\n";
      emit(render(tables, fmt), out_path);
    }
    else if (analyze_cmd->parsed())
    {
      const Eigen::ArrayXd series = mcthin::read_series_file(trace_file);
      emit(render(mcthin::analyze_trace(series, theta, max_lag, mode), fmt),
           out_path);
    }
    else if (band_cmd->parsed())
    {
      const mcthin::RhoBand band(rho_lo, rho_hi);
      emit(render(mcthin::analyze_band(band, theta, gains), fmt), out_path);
    }
    else if (sim_cmd->parsed())
    {
      const mcthin::SimulationConfig config(rho, theta, mcthin::Budget(budget),
                                            k_values, reps, seed);
      emit(render(mcthin::empirical_efficiency(config), fmt), out_path);
    }
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
