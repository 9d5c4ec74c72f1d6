// Report structs for the command surface plus their JSON / CSV / aligned-text
// renderings, kept in the library so round-trip behavior is testable without
// going through a process boundary.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "mcthin/band.hpp"
#include "mcthin/optimize.hpp"
#include "mcthin/simulate.hpp"

namespace mcthin
{
  enum class OutputFormat
  {
    text,
    csv,
    json,
  };

  OutputFormat parse_format(const std::string& name);

  // Optimal-k lookup for one (theta, rho) instance.
  struct OptReport
  {
    double theta;
    double rho;
    double eta;
    long long k_opt;
    double eff_opt;
    long long k_ok;
    double eff_ok;
    bool no_thinning_optimal;
    double theta_threshold;  // +inf when rho <= 0 never rewards thinning
    double eff_ceiling;      // 1 + theta
  };

  OptReport make_opt_report(double theta, double rho, double eta);

  struct HurtsVerdict
  {
    long long k;
    bool hurts;  // true exactly when efford(k) < 1 on the estimated acf
  };

  // Trace-file recommendation; rho_hat drives the ar1 mode, the estimated
  // acf itself drives the generic mode.
  struct AnalyzeReport
  {
    std::string mode;
    double theta;
    long long max_lag;
    long long n;
    long long acf_lags;
    double rho_hat;
    double acf_sum;  // R over the kept lags
    long long k_opt;
    long long k_ok;
    double eff_opt;
    std::vector<HurtsVerdict> hurts_checks;
  };

  AnalyzeReport analyze_trace(const Eigen::ArrayXd& series, double theta,
                              long long max_lag, const std::string& mode);

  // Single-column numeric input: one value per line or the first CSV field,
  // with an optional non-numeric header line.
  Eigen::ArrayXd read_series(std::istream& in);
  Eigen::ArrayXd read_series_file(const std::string& path);

  // JSON codecs; parse(emit(x)) reproduces x for every report type.
  nlohmann::json to_json(const OptReport& r);
  nlohmann::json to_json(const Tables& t);
  nlohmann::json to_json(const BandReport& r);
  nlohmann::json to_json(const AnalyzeReport& r);
  nlohmann::json to_json(const SimulationReport& r);

  OptReport opt_report_from_json(const nlohmann::json& j);
  Tables tables_from_json(const nlohmann::json& j);
  BandReport band_report_from_json(const nlohmann::json& j);
  AnalyzeReport analyze_report_from_json(const nlohmann::json& j);
  SimulationReport simulation_report_from_json(const nlohmann::json& j);

  // Renderers; text and csv print non-integer values to 6 significant
  // digits, except the efficiency table which rounds to 2 decimals.
  std::string render(const OptReport& r, OutputFormat format);
  std::string render(const Tables& t, OutputFormat format);
  std::string render(const BandReport& r, OutputFormat format);
  std::string render(const AnalyzeReport& r, OutputFormat format);
  std::string render(const SimulationReport& r, OutputFormat format);
}
