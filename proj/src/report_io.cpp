#include "mcthin/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mcthin/acf.hpp"

namespace mcthin
{
  namespace
  {
    std::string fmt_g6(double x)
    {
      char buf[48];
      std::snprintf(buf, sizeof buf, "%.6g", x);
      return buf;
    }

    std::string fmt_f2(double x)
    {
      char buf[48];
      std::snprintf(buf, sizeof buf, "%.2f", x);
      return buf;
    }

    std::string pad(std::string s, std::size_t width)
    {
      if (s.size() < width)
        s.append(width - s.size(), ' ');
      return s;
    }

    // key/value line for the aligned-text reports
    void kv(std::ostringstream& out, const std::string& key, const std::string& value)
    {
      out << pad(key, 22) << value << '\n';
    }

    std::string interval_text(const IntInterval& iv)
    {
      if (iv.empty())
        return "(empty)";
      std::string s = "{" + std::to_string(iv.lo) + ".." + std::to_string(iv.hi) + "}";
      if (iv.hull_warning)
        s += " (non-contiguous: hull shown)";
      return s;
    }

    nlohmann::json interval_json(const IntInterval& iv)
    {
      return {{"lo", iv.lo},
              {"hi", iv.hi},
              {"empty", iv.empty()},
              {"hull_warning", iv.hull_warning}};
    }

    IntInterval interval_from_json(const nlohmann::json& j)
    {
      IntInterval iv;
      iv.lo = j.at("lo").get<long long>();
      iv.hi = j.at("hi").get<long long>();
      iv.hull_warning = j.at("hull_warning").get<bool>();
      return iv;
    }

    // nlohmann serializes non-finite numbers as null, so the one unbounded
    // field gets an explicit null <-> infinity mapping.
    nlohmann::json finite_or_null(double x)
    {
      if (std::isfinite(x))
        return x;
      return nullptr;
    }

    double finite_or_inf(const nlohmann::json& j)
    {
      if (j.is_null())
        return std::numeric_limits<double>::infinity();
      return j.get<double>();
    }
  }

  OutputFormat parse_format(const std::string& name)
  {
    if (name == "text")
      return OutputFormat::text;
    if (name == "csv")
      return OutputFormat::csv;
    if (name == "json")
      return OutputFormat::json;
    throw std::invalid_argument("unknown format: " + name);
  }

  OptReport make_opt_report(double theta, double rho, double eta)
  {
    const ThinningProblem p(theta, rho);

    OptReport r;
    r.theta = theta;
    r.rho = rho;
    r.eta = eta;
    if (rho < 0.0)
    {
      // The doubling bracket needs rho >= 0, and negative dependence never
      // rewards thinning, so the answer is immediate.
      if (!(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument("eta must be in (0, 1)");
      r.k_opt = 1;
      r.eff_opt = 1.0;
      r.k_ok = 1;
      r.eff_ok = 1.0;
    }
    else
    {
      const EfficiencyCurve curve = efficiency_curve(p, eta);
      r.k_opt = curve.k_opt;
      r.eff_opt = std::exp(curve.values(curve.k_opt - 1) - curve.values(0));
      r.k_ok = curve.k_ok;
      r.eff_ok = std::exp(curve.values(curve.k_ok - 1) - curve.values(0));
    }
    r.no_thinning_optimal = no_thinning_is_optimal(p);
    r.theta_threshold = rho > 0.0
                            ? (1.0 - rho) * (1.0 - rho) / (2.0 * rho)
                            : std::numeric_limits<double>::infinity();
    r.eff_ceiling = 1.0 + theta;
    return r;
  }

  AnalyzeReport analyze_trace(const Eigen::ArrayXd& series, double theta,
                              long long max_lag, const std::string& mode)
  {
    if (mode != "ar1" && mode != "generic")
      throw std::invalid_argument("mode must be ar1 or generic");
    if (!(theta >= 0.0))
      throw std::invalid_argument("theta must be nonnegative");

    const AcfSequence acf = estimate_acf(series, max_lag);
    const long long L = acf.values.size();

    AnalyzeReport rep;
    rep.mode = mode;
    rep.theta = theta;
    rep.max_lag = max_lag;
    rep.n = series.size();
    rep.acf_lags = L;
    rep.rho_hat = fit_ar1_rho(acf);
    rep.acf_sum = acf_sums(acf, 1).R;

    if (mode == "ar1")
    {
      if (rep.rho_hat <= 0.0)
      {
        // kopt is only defined for rho >= 0, and nonpositive dependence
        // never rewards thinning anyway.
        rep.k_opt = 1;
        rep.k_ok = 1;
        rep.eff_opt = 1.0;
      }
      else
      {
        const ThinningProblem p(theta, rep.rho_hat);
        const EfficiencyCurve curve = efficiency_curve(p);
        rep.k_opt = curve.k_opt;
        rep.k_ok = curve.k_ok;
        rep.eff_opt = std::exp(curve.values(curve.k_opt - 1) - curve.values(0));
      }
    }
    else
    {
      // Beyond L+1 every R_k is zero and efford only decays, so the argmax
      // lives in 1..L+1. Strides with a non-positive variance estimate can
      // never be recommended.
      const double var_full = 1.0 + 2.0 * rep.acf_sum;
      std::vector<double> vals(std::size_t(L) + 1);
      vals[0] = 1.0;
      long long best = 1;
      for (long long k = 2; k <= L + 1; ++k)
      {
        const double var_k = 1.0 + 2.0 * acf_sums(acf, k).R_k;
        vals[std::size_t(k - 1)] =
            (var_full > 0.0 && var_k > 0.0)
                ? (1.0 + theta) / (double(k) + theta) * var_full / var_k
                : -std::numeric_limits<double>::infinity();
        if (vals[std::size_t(k - 1)] > vals[std::size_t(best - 1)])
          best = k;
      }
      rep.k_opt = best;
      rep.eff_opt = vals[std::size_t(best - 1)];
      rep.k_ok = best;
      for (long long k = 1; k <= best; ++k)
        if (vals[std::size_t(k - 1)] >= 0.95 * rep.eff_opt)
        {
          rep.k_ok = k;
          break;
        }
    }

    for (long long k : {2LL, 5LL, 10LL})
      rep.hurts_checks.push_back({k, thinning_hurts(k, acf, theta)});
    return rep;
  }

  Eigen::ArrayXd read_series(std::istream& in)
  {
    std::vector<double> values;
    std::string line;
    bool allow_header = true;
    while (std::getline(in, line))
    {
      std::string field = line.substr(0, line.find(','));
      const auto start = field.find_first_not_of(" \t\r");
      if (start == std::string::npos)
        continue;  // blank line
      field = field.substr(start, field.find_last_not_of(" \t\r") - start + 1);

      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str() || *end != '\0')
      {
        if (allow_header)
        {
          allow_header = false;  // single optional header line
          continue;
        }
        throw std::runtime_error("non-numeric value in trace: " + field);
      }
      allow_header = false;
      values.push_back(v);
    }
    if (values.empty())
      throw std::runtime_error("trace contains no numeric values");
    return Eigen::Map<const Eigen::ArrayXd>(values.data(),
                                            Eigen::Index(values.size()));
  }

  Eigen::ArrayXd read_series_file(const std::string& path)
  {
    std::ifstream in(path);
    if (!in)
      throw std::runtime_error("cannot open trace file: " + path);
    return read_series(in);
  }

  // ---- JSON codecs ----

  nlohmann::json to_json(const OptReport& r)
  {
    return {{"theta", r.theta},
            {"rho", r.rho},
            {"eta", r.eta},
            {"k_opt", r.k_opt},
            {"eff_opt", r.eff_opt},
            {"k_ok", r.k_ok},
            {"eff_ok", r.eff_ok},
            {"no_thinning_optimal", r.no_thinning_optimal},
            {"theta_threshold", finite_or_null(r.theta_threshold)},
            {"eff_ceiling", r.eff_ceiling}};
  }

  OptReport opt_report_from_json(const nlohmann::json& j)
  {
    OptReport r;
    r.theta = j.at("theta").get<double>();
    r.rho = j.at("rho").get<double>();
    r.eta = j.at("eta").get<double>();
    r.k_opt = j.at("k_opt").get<long long>();
    r.eff_opt = j.at("eff_opt").get<double>();
    r.k_ok = j.at("k_ok").get<long long>();
    r.eff_ok = j.at("eff_ok").get<double>();
    r.no_thinning_optimal = j.at("no_thinning_optimal").get<bool>();
    r.theta_threshold = finite_or_inf(j.at("theta_threshold"));
    r.eff_ceiling = j.at("eff_ceiling").get<double>();
    return r;
  }

  nlohmann::json to_json(const Tables& t)
  {
    const Eigen::Index rows = t.k_opt.rows();
    const Eigen::Index cols = t.k_opt.cols();
    nlohmann::json k_opt = nlohmann::json::array();
    nlohmann::json eff = nlohmann::json::array();
    nlohmann::json k_ok = nlohmann::json::array();
    for (Eigen::Index i = 0; i < rows; ++i)
    {
      nlohmann::json r1 = nlohmann::json::array();
      nlohmann::json r2 = nlohmann::json::array();
      nlohmann::json r3 = nlohmann::json::array();
      for (Eigen::Index j = 0; j < cols; ++j)
      {
        r1.push_back(t.k_opt(i, j));
        r2.push_back(finite_or_null(t.eff_at_kopt(i, j)));
        r3.push_back(t.k_ok(i, j));
      }
      k_opt.push_back(std::move(r1));
      eff.push_back(std::move(r2));
      k_ok.push_back(std::move(r3));
    }

    nlohmann::json errors = nlohmann::json::array();
    for (const TableCellError& e : t.errors)
      errors.push_back({{"row", e.row}, {"col", e.col}, {"message", e.message}});

    return {{"eta", t.spec.eta},
            {"theta_values", t.spec.theta_values},
            {"rho_values", t.spec.rho_values},
            {"k_opt", std::move(k_opt)},
            {"eff", std::move(eff)},
            {"k_ok", std::move(k_ok)},
            {"errors", std::move(errors)}};
  }

  Tables tables_from_json(const nlohmann::json& j)
  {
    Tables t;
    t.spec.eta = j.at("eta").get<double>();
    t.spec.theta_values = j.at("theta_values").get<std::vector<double>>();
    t.spec.rho_values = j.at("rho_values").get<std::vector<double>>();

    const Eigen::Index rows = Eigen::Index(t.spec.theta_values.size());
    const Eigen::Index cols = Eigen::Index(t.spec.rho_values.size());
    t.k_opt.resize(rows, cols);
    t.eff_at_kopt.resize(rows, cols);
    t.k_ok.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index c = 0; c < cols; ++c)
      {
        const auto ii = std::size_t(i);
        const auto cc = std::size_t(c);
        t.k_opt(i, c) = j.at("k_opt").at(ii).at(cc).get<std::int64_t>();
        const nlohmann::json& cell = j.at("eff").at(ii).at(cc);
        t.eff_at_kopt(i, c) = cell.is_null()
                                  ? std::numeric_limits<double>::quiet_NaN()
                                  : cell.get<double>();
        t.k_ok(i, c) = j.at("k_ok").at(ii).at(cc).get<std::int64_t>();
      }
    for (const nlohmann::json& e : j.at("errors"))
      t.errors.push_back({e.at("row").get<Eigen::Index>(),
                          e.at("col").get<Eigen::Index>(),
                          e.at("message").get<std::string>()});
    return t;
  }

  nlohmann::json to_json(const BandReport& r)
  {
    nlohmann::json gain_sets = nlohmann::json::array();
    for (std::size_t i = 0; i < r.gains.size(); ++i)
    {
      nlohmann::json g = interval_json(r.gain_sets[i]);
      g["gain"] = r.gains[i];
      gain_sets.push_back(std::move(g));
    }
    return {{"rho_lo", r.band.rho_lo},
            {"rho_hi", r.band.rho_hi},
            {"theta", r.theta},
            {"k_search_cap", r.k_search_cap},
            {"gain_sets", std::move(gain_sets)},
            {"candidate_set", interval_json(r.candidate_set)}};
  }

  BandReport band_report_from_json(const nlohmann::json& j)
  {
    const RhoBand band(j.at("rho_lo").get<double>(), j.at("rho_hi").get<double>());
    BandReport r{band, j.at("theta").get<double>(),
                 j.at("k_search_cap").get<long long>(), {}, {}, {}};
    for (const nlohmann::json& g : j.at("gain_sets"))
    {
      r.gains.push_back(g.at("gain").get<double>());
      r.gain_sets.push_back(interval_from_json(g));
    }
    r.candidate_set = interval_from_json(j.at("candidate_set"));
    return r;
  }

  nlohmann::json to_json(const AnalyzeReport& r)
  {
    nlohmann::json checks = nlohmann::json::array();
    for (const HurtsVerdict& v : r.hurts_checks)
      checks.push_back({{"k", v.k}, {"hurts", v.hurts}});
    return {{"mode", r.mode},
            {"theta", r.theta},
            {"max_lag", r.max_lag},
            {"n", r.n},
            {"acf_lags", r.acf_lags},
            {"rho_hat", r.rho_hat},
            {"acf_sum", r.acf_sum},
            {"k_opt", r.k_opt},
            {"k_ok", r.k_ok},
            {"eff_opt", r.eff_opt},
            {"hurts_checks", std::move(checks)}};
  }

  AnalyzeReport analyze_report_from_json(const nlohmann::json& j)
  {
    AnalyzeReport r;
    r.mode = j.at("mode").get<std::string>();
    r.theta = j.at("theta").get<double>();
    r.max_lag = j.at("max_lag").get<long long>();
    r.n = j.at("n").get<long long>();
    r.acf_lags = j.at("acf_lags").get<long long>();
    r.rho_hat = j.at("rho_hat").get<double>();
    r.acf_sum = j.at("acf_sum").get<double>();
    r.k_opt = j.at("k_opt").get<long long>();
    r.k_ok = j.at("k_ok").get<long long>();
    r.eff_opt = j.at("eff_opt").get<double>();
    for (const nlohmann::json& v : j.at("hurts_checks"))
      r.hurts_checks.push_back({v.at("k").get<long long>(), v.at("hurts").get<bool>()});
    return r;
  }

  nlohmann::json to_json(const SimulationReport& r)
  {
    nlohmann::json records = nlohmann::json::array();
    for (const SimRecord& rec : r.records)
      records.push_back({{"k", rec.k},
                         {"n_k", rec.n_k},
                         {"var_hat", rec.var_hat},
                         {"se", rec.se},
                         {"eff_emp", rec.eff_emp},
                         {"eff_pred", rec.eff_pred},
                         {"flag", rec.flag}});
    return {{"config",
             {{"rho", r.config.rho},
              {"theta", r.config.theta},
              {"budget", r.config.budget.B},
              {"k_values", r.config.k_values},
              {"replications", r.config.replications},
              {"seed", r.config.seed},
              {"sigma2", r.config.sigma2}}},
            {"records", std::move(records)}};
  }

  SimulationReport simulation_report_from_json(const nlohmann::json& j)
  {
    const nlohmann::json& c = j.at("config");
    SimulationConfig cfg(c.at("rho").get<double>(), c.at("theta").get<double>(),
                         Budget(c.at("budget").get<double>()),
                         c.at("k_values").get<std::vector<long long>>(),
                         c.at("replications").get<long long>(),
                         c.at("seed").get<std::uint64_t>(),
                         c.at("sigma2").get<double>());
    SimulationReport r{std::move(cfg), {}};
    for (const nlohmann::json& rec : j.at("records"))
      r.records.push_back({rec.at("k").get<long long>(),
                           rec.at("n_k").get<long long>(),
                           rec.at("var_hat").get<double>(),
                           rec.at("se").get<double>(),
                           rec.at("eff_emp").get<double>(),
                           rec.at("eff_pred").get<double>(),
                           rec.at("flag").get<bool>()});
    return r;
  }

  // ---- renderers ----

  std::string render(const OptReport& r, OutputFormat format)
  {
    if (format == OutputFormat::json)
      return to_json(r).dump(2) + "\n";
    if (format == OutputFormat::csv)
    {
      std::ostringstream out;
      out << "theta,rho,eta,k_opt,eff_opt,k_ok,eff_ok,"
             "no_thinning_optimal,theta_threshold,eff_ceiling\n";
      out << fmt_g6(r.theta) << ',' << fmt_g6(r.rho) << ',' << fmt_g6(r.eta)
          << ',' << r.k_opt << ',' << fmt_g6(r.eff_opt) << ',' << r.k_ok << ','
          << fmt_g6(r.eff_ok) << ',' << (r.no_thinning_optimal ? 1 : 0) << ','
          << fmt_g6(r.theta_threshold) << ',' << fmt_g6(r.eff_ceiling) << '\n';
      return out.str();
    }

    std::ostringstream out;
    kv(out, "theta", fmt_g6(r.theta));
    kv(out, "rho", fmt_g6(r.rho));
    kv(out, "eta", fmt_g6(r.eta));
    kv(out, "k_opt", std::to_string(r.k_opt));
    kv(out, "eff(k_opt)", fmt_g6(r.eff_opt));
    kv(out, "k_ok", std::to_string(r.k_ok));
    kv(out, "eff(k_ok)", fmt_g6(r.eff_ok));
    kv(out, "no-thinning optimal", r.no_thinning_optimal ? "yes" : "no");
    kv(out, "theta threshold", fmt_g6(r.theta_threshold));
    kv(out, "eff ceiling (1+theta)", fmt_g6(r.eff_ceiling));
    return out.str();
  }

  std::string render(const Tables& t, OutputFormat format)
  {
    const Eigen::Index rows = t.k_opt.rows();
    const Eigen::Index cols = t.k_opt.cols();

    if (format == OutputFormat::json)
      return to_json(t).dump(2) + "\n";

    if (format == OutputFormat::csv)
    {
      std::ostringstream out;
      out << "table,theta,rho,value\n";
      const auto emit = [&](const char* name, auto cell) {
        for (Eigen::Index i = 0; i < rows; ++i)
          for (Eigen::Index j = 0; j < cols; ++j)
            out << name << ',' << fmt_g6(t.spec.theta_values[std::size_t(i)])
                << ',' << fmt_g6(t.spec.rho_values[std::size_t(j)]) << ','
                << cell(i, j) << '\n';
      };
      const auto int_cell = [&](const Eigen::ArrayXX<std::int64_t>& m) {
        return [&m](Eigen::Index i, Eigen::Index j) {
          return m(i, j) < 0 ? std::string("NA") : std::to_string(m(i, j));
        };
      };
      emit("k_opt", int_cell(t.k_opt));
      emit("eff", [&](Eigen::Index i, Eigen::Index j) {
        return std::isnan(t.eff_at_kopt(i, j)) ? std::string("NA")
                                               : fmt_f2(t.eff_at_kopt(i, j));
      });
      emit("k_ok", int_cell(t.k_ok));
      return out.str();
    }

    std::ostringstream out;
    const auto block = [&](const char* title, auto cell) {
      out << title << '\n';
      out << pad("theta\\rho", 10);
      for (Eigen::Index j = 0; j < cols; ++j)
        out << pad(fmt_g6(t.spec.rho_values[std::size_t(j)]), 10);
      out << '\n';
      for (Eigen::Index i = 0; i < rows; ++i)
      {
        out << pad(fmt_g6(t.spec.theta_values[std::size_t(i)]), 10);
        for (Eigen::Index j = 0; j < cols; ++j)
          out << pad(cell(i, j), 10);
        out << '\n';
      }
      out << '\n';
    };
    block("optimal thinning factor k_opt", [&](Eigen::Index i, Eigen::Index j) {
      return t.k_opt(i, j) < 0 ? std::string("NA") : std::to_string(t.k_opt(i, j));
    });
    block("efficiency at k_opt", [&](Eigen::Index i, Eigen::Index j) {
      return std::isnan(t.eff_at_kopt(i, j)) ? std::string("NA")
                                             : fmt_f2(t.eff_at_kopt(i, j));
    });
    block("smallest k_ok within 1-eta of the optimum",
          [&](Eigen::Index i, Eigen::Index j) {
            return t.k_ok(i, j) < 0 ? std::string("NA")
                                    : std::to_string(t.k_ok(i, j));
          });
    return out.str();
  }

  std::string render(const BandReport& r, OutputFormat format)
  {
    if (format == OutputFormat::json)
      return to_json(r).dump(2) + "\n";

    if (format == OutputFormat::csv)
    {
      std::ostringstream out;
      out << "set,gain,rho_lo,rho_hi,theta,k_cap,lo,hi,empty,hull_warning\n";
      const auto row = [&](const std::string& set, const std::string& gain,
                           const IntInterval& iv) {
        out << set << ',' << gain << ',' << fmt_g6(r.band.rho_lo) << ','
            << fmt_g6(r.band.rho_hi) << ',' << fmt_g6(r.theta) << ','
            << r.k_search_cap << ',' << iv.lo << ',' << iv.hi << ','
            << (iv.empty() ? 1 : 0) << ',' << (iv.hull_warning ? 1 : 0) << '\n';
      };
      for (std::size_t i = 0; i < r.gains.size(); ++i)
        row("gain", fmt_g6(r.gains[i]), r.gain_sets[i]);
      row("candidate", "", r.candidate_set);
      return out.str();
    }

    std::ostringstream out;
    kv(out, "band",
       "[" + fmt_g6(r.band.rho_lo) + ", " + fmt_g6(r.band.rho_hi) + "]");
    kv(out, "theta", fmt_g6(r.theta));
    kv(out, "k search cap", std::to_string(r.k_search_cap));
    for (std::size_t i = 0; i < r.gains.size(); ++i)
      kv(out, "gain >= " + fmt_g6(r.gains[i]), interval_text(r.gain_sets[i]));
    kv(out, "candidate set", interval_text(r.candidate_set));
    return out.str();
  }

  std::string render(const AnalyzeReport& r, OutputFormat format)
  {
    if (format == OutputFormat::json)
      return to_json(r).dump(2) + "\n";

    if (format == OutputFormat::csv)
    {
      std::ostringstream out;
      out << "mode,n,theta,max_lag,acf_lags,rho_hat,acf_sum,k_opt,k_ok,eff_opt";
      for (const HurtsVerdict& v : r.hurts_checks)
        out << ",hurts_k" << v.k;
      out << '\n';
      out << r.mode << ',' << r.n << ',' << fmt_g6(r.theta) << ',' << r.max_lag
          << ',' << r.acf_lags << ',' << fmt_g6(r.rho_hat) << ','
          << fmt_g6(r.acf_sum) << ',' << r.k_opt << ',' << r.k_ok << ','
          << fmt_g6(r.eff_opt);
      for (const HurtsVerdict& v : r.hurts_checks)
        out << ',' << (v.hurts ? 1 : 0);
      out << '\n';
      return out.str();
    }

    std::ostringstream out;
    kv(out, "mode", r.mode);
    kv(out, "series length", std::to_string(r.n));
    kv(out, "theta", fmt_g6(r.theta));
    kv(out, "max lag", std::to_string(r.max_lag));
    kv(out, "acf lags kept", std::to_string(r.acf_lags));
    kv(out, "rho_hat (lag 1)", fmt_g6(r.rho_hat));
    kv(out, "acf sum R", fmt_g6(r.acf_sum));
    kv(out, "recommended k_opt", std::to_string(r.k_opt));
    kv(out, "smallest ok k_ok", std::to_string(r.k_ok));
    kv(out, "predicted gain", fmt_g6(r.eff_opt));
    for (const HurtsVerdict& v : r.hurts_checks)
      kv(out, "thinning at k=" + std::to_string(v.k),
         v.hurts ? "hurts (efford < 1)" : "helps or ties (efford >= 1)");
    return out.str();
  }

  std::string render(const SimulationReport& r, OutputFormat format)
  {
    if (format == OutputFormat::json)
      return to_json(r).dump(2) + "\n";

    if (format == OutputFormat::csv)
    {
      std::ostringstream out;
      out << "k,n_k,var_hat,se,eff_emp,eff_pred,flag\n";
      for (const SimRecord& rec : r.records)
        out << rec.k << ',' << rec.n_k << ',' << fmt_g6(rec.var_hat) << ','
            << fmt_g6(rec.se) << ',' << fmt_g6(rec.eff_emp) << ','
            << fmt_g6(rec.eff_pred) << ',' << (rec.flag ? 1 : 0) << '\n';
      return out.str();
    }

    std::ostringstream out;
    out << "rho " << fmt_g6(r.config.rho) << "  theta " << fmt_g6(r.config.theta)
        << "  budget " << fmt_g6(r.config.budget.B) << "  replications "
        << r.config.replications << "  seed " << r.config.seed << "  sigma2 "
        << fmt_g6(r.config.sigma2) << "\n\n";
    out << pad("k", 8) << pad("n_k", 10) << pad("var_hat", 14) << pad("se", 12)
        << pad("eff_emp", 12) << pad("eff_pred", 12) << "flag\n";
    for (const SimRecord& rec : r.records)
      out << pad(std::to_string(rec.k), 8) << pad(std::to_string(rec.n_k), 10)
          << pad(fmt_g6(rec.var_hat), 14) << pad(fmt_g6(rec.se), 12)
          << pad(fmt_g6(rec.eff_emp), 12) << pad(fmt_g6(rec.eff_pred), 12)
          << (rec.flag ? "FLAG" : "-") << '\n';
    return out.str();
  }
}
