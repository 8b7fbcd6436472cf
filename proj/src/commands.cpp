#include "tsrw/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tsrw/error.hpp"

namespace tsrw::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void append_number(std::string& s, double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  s.append(buf, static_cast<std::size_t>(len));
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("output_unwritable", "cannot write " + file.string());
  out << text;
  if (!out) throw ConfigError("output_unwritable", "failed writing " + file.string());
}

void write_json(const fs::path& file, const json& j) { write_text(file, j.dump(2) + "\n"); }

std::string header(const char* lead, std::size_t dim) {
  std::string h = lead;
  for (std::size_t k = 1; k <= dim; ++k) h += ",x_" + std::to_string(k);
  return h + "\n";
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json batch_meta(const ExperimentConfig& cfg, const SampleBatch& b, double elapsed) {
  return {{"n", b.n},
          {"v_n", b.v_n},
          {"a_n", b.centering},
          {"centering", to_string(b.mode)},
          {"seed", b.seed},
          {"replicates", cfg.plan.replicates},
          {"dim", b.dim},
          {"elapsed_seconds", elapsed},
          {"warnings", cfg.warnings}};
}

Convention default_convention(const ExperimentConfig& cfg) {
  switch (cfg.plan.centering) {
    case Centering::None: return Convention::DriftFree;
    case Centering::TruncatedMean: return Convention::Truncated;
    case Centering::JumpMean: return Convention::MeanZero;
  }
  return Convention::Truncated;
}

Convention section_convention(const ExperimentConfig& cfg, const json& section) {
  if (section.contains("convention")) {
    return convention_from_string(section.at("convention").get<std::string>());
  }
  return default_convention(cfg);
}

// "auto": the mean m for MeanZero with a tempered family, zero otherwise.
std::vector<double> resolve_drift(const json& section, const LevyExponent& L) {
  const std::size_t d = L.dim();
  if (!section.contains("drift") || (section.at("drift").is_string() &&
                                      section.at("drift").get<std::string>() == "auto")) {
    if (L.convention() == Convention::MeanZero &&
        L.spec().family() != TemperingFamily::NoTempering) {
      return tempered_mean(L.sigma(), L.spec(), L.quadrature());
    }
    return std::vector<double>(d, 0.0);
  }
  const json& v = section.at("drift");
  if (v.is_number()) {
    if (d != 1) throw ConfigError("grid_mismatch", "scalar drift needs d = 1");
    return {v.get<double>()};
  }
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& x : v) out.push_back(x.get<double>());
    if (out.size() != d) throw ConfigError("grid_mismatch", "drift dimension differs from sigma");
    return out;
  }
  throw ConfigError("config_invalid", "drift must be \"auto\", a number or an array");
}

json report(const std::string& test, json parameters, double statistic, json threshold, bool pass) {
  return {{"test", test},
          {"parameters", std::move(parameters)},
          {"statistic", statistic},
          {"threshold", std::move(threshold)},
          {"pass", pass}};
}

double sector_bound(const json& v) {
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
    throw ConfigError("diagnostic_invalid", "sector bound must be a number or \"inf\"");
  }
  return v.get<double>();
}

json run_vague(const ExperimentConfig& cfg, const json& d) {
  const JumpModel model = cfg.model();
  const TemperingSpec spec = cfg.tempering();
  const std::uint64_t n = d.value("n", cfg.plan.n);
  const std::uint64_t draws = d.value("draws", std::uint64_t{1'000'000});
  const std::uint64_t seed = d.value("seed", cfg.plan.seed);
  const double tolerance = d.value("tolerance", 0.05);
  std::vector<AnnularSector> sets;
  if (!d.contains("sets") || !d.at("sets").is_array()) {
    throw ConfigError("diagnostic_invalid", "vague_convergence needs a 'sets' array");
  }
  for (const auto& s : d.at("sets")) {
    AnnularSector a;
    a.r1 = s.at("r1").get<double>();
    a.r2 = sector_bound(s.contains("r2") ? s.at("r2") : json());
    if (s.contains("atoms")) a.atoms = s.at("atoms").get<std::vector<std::size_t>>();
    sets.push_back(a);
  }
  const auto rows = vague_convergence_table(model, spec, n, sets, draws, seed, cfg.plan.threads);
  json table = json::array();
  json warnings = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    table.push_back({{"r1", r.set.r1},
                     {"r2", std::isinf(r.set.r2) ? json("inf") : json(r.set.r2)},
                     {"atoms", r.set.atoms},
                     {"hits", r.hits},
                     {"estimate", r.estimate},
                     {"target", r.target},
                     {"relative_error", r.relative_error},
                     {"std_error", r.std_error},
                     {"under_sampled", r.under_sampled}});
    if (r.under_sampled) {
      warnings.push_back("set " + std::to_string(i) + " is under-sampled (" +
                         std::to_string(r.hits) + " hits)");
    } else {
      worst = std::max(worst, r.relative_error);
    }
  }
  json rep = report("vague_convergence", {{"n", n}, {"draws", draws}, {"seed", seed}}, worst,
                    tolerance, worst <= tolerance);
  rep["table"] = table;
  rep["warnings"] = warnings;
  return rep;
}

json run_uan(const ExperimentConfig& cfg, const json& d) {
  const JumpModel model = cfg.model();
  const TemperingSpec spec = cfg.tempering();
  const std::uint64_t n = d.value("n", cfg.plan.n);
  const double band = d.value("band", 0.15);
  std::vector<double> deltas;
  if (d.contains("deltas")) {
    deltas = d.at("deltas").get<std::vector<double>>();
  } else {
    for (int i = 0; i < 10; ++i) deltas.push_back(0.05 * std::pow(20.0, i / 9.0));
    deltas.back() = 1.0;
  }
  const UanProfile prof = uan_profile(model, spec, n, deltas);
  const double expected = 2.0 - cfg.alpha;
  json rep = report("uan_profile", {{"n", n}, {"deltas", deltas}, {"expected_slope", expected}},
                    prof.slope, band, std::abs(prof.slope - expected) <= band);
  rep["values"] = prof.values;
  return rep;
}

json run_regularity(const ExperimentConfig& cfg, const json& d) {
  const TemperingSpec spec = cfg.tempering();
  const std::size_t atoms = cfg.sigma().size();
  const RegularityReport r = d.contains("beta")
                                 ? verify_tempering_regularity(spec, atoms, d.at("beta").get<double>())
                                 : find_regularity_exponent(spec, atoms);
  json rep = report("regularity", {{"beta", r.beta}}, r.sup_value, nullptr, r.bounded);
  rep["growth_ratio"] = std::isfinite(r.growth_ratio) ? json(r.growth_ratio) : json("inf");
  rep["bounded"] = r.bounded;
  return rep;
}

}  // namespace

void write_samples_csv(const fs::path& file, const SampleBatch& batch) {
  std::string s = header("replicate", batch.dim);
  s.reserve(s.size() + batch.values.size() * 26);
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    s += std::to_string(r);
    for (std::size_t k = 0; k < batch.dim; ++k) {
      s += ',';
      append_number(s, batch.values[r * batch.dim + k]);
    }
    s += '\n';
  }
  write_text(file, s);
}

std::size_t read_samples_csv(const fs::path& file, std::vector<double>& values) {
  std::ifstream in(file);
  if (!in) throw ConfigError("samples_unreadable", "cannot read " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("samples_invalid", "empty samples file");
  std::size_t columns = 1;
  for (char c : line) columns += c == ',';
  if (columns < 2) throw ConfigError("samples_invalid", "samples file needs x columns");
  const bool with_time = line.rfind("replicate,t,", 0) == 0;
  const std::size_t skip = with_time ? 2 : 1;
  const std::size_t dim = columns - skip;
  values.clear();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(row, cell, ',')) {
      if (col >= skip) values.push_back(std::stod(cell));
      ++col;
    }
    if (col != columns) throw ConfigError("grid_mismatch", "samples row has the wrong width");
  }
  if (values.empty()) throw ConfigError("samples_invalid", "samples file has no rows");
  return dim;
}

int cmd_simulate(const ExperimentConfig& cfg, const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  const SampleBatch batch = simulate_rowsum(cfg.plan, cfg.model(), cfg.tempering());
  write_samples_csv(out / "samples.csv", batch);
  write_json(out / "meta.json", batch_meta(cfg, batch, seconds_since(start)));
  return kOk;
}

int cmd_paths(const ExperimentConfig& cfg, const fs::path& out) {
  if (cfg.plan.time_grid.empty()) throw ConfigError("time_grid_missing", "paths need plan.time_grid");
  const auto start = std::chrono::steady_clock::now();
  const auto batches = simulate_paths(cfg.plan, cfg.model(), cfg.tempering());
  const std::size_t dim = batches.front().dim;
  std::string s = header("replicate,t", dim);
  for (std::size_t r = 0; r < cfg.plan.replicates; ++r) {
    for (const auto& b : batches) {
      s += std::to_string(r);
      s += ',';
      append_number(s, b.t);
      for (std::size_t k = 0; k < dim; ++k) {
        s += ',';
        append_number(s, b.values[r * dim + k]);
      }
      s += '\n';
    }
  }
  write_text(out / "paths.csv", s);
  json meta = batch_meta(cfg, batches.front(), seconds_since(start));
  meta["time_grid"] = cfg.plan.time_grid;
  write_json(out / "meta.json", meta);
  return kOk;
}

int cmd_cf_check(const ExperimentConfig& cfg, const fs::path& out) {
  const json& c = cfg.cf_check;
  const double threshold = c.value("threshold", 0.05);
  const double theory_alpha = c.value("alpha_override", cfg.alpha);
  const bool self_test = c.value("self_test", false);
  const Convention conv = section_convention(cfg, c);
  const LevyExponent L(cfg.sigma(), cfg.tempering_with_alpha(theory_alpha), conv, cfg.quadrature);
  const auto drift = resolve_drift(c, L);
  const CFGrid grid = default_cf_grid(L.dim(), c.value("half_width", 5.0));

  std::vector<std::complex<double>> theory;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = grid.point(i);
    double shift = 0.0;
    for (std::size_t k = 0; k < drift.size(); ++k) shift += drift[k] * p[k];
    theory.push_back(std::exp(L(p) + std::complex<double>(0.0, shift)));
  }

  CFGrid emp = grid;
  std::string source;
  std::size_t rows = 0;
  if (self_test) {
    emp.values = theory;
    source = "self_test";
  } else if (c.contains("samples")) {
    std::vector<double> values;
    const std::size_t dim = read_samples_csv(c.at("samples").get<std::string>(), values);
    if (dim != L.dim()) throw ConfigError("grid_mismatch", "samples dimension differs from sigma");
    emp = empirical_cf(values, dim, grid);
    rows = values.size() / dim;
    source = c.at("samples").get<std::string>();
  } else {
    const SampleBatch batch = simulate_rowsum(cfg.plan, cfg.model(), cfg.tempering());
    emp = empirical_cf(batch, grid);
    rows = batch.rows();
    source = "simulation";
  }
  const CFDistance dist = cf_distance(emp, theory);

  std::string table;
  for (std::size_t k = 1; k <= grid.dim; ++k) table += "lambda_" + std::to_string(k) + ",";
  table += "re_emp,im_emp,re_theory,im_theory,abs_err\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (double x : grid.point(i)) {
      append_number(table, x);
      table += ',';
    }
    for (double x : {emp.values[i].real(), emp.values[i].imag(), theory[i].real(),
                     theory[i].imag(), dist.per_point[i]}) {
      append_number(table, x);
      table += ',';
    }
    table.back() = '\n';
  }
  write_text(out / "cf_table.csv", table);

  const bool pass = dist.sup_abs <= threshold;
  json params = {{"convention", to_string(conv)},
                 {"alpha", theory_alpha},
                 {"drift", drift},
                 {"source", source},
                 {"rows", rows},
                 {"grid_points", grid.size()}};
  write_json(out / "report.json", report("cf_check", params, dist.sup_abs, threshold, pass));
  return pass ? kOk : kDiagnosticFailed;
}

int cmd_diagnose(const ExperimentConfig& cfg, const fs::path& out) {
  json checks = json::array();
  int failed = 0;
  for (const auto& d : cfg.diagnostics) {
    const std::string type = d.value("type", std::string());
    json rep;
    if (type == "vague_convergence") {
      rep = run_vague(cfg, d);
    } else if (type == "uan_profile") {
      rep = run_uan(cfg, d);
    } else if (type == "regularity") {
      rep = run_regularity(cfg, d);
    } else {
      throw ConfigError("diagnostic_invalid", "unknown diagnostic type '" + type + "'");
    }
    if (!rep.at("pass").get<bool>()) ++failed;
    checks.push_back(std::move(rep));
  }
  json rep = report("diagnose", {{"count", checks.size()}}, failed, 0, failed == 0);
  rep["checks"] = checks;
  write_json(out / "report.json", rep);
  return failed == 0 ? kOk : kDiagnosticFailed;
}

int cmd_density(const ExperimentConfig& cfg, const fs::path& out) {
  const json& c = cfg.density;
  const SpectralMeasure sigma = cfg.sigma();
  if (sigma.dim() != 1) throw ConfigError("dimension_unsupported", "density needs d = 1");
  const Convention conv = section_convention(cfg, c);
  const LevyExponent L(sigma, cfg.tempering(), conv, cfg.quadrature);
  const auto drift = resolve_drift(c, L);
  const double x_min = c.value("x_min", -10.0);
  const double x_max = c.value("x_max", 10.0);
  const std::size_t points = c.value("points", std::size_t{401});
  const DensityResult res = density_1d(L, drift.front(), x_min, x_max, points);

  std::string s = "x,density\n";
  for (std::size_t i = 0; i < res.x.size(); ++i) {
    append_number(s, res.x[i]);
    s += ',';
    append_number(s, res.density[i]);
    s += '\n';
  }
  write_text(out / "density.csv", s);
  write_json(out / "density_meta.json", {{"convention", to_string(conv)},
                                         {"drift", drift.front()},
                                         {"mass_defect", res.mass_defect},
                                         {"clipped_mass", res.clipped_mass},
                                         {"window", res.window},
                                         {"step", res.step}});
  return kOk;
}

int run(const std::string& command, const Options& opts, std::ostream& err) {
  auto error = [&](const std::string& code, const std::string& message, json extra = json::object()) {
    json e = {{"code", code}, {"message", message}};
    e.update(extra);
    err << json{{"error", e}}.dump() << std::endl;
  };
  try {
    ExperimentConfig cfg = load_config(opts.config);
    if (opts.seed) {
      if (cfg.plan.centering_method.seed == (cfg.plan.seed ^ 0x9E3779B97F4A7C15ull)) {
        cfg.plan.centering_method.seed = *opts.seed ^ 0x9E3779B97F4A7C15ull;
      }
      cfg.plan.seed = *opts.seed;
    }
    if (opts.threads) cfg.plan.threads = *opts.threads;
    const fs::path out = opts.out ? *opts.out : fs::path(cfg.outputs);
    fs::create_directories(out);
    if (command == "simulate") return cmd_simulate(cfg, out);
    if (command == "paths") return cmd_paths(cfg, out);
    if (command == "cf-check") return cmd_cf_check(cfg, out);
    if (command == "diagnose") return cmd_diagnose(cfg, out);
    if (command == "density") return cmd_density(cfg, out);
    error("usage", "unknown command '" + command + "'");
    return kConfigError;
  } catch (const ConfigError& e) {
    error(e.code(), e.what());
    return kConfigError;
  } catch (const DomainError& e) {
    error(e.code(), e.what());
    return kConfigError;
  } catch (const NumericError& e) {
    error("numeric", e.what(), {{"achieved_error", e.achieved_error()}});
    return kNumericError;
  } catch (const nlohmann::json::exception& e) {
    error("config_invalid", e.what());
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    error("output_unwritable", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    error("config_invalid", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    error("internal", e.what());
    return kNumericError;
  }
}

}  // namespace tsrw::cli
