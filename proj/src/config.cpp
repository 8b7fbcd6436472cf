#include "tsrw/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tsrw/error.hpp"

namespace tsrw {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) { throw ConfigError(code, msg); }

const json& require(const json& obj, const char* key, const std::string& code) {
  if (!obj.is_object() || !obj.contains(key)) fail(code, std::string("missing field '") + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& what, const std::string& code) {
  if (!v.is_number()) fail(code, what + " must be a number");
  return v.get<double>();
}

std::uint64_t count(const json& v, const std::string& what, const std::string& code) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
  }
  fail(code, what + " must be a non-negative integer");
}

std::vector<double> number_list(const json& v, const std::string& what, const std::string& code) {
  if (!v.is_array()) fail(code, what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, what, code));
  return out;
}

void parse_model(const json& m, ExperimentConfig& cfg) {
  cfg.alpha = number(require(m, "alpha", "model_invalid"), "model.alpha", "model_invalid");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 2.0)) fail("alpha_invalid", "alpha must lie in (0, 2)");
  const double x_m = m.contains("x_m") ? number(m.at("x_m"), "model.x_m", "model_invalid") : 1.0;
  const std::string variant = m.value("radial_variant", std::string("ExactPareto"));
  if (variant == "ExactPareto") {
    cfg.variant = RadialVariant::ExactPareto;
    cfg.components = {{x_m, 1.0}};
  } else if (variant == "MixedScalePareto") {
    cfg.variant = RadialVariant::MixedScalePareto;
    cfg.components.clear();
    const json& comps = require(m, "components", "model_invalid");
    if (!comps.is_array() || comps.empty()) fail("model_invalid", "components must be a non-empty array");
    for (const auto& c : comps) {
      cfg.components.push_back({number(require(c, "scale", "model_invalid"), "scale", "model_invalid"),
                                number(require(c, "weight", "model_invalid"), "weight", "model_invalid")});
    }
  } else {
    fail("model_invalid", "unknown radial_variant '" + variant + "'");
  }
}

void parse_sigma(const json& s, ExperimentConfig& cfg) {
  if (!s.is_array() || s.empty()) fail("sigma_invalid", "sigma must be a non-empty array of atoms");
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto dir = number_list(require(s[i], "direction", "sigma_invalid"), "direction", "sigma_invalid");
    const double w = number(require(s[i], "weight", "sigma_invalid"), "weight", "sigma_invalid");
    double deviation = 0.0;
    const Direction d = Direction::normalized(dir, &deviation);
    if (deviation > 1e-6) {
      std::ostringstream msg;
      msg << "sigma atom " << i << " direction normalized (norm deviated by " << deviation << ")";
      cfg.warnings.push_back(msg.str());
    }
    cfg.directions.emplace_back(d.coords().begin(), d.coords().end());
    cfg.weights.push_back(w);
  }
}

void parse_tempering(const json& t, ExperimentConfig& cfg) {
  cfg.family = tempering_family_from_string(
      require(t, "family", "tempering_invalid").get<std::string>());
  if (t.contains("alpha")) {
    const double a = number(t.at("alpha"), "tempering.alpha", "tempering_invalid");
    if (a != cfg.alpha) fail("alpha_mismatch", "tempering.alpha differs from model.alpha");
  }
  if (t.contains("quadrature")) {
    const json& q = t.at("quadrature");
    cfg.quadrature.abs_tol = q.value("abs_tol", cfg.quadrature.abs_tol);
    cfg.quadrature.rel_tol = q.value("rel_tol", cfg.quadrature.rel_tol);
    cfg.quadrature.max_subdivisions = q.value("max_subdivisions", cfg.quadrature.max_subdivisions);
    cfg.quadrature.validate();
  }
  if (cfg.family == TemperingFamily::NoTempering) return;
  const json& r = require(t, "rates", "tempering_invalid");
  const std::size_t atoms = cfg.directions.size();
  if (r.is_number()) {
    cfg.rates = {r.get<double>()};
  } else if (r.is_array()) {
    cfg.rates = number_list(r, "tempering.rates", "tempering_invalid");
    if (cfg.rates.size() != atoms) fail("tempering_invalid", "one rate per sigma atom is required");
  } else if (r.is_object()) {
    cfg.rates.assign(atoms, std::nan(""));
    for (const auto& [key, value] : r.items()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        fail("tempering_invalid", "rate key '" + key + "' is not an atom index");
      }
      if (idx >= atoms) fail("tempering_invalid", "rate refers to missing atom " + key);
      cfg.rates[idx] = number(value, "rate", "tempering_invalid");
    }
    for (double x : cfg.rates) {
      if (std::isnan(x)) fail("tempering_invalid", "every sigma atom needs a rate");
    }
  } else {
    fail("tempering_invalid", "rates must be a number, an array or an index map");
  }
}

void parse_plan(const json& p, ExperimentConfig& cfg) {
  WalkPlan& plan = cfg.plan;
  plan.n = count(require(p, "n", "plan_invalid"), "plan.n", "plan_invalid");
  plan.replicates = count(require(p, "replicates", "plan_invalid"), "plan.replicates", "plan_invalid");
  plan.centering = centering_from_string(p.value("centering", std::string("None")));
  if (p.contains("v_override") && !p.at("v_override").is_null()) {
    plan.v_override = number(p.at("v_override"), "plan.v_override", "plan_invalid");
  }
  if (p.contains("seed")) plan.seed = count(p.at("seed"), "plan.seed", "plan_invalid");
  if (p.contains("time_grid")) plan.time_grid = number_list(p.at("time_grid"), "plan.time_grid", "plan_invalid");
  const std::string method = p.value("centering_method", std::string("Auto"));
  if (method == "Auto") {
    plan.centering_method.kind = CenteringMethod::Kind::Auto;
  } else if (method == "Quadrature") {
    plan.centering_method.kind = CenteringMethod::Kind::Quadrature;
  } else if (method == "MonteCarlo") {
    plan.centering_method.kind = CenteringMethod::Kind::MonteCarlo;
  } else {
    fail("plan_invalid", "unknown centering_method '" + method + "'");
  }
  if (p.contains("mc_draws")) plan.centering_method.draws = count(p.at("mc_draws"), "plan.mc_draws", "plan_invalid");
  plan.centering_method.seed =
      p.contains("mc_seed") ? count(p.at("mc_seed"), "plan.mc_seed", "plan_invalid") : plan.seed ^ 0x9E3779B97F4A7C15ull;
  if (p.contains("threads")) plan.threads = static_cast<unsigned>(count(p.at("threads"), "plan.threads", "plan_invalid"));
  plan.validate();
}

}  // namespace

SpectralMeasure ExperimentConfig::sigma() const {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    atoms.push_back({Direction::normalized(directions[i]), weights[i]});
  }
  return SpectralMeasure(std::move(atoms));
}

JumpModel ExperimentConfig::model() const {
  if (variant == RadialVariant::ExactPareto) {
    return JumpModel::exact_pareto(alpha, components.front().scale, sigma());
  }
  return JumpModel::mixed_scale_pareto(alpha, components, sigma());
}

TemperingSpec ExperimentConfig::tempering() const { return tempering_with_alpha(alpha); }

TemperingSpec ExperimentConfig::tempering_with_alpha(double a) const {
  switch (family) {
    case TemperingFamily::ConditionallyExponential:
      return TemperingSpec::conditionally_exponential(a, rates, quadrature);
    case TemperingFamily::ExponentialQ: return TemperingSpec::exponential_q(a, rates, quadrature);
    case TemperingFamily::NoTempering: return TemperingSpec::none(a, quadrature);
    case TemperingFamily::CustomQ: break;
  }
  fail("tempering_invalid", "CustomQ is only available through the library");
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) fail("config_invalid", "config must be a JSON object");
  ExperimentConfig cfg;
  parse_model(require(j, "model", "config_invalid"), cfg);
  parse_sigma(require(j, "sigma", "config_invalid"), cfg);
  if (j.contains("tempering")) {
    parse_tempering(j.at("tempering"), cfg);
  } else {
    cfg.family = TemperingFamily::NoTempering;
  }
  if (j.contains("plan")) parse_plan(j.at("plan"), cfg);
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    if (o.is_string()) {
      cfg.outputs = o.get<std::string>();
    } else if (o.is_object() && o.contains("directory")) {
      cfg.outputs = o.at("directory").get<std::string>();
    } else {
      fail("config_invalid", "outputs must be a directory path");
    }
  }
  if (j.contains("diagnostics")) {
    if (!j.at("diagnostics").is_array()) fail("config_invalid", "diagnostics must be an array");
    cfg.diagnostics = j.at("diagnostics");
  }
  if (j.contains("cf_check")) cfg.cf_check = j.at("cf_check");
  if (j.contains("density")) cfg.density = j.at("density");

  // Build once so that every structural error surfaces at load time.
  const SpectralMeasure sigma = cfg.sigma();
  if (sigma.size() != cfg.directions.size() && cfg.rates.size() > 1) {
    fail("tempering_invalid", "per-atom rates are ambiguous when sigma has duplicate directions");
  }
  if (sigma.size() != cfg.directions.size()) {
    cfg.warnings.push_back("duplicate sigma directions merged");
  }
  cfg.model();
  cfg.tempering().check_compatible(sigma);
  if (cfg.plan.centering == Centering::JumpMean && !(cfg.alpha > 1.0)) {
    throw DomainError("mean_undefined", "JumpMean centering needs alpha > 1");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("config_unreadable", "cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("config_parse", e.what());
  }
  return parse_config(j);
}

}  // namespace tsrw
