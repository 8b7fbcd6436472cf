#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsrw/analytics.hpp"
#include "tsrw/heavy_tail.hpp"
#include "tsrw/spectral_measure.hpp"
#include "tsrw/tempering.hpp"
#include "tsrw/walk_engine.hpp"

namespace tsrw {

/// Parsed experiment description. Model objects are rebuilt on demand from the
/// validated fields so the struct stays copyable.
struct ExperimentConfig {
  double alpha = 1.5;
  RadialVariant variant = RadialVariant::ExactPareto;
  std::vector<ParetoComponent> components{{1.0, 1.0}};
  std::vector<std::vector<double>> directions;
  std::vector<double> weights;
  TemperingFamily family = TemperingFamily::NoTempering;
  std::vector<double> rates;  // per merged atom, or one broadcast value
  QuadratureSettings quadrature;
  WalkPlan plan;
  std::string outputs = ".";
  nlohmann::json diagnostics = nlohmann::json::array();
  nlohmann::json cf_check = nlohmann::json::object();
  nlohmann::json density = nlohmann::json::object();
  std::vector<std::string> warnings;

  SpectralMeasure sigma() const;
  JumpModel model() const;
  TemperingSpec tempering() const;
  TemperingSpec tempering_with_alpha(double alpha) const;
};

/// Throws ConfigError with a stable code on any schema violation.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace tsrw
