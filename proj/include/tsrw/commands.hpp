#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "tsrw/config.hpp"

namespace tsrw::cli {

enum ExitCode : int { kOk = 0, kDiagnosticFailed = 1, kConfigError = 2, kNumericError = 3 };

struct Options {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

int cmd_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out);
int cmd_paths(const ExperimentConfig& cfg, const std::filesystem::path& out);
int cmd_cf_check(const ExperimentConfig& cfg, const std::filesystem::path& out);
int cmd_diagnose(const ExperimentConfig& cfg, const std::filesystem::path& out);
int cmd_density(const ExperimentConfig& cfg, const std::filesystem::path& out);

/// Loads the config, applies the overrides and runs `command`. Errors are
/// reported as one JSON object on `err` and mapped to exit codes.
int run(const std::string& command, const Options& opts, std::ostream& err);

/// Writes rows as `replicate,x_1..x_d` with %.17g formatting.
void write_samples_csv(const std::filesystem::path& file, const SampleBatch& batch);

/// Reads a samples.csv back into a row-major matrix; returns the dimension.
std::size_t read_samples_csv(const std::filesystem::path& file, std::vector<double>& values);

}  // namespace tsrw::cli
