#include <iostream>

#include <CLI11.hpp>

#include "tsrw/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Tempered random walk simulator"};
  app.require_subcommand(1);

  tsrw::cli::Options opts;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  const char* names[][2] = {
      {"simulate", "normalized row sums (samples.csv, meta.json)"},
      {"paths", "partial sums on the plan time grid (paths.csv, meta.json)"},
      {"cf-check", "empirical vs theoretical characteristic function (cf_table.csv, report.json)"},
      {"diagnose", "vague convergence, UAN and regularity checks (report.json)"},
      {"density", "1-d density by Fourier inversion (density.csv)"},
  };
  for (const auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "experiment config (JSON)")->required();
    sub->add_option("--out", out, "output directory (overrides outputs)");
    sub->add_option("--seed", seed, "seed (overrides plan.seed)");
    sub->add_option("--threads", threads, "worker threads; never changes output bytes")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << R"({"error":{"code":"usage","message":)" << nlohmann::json(e.what()).dump()
              << "}}" << std::endl;
    return tsrw::cli::kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  opts.config = config;
  if (sub->count("--out")) opts.out = out;
  if (sub->count("--seed")) opts.seed = seed;
  if (sub->count("--threads")) opts.threads = threads;
  return tsrw::cli::run(sub->get_name(), opts, std::cerr);
}
