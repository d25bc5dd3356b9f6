#include "hslo/cli/app.hpp"

#include <CLI11.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hslo/cli/commands.hpp"
#include "hslo/error.hpp"

namespace hslo::cli {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heat-source layout simulation and optimization toolkit", "hslo"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  bool quiet = false;
  app.add_option("-c,--config", config_path, "INI file with [domain] [scheme] [mnslo] [moea] sections");
  app.add_option("--set", overrides, "Override one key, e.g. --set mnslo.epsilon=0.001")
      ->type_size(1)
      ->allow_extra_args(false);
  app.add_option("--seed", seed, "Root seed for every random stream")->capture_default_str();
  app.add_option("--workers", workers, "Parallel evaluations")->capture_default_str();
  app.add_flag("-q,--quiet", quiet, "No progress on standard error");

  std::string evaluator;
  std::optional<std::size_t> cache;

  auto* simulate = app.add_subcommand("simulate", "Solve one layout and print its peak temperature");
  std::string layout_path;
  std::vector<std::string> field_outputs;
  simulate->add_option("layout", layout_path, "Layout CSV (cell,intensity)")->required();
  simulate->add_option("-o,--output", field_outputs, "Field output (.csv or HSLF), repeatable")
      ->type_size(1)
      ->allow_extra_args(false);

  auto* render = app.add_subcommand("render", "Render a field file to a binary PPM image");
  std::string field_path;
  std::string ppm_path;
  std::string palette = "heat";
  render->add_option("field", field_path, "Field file (HSLF or CSV)")->required();
  render->add_option("image", ppm_path, "Output .ppm")->required();
  render->add_option("--palette", palette, "gray, heat or coolwarm")->capture_default_str();

  auto* generate = app.add_subcommand("generate", "Generate a layout/field dataset");
  std::string dataset_dir;
  std::uint64_t count = 100;
  generate->add_option("-o,--out", dataset_dir, "Dataset directory")->required();
  generate->add_option("-n,--count", count, "Number of samples")->capture_default_str();

  auto* optimize = app.add_subcommand("optimize", "Run the multimodal layout search");
  std::string optimize_dir;
  optimize->add_option("-o,--out", optimize_dir, "Output directory")->required();
  optimize->add_option("--evaluator", evaluator, "exact or coarse:R");
  optimize->add_option("--cache", cache, "Wrap the evaluator in an LRU cache of this size");

  auto* nas = app.add_subcommand("nas", "Run the architecture search");
  std::string nas_dir;
  nas->add_option("-o,--out", nas_dir, "Output directory")->required();

  auto* benchmark = app.add_subcommand("benchmark", "Multi-seed optimization or surrogate accuracy tables");
  std::string bench_dir;
  BenchmarkOptions bench;
  benchmark->add_option("-o,--out", bench_dir, "Output directory")->required();
  benchmark->add_option("--kind", bench.kind, "optimize or surrogate")->capture_default_str();
  benchmark->add_option("--seeds", bench.seeds, "Consecutive seeds starting at --seed")->capture_default_str();
  benchmark->add_option("--threshold", bench.threshold_K, "Archive count threshold in K")->capture_default_str();
  benchmark->add_option("--samples", bench.samples, "Surrogate comparison layouts")->capture_default_str();
  benchmark->add_option("--evaluator", evaluator, "exact or coarse:R");
  benchmark->add_option("--cache", cache, "Wrap the evaluator in an LRU cache of this size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Context ctx{RunConfig{}, out, err, quiet};
  try {
    if (!config_path.empty()) ctx.config.load_file(config_path);
    for (const auto& o : overrides) ctx.config.set(o);
    if (!evaluator.empty()) ctx.config.evaluator = evaluator;
    if (cache) ctx.config.cache_capacity = *cache;
    ctx.config.seed = seed;
    ctx.config.workers = workers;
    ctx.config.finalize();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (simulate->parsed()) {
    std::vector<std::filesystem::path> outputs(field_outputs.begin(), field_outputs.end());
    return cmd_simulate(ctx, layout_path, outputs);
  }
  if (render->parsed()) return cmd_render(ctx, field_path, ppm_path, palette);
  if (generate->parsed()) return cmd_generate(ctx, dataset_dir, count);
  if (optimize->parsed()) return cmd_optimize(ctx, optimize_dir);
  if (nas->parsed()) return cmd_nas(ctx, nas_dir);
  if (benchmark->parsed()) return cmd_benchmark(ctx, bench_dir, bench);
  return kUsage;
}

}  // namespace hslo::cli
