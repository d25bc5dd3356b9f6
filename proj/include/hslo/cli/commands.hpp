#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hslo/cli/config.hpp"
#include "hslo/thermal/field.hpp"
#include "hslo/thermal/layout.hpp"

namespace hslo::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kRuntime = 3 };

/// Shared state of one invocation. Results go to `out` and files, progress
/// and diagnostics to `err`.
struct Context {
  RunConfig config;
  std::ostream& out;
  std::ostream& err;
  bool quiet = false;
};

/// Layout CSV: header "cell,intensity", then one 1-based cell per row.
/// Throws FormatError naming the offending line.
thermal::Layout read_layout_csv(std::istream& in, int cell_count);
thermal::Layout read_layout_csv(const std::filesystem::path& path, int cell_count);
void write_layout_csv(std::ostream& out, const thermal::Layout& layout);

/// Binary PPM (P6), one pixel per node, row 0 at the top.
/// Palettes: gray, heat, coolwarm. Throws DomainError for others.
std::string render_ppm(const thermal::Field2D& field, const std::string& palette);

/// Solves the layout exactly and prints "tmax_K=... r_m=...". Each output
/// path receives the field, as CSV when it ends in .csv and HSLF otherwise.
int cmd_simulate(Context& ctx, const std::filesystem::path& layout_csv,
                 const std::vector<std::filesystem::path>& field_outputs);

int cmd_render(Context& ctx, const std::filesystem::path& field_file,
               const std::filesystem::path& ppm_out, const std::string& palette);

int cmd_generate(Context& ctx, const std::filesystem::path& dir, std::uint64_t count);

/// Writes config.ini, archive.csv, trajectory.csv, best_layout.csv,
/// summary.txt and timing.txt (the only non-deterministic file).
int cmd_optimize(Context& ctx, const std::filesystem::path& out_dir);

/// Writes config.ini, front.csv, front_genomes.txt and summary.txt.
int cmd_nas(Context& ctx, const std::filesystem::path& out_dir);

struct BenchmarkOptions {
  std::string kind = "optimize";  // optimize | surrogate
  int seeds = 3;                  // optimize: seeds seed, seed+1, ...
  double threshold_K = 327.05;    // optimize: archive count threshold
  std::size_t samples = 20;       // surrogate: number of random layouts
};

/// optimize: one MNSLO run per seed with exact re-simulation, written to
/// benchmark.csv. surrogate: the configured evaluator against exact solves,
/// written to surrogate.csv. Both also write summary.txt.
int cmd_benchmark(Context& ctx, const std::filesystem::path& out_dir, const BenchmarkOptions& options);

}  // namespace hslo::cli
