#include "hslo/cli/commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "hslo/dataset/storage.hpp"
#include "hslo/error.hpp"
#include "hslo/format.hpp"
#include "hslo/moea/nsga2.hpp"
#include "hslo/optim/mnslo.hpp"
#include "hslo/surrogate/evaluator.hpp"
#include "hslo/surrogate/metrics.hpp"
#include "hslo/thermal/field_io.hpp"
#include "hslo/thermal/solver.hpp"

namespace hslo::cli {

namespace fs = std::filesystem;
using thermal::Layout;

namespace {

int guard(Context& ctx, const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const ConfigError& e) {
    ctx.err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    ctx.err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    ctx.err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConstraintViolation& e) {
    ctx.err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    ctx.err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

template <class Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ostringstream os;
  fn(os);
  write_file(path, os.str());
}

std::string config_text(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# seed = " << cfg.seed << '\n';
  cfg.write(os);
  return os.str();
}

std::size_t argmin(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::ranges::min_element(v) - v.begin());
}

using Rgb = std::array<double, 3>;

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
  return {a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t};
}

/// Piecewise-linear ramp through equally spaced stops.
Rgb ramp(const std::vector<Rgb>& stops, double t) {
  const double x = std::clamp(t, 0.0, 1.0) * static_cast<double>(stops.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(x), stops.size() - 2);
  return lerp(stops[i], stops[i + 1], x - static_cast<double>(i));
}

const std::vector<Rgb>& palette_stops(const std::string& name) {
  static const std::vector<Rgb> gray = {{0, 0, 0}, {255, 255, 255}};
  static const std::vector<Rgb> heat = {{0, 0, 0}, {255, 0, 0}, {255, 255, 0}, {255, 255, 255}};
  static const std::vector<Rgb> coolwarm = {{59, 76, 192}, {221, 221, 221}, {180, 4, 38}};
  if (name == "gray") return gray;
  if (name == "heat") return heat;
  if (name == "coolwarm") return coolwarm;
  throw DomainError("unknown palette '" + name + "' (expected gray, heat or coolwarm)");
}

}  // namespace

Layout read_layout_csv(std::istream& in, int cell_count) {
  std::vector<thermal::Source> sources;
  std::string line;
  int number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty()) continue;
    const std::string where = "layout line " + std::to_string(number) + ": ";
    if (!header) {
      std::string squeezed;
      for (char ch : text) {
        if (ch != ' ' && ch != '\t') squeezed += ch;
      }
      if (squeezed != "cell,intensity") throw FormatError(where + "expected header 'cell,intensity'");
      header = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw FormatError(where + "expected two comma-separated values");
    }
    const std::string cell_text(trim(text.substr(0, comma)));
    const std::string value_text(trim(text.substr(comma + 1)));
    int cell = 0;
    double intensity = 0.0;
    const auto [p1, e1] = std::from_chars(cell_text.data(), cell_text.data() + cell_text.size(), cell);
    const auto [p2, e2] =
        std::from_chars(value_text.data(), value_text.data() + value_text.size(), intensity);
    if (e1 != std::errc{} || p1 != cell_text.data() + cell_text.size() || cell_text.empty()) {
      throw FormatError(where + "bad cell index '" + cell_text + "'");
    }
    if (e2 != std::errc{} || p2 != value_text.data() + value_text.size() || value_text.empty()) {
      throw FormatError(where + "bad intensity '" + value_text + "'");
    }
    if (cell < 1 || cell > cell_count) {
      throw FormatError(where + "cell " + cell_text + " outside 1.." + std::to_string(cell_count));
    }
    if (!(intensity > 0.0) || !std::isfinite(intensity)) {
      throw FormatError(where + "intensity must be positive");
    }
    for (const auto& s : sources) {
      if (s.cell == cell) throw FormatError(where + "cell " + cell_text + " listed twice");
    }
    sources.push_back({cell, intensity});
  }
  if (!header) throw FormatError("layout: missing header 'cell,intensity'");
  return Layout(std::move(sources));
}

Layout read_layout_csv(const fs::path& path, int cell_count) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open layout file " + path.string());
  return read_layout_csv(in, cell_count);
}

void write_layout_csv(std::ostream& out, const Layout& layout) {
  out << "cell,intensity\n";
  for (const auto& s : layout.sources()) out << s.cell << ',' << format_number(s.intensity) << '\n';
}

std::string render_ppm(const thermal::Field2D& field, const std::string& palette) {
  const auto& stops = palette_stops(palette);
  const double lo = field.values().empty() ? 0.0 : field.min();
  const double hi = field.values().empty() ? 0.0 : field.max();
  const double range = hi - lo;
  std::string out = "P6\n" + std::to_string(field.cols()) + " " + std::to_string(field.rows()) + "\n255\n";
  out.reserve(out.size() + 3 * field.values().size());
  for (double v : field.values()) {
    const double t = range > 0.0 ? (v - lo) / range : 0.0;
    for (double c : ramp(stops, t)) out.push_back(static_cast<char>(std::lround(std::clamp(c, 0.0, 255.0))));
  }
  return out;
}

int cmd_simulate(Context& ctx, const fs::path& layout_csv, const std::vector<fs::path>& field_outputs) {
  return guard(ctx, [&] {
    const auto& spec = ctx.config.domain;
    const auto layout = read_layout_csv(layout_csv, spec.cell_count());
    const surrogate::ExactEvaluator exact(spec, ctx.config.tolerance);
    const auto field = exact.field(layout);
    for (const auto& path : field_outputs) thermal::save_field(path, field);
    const double tmax = field.max();
    ctx.out << "tmax_K=" << format_number(tmax)
            << " r_m=" << format_number(thermal::normalized_metric(tmax, spec)) << '\n';
  });
}

int cmd_render(Context& ctx, const fs::path& field_file, const fs::path& ppm_out,
               const std::string& palette) {
  return guard(ctx, [&] {
    palette_stops(palette);
    const auto field = thermal::load_field(field_file);
    write_file(ppm_out, render_ppm(field, palette));
    ctx.out << "wrote " << ppm_out.string() << " (" << field.cols() << "x" << field.rows() << ")\n";
  });
}

int cmd_generate(Context& ctx, const fs::path& dir, std::uint64_t count) {
  return guard(ctx, [&] {
    const auto& cfg = ctx.config;
    dataset::GenerateOptions options;
    options.tolerance = cfg.tolerance;
    options.workers = cfg.workers;
    if (!ctx.quiet) {
      options.progress = [&](std::uint64_t done, std::uint64_t total) {
        ctx.err << "generate: " << done << "/" << total << '\n';
      };
    }
    const auto manifest = dataset::generate_dataset(cfg.domain, cfg.scheme, count, cfg.seed, dir, options);
    ctx.out << "samples=" << manifest.count << " seed=" << manifest.seed << " dir=" << dir.string() << '\n';
  });
}

int cmd_optimize(Context& ctx, const fs::path& out_dir) {
  return guard(ctx, [&] {
    const auto& cfg = ctx.config;
    make_dir(out_dir);
    const auto evaluator = surrogate::make_evaluator(cfg.evaluator, cfg.domain, cfg.cache_capacity, cfg.tolerance);
    optim::MnsloConfig mnslo = cfg.mnslo;
    if (!ctx.quiet) {
      mnslo.progress = [&](const optim::ProgressRecord& r) {
        ctx.err << "optimize: group " << r.group << " sweep " << r.sweep << " fitness "
                << format_number(r.best_fitness) << '\n';
      };
    }

    const auto start = std::chrono::steady_clock::now();
    const auto result = optim::run_mnslo(*evaluator, {cfg.domain, cfg.scheme}, mnslo);
    const surrogate::ExactEvaluator exact(cfg.domain, cfg.tolerance);
    const auto tmax = optim::resimulate(result.archive, exact);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto best = argmin(tmax);

    write_file(out_dir / "config.ini", config_text(cfg));
    write_with(out_dir / "archive.csv", [&](std::ostream& os) { optim::write_archive_csv(os, result.archive, tmax); });
    write_with(out_dir / "trajectory.csv", [&](std::ostream& os) { optim::write_trajectory_csv(os, result); });
    write_with(out_dir / "best_layout.csv",
               [&](std::ostream& os) { write_layout_csv(os, result.archive.entries()[best].layout); });

    std::ostringstream summary;
    summary << "evaluator=" << evaluator->name() << '\n'
            << "seed=" << cfg.seed << '\n'
            << "best_fitness=" << format_number(result.best_fitness) << '\n'
            << "best_tmax_K=" << format_number(tmax[best]) << '\n'
            << "best_r_m=" << format_number(thermal::normalized_metric(tmax[best], cfg.domain)) << '\n'
            << "archive_size=" << result.archive.size() << '\n'
            << "evaluator_calls=" << result.evaluator_calls << '\n';
    write_file(out_dir / "summary.txt", summary.str());
    write_file(out_dir / "timing.txt", "wall_time_s=" + format_number(seconds) + "\n");
    ctx.out << summary.str() << "wall_time_s=" << format_number(seconds) << '\n';
  });
}

int cmd_nas(Context& ctx, const fs::path& out_dir) {
  return guard(ctx, [&] {
    const auto& cfg = ctx.config;
    make_dir(out_dir);
    const auto preset = moea::BackbonePreset::truncated(cfg.moea.layer_count);
    moea::MoeaConfig moea = cfg.moea;
    if (!ctx.quiet) {
      moea.progress = [&](int gen, std::size_t front) {
        ctx.err << "nas: generation " << gen << " front " << front << '\n';
      };
    }
    const auto result = moea::run_nsga2(moea::analytic_objective(preset), moea);

    std::vector<moea::ArchitectureGenome> genomes;
    for (const auto& c : result.front) genomes.push_back(c.genome);
    write_file(out_dir / "config.ini", config_text(cfg));
    write_with(out_dir / "front.csv", [&](std::ostream& os) { moea::write_front_csv(os, result.front, preset); });
    write_with(out_dir / "front_genomes.txt", [&](std::ostream& os) { moea::write_genomes(os, genomes); });

    std::ostringstream summary;
    summary << "objective=analytic\n"
            << "seed=" << cfg.seed << '\n'
            << "layers=" << cfg.moea.layer_count << '\n'
            << "generations=" << cfg.moea.generations << '\n'
            << "front_size=" << result.front.size() << '\n'
            << "evaluations=" << result.evaluations << '\n';
    write_file(out_dir / "summary.txt", summary.str());
    ctx.out << summary.str();
  });
}

int cmd_benchmark(Context& ctx, const fs::path& out_dir, const BenchmarkOptions& options) {
  return guard(ctx, [&] {
    const auto& cfg = ctx.config;
    make_dir(out_dir);
    write_file(out_dir / "config.ini", config_text(cfg));
    std::ostringstream summary;

    if (options.kind == "surrogate") {
      if (options.samples < 1) throw ConfigError("benchmark: samples must be >= 1");
      const auto candidate = surrogate::make_field_evaluator(cfg.evaluator, cfg.domain, cfg.tolerance);
      const auto report = surrogate::benchmark_surrogate(*candidate, cfg.domain, cfg.scheme, options.samples,
                                                         cfg.seed, cfg.tolerance);
      write_with(out_dir / "surrogate.csv", [&](std::ostream& os) { surrogate::write_report_csv(os, report); });
      surrogate::write_report_summary(summary, report);
    } else if (options.kind == "optimize") {
      if (options.seeds < 1) throw ConfigError("benchmark: seeds must be >= 1");
      const auto evaluator = surrogate::make_evaluator(cfg.evaluator, cfg.domain, cfg.cache_capacity, cfg.tolerance);
      const surrogate::ExactEvaluator exact(cfg.domain, cfg.tolerance);
      std::ostringstream table;
      table << "seed,best_fitness,best_tmax_K,best_r_m,solutions_below,archive_size,evaluator_calls\n";
      double overall = 0.0;
      std::uint64_t overall_seed = cfg.seed;
      std::size_t most_below = 0;
      for (int s = 0; s < options.seeds; ++s) {
        optim::MnsloConfig mnslo = cfg.mnslo;
        mnslo.seed = cfg.seed + static_cast<std::uint64_t>(s);
        if (!ctx.quiet) ctx.err << "benchmark: seed " << mnslo.seed << '\n';
        const auto result = optim::run_mnslo(*evaluator, {cfg.domain, cfg.scheme}, mnslo);
        const auto tmax = optim::resimulate(result.archive, exact);
        const auto best = argmin(tmax);
        const auto below = static_cast<std::size_t>(
            std::ranges::count_if(tmax, [&](double t) { return t <= options.threshold_K; }));
        table << mnslo.seed << ',' << format_number(result.best_fitness) << ',' << format_number(tmax[best]) << ','
              << format_number(thermal::normalized_metric(tmax[best], cfg.domain)) << ',' << below << ','
              << result.archive.size() << ',' << result.evaluator_calls << '\n';
        write_with(out_dir / ("best_layout_seed" + std::to_string(mnslo.seed) + ".csv"),
                   [&](std::ostream& os) { write_layout_csv(os, result.archive.entries()[best].layout); });
        if (s == 0 || tmax[best] < overall) {
          overall = tmax[best];
          overall_seed = mnslo.seed;
        }
        most_below = std::max(most_below, below);
      }
      write_file(out_dir / "benchmark.csv", table.str());
      summary << "evaluator=" << evaluator->name() << '\n'
              << "scheme=" << cfg.scheme.name() << '\n'
              << "seeds=" << options.seeds << '\n'
              << "best_tmax_K=" << format_number(overall) << '\n'
              << "best_r_m=" << format_number(thermal::normalized_metric(overall, cfg.domain)) << '\n'
              << "best_seed=" << overall_seed << '\n'
              << "threshold_K=" << format_number(options.threshold_K) << '\n'
              << "max_solutions_below=" << most_below << '\n';
    } else {
      throw ConfigError("benchmark: unknown kind '" + options.kind + "' (expected optimize or surrogate)");
    }
    write_file(out_dir / "summary.txt", summary.str());
    ctx.out << summary.str();
  });
}

}  // namespace hslo::cli
