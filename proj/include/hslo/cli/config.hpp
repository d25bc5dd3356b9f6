#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hslo/dataset/sampling.hpp"
#include "hslo/moea/nsga2.hpp"
#include "hslo/optim/mnslo.hpp"
#include "hslo/thermal/domain.hpp"

namespace hslo::cli {

/// Everything a subcommand needs, read from an INI file with the sections
/// [domain] [scheme] [mnslo] [moea] and overlaid by command-line flags.
struct RunConfig {
  thermal::DomainSpec domain;
  dataset::IntensityScheme scheme;
  optim::MnsloConfig mnslo;
  std::string evaluator = "coarse:50";
  std::size_t cache_capacity = 0;
  double tolerance = 1e-8;
  moea::MoeaConfig moea;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  RunConfig();

  /// Applies `key = value` lines. Throws ConfigError naming `source` and the
  /// line for unknown sections or keys and for unparsable values.
  void load(std::istream& in, const std::string& source);
  void load_file(const std::filesystem::path& path);

  /// "section.key=value", as given to --set.
  void set(std::string_view assignment);
  void set(std::string_view section, std::string_view key, std::string_view value);

  /// Derives source_side_m, copies seed/workers into the module configs and
  /// checks every module. Throws ConfigError.
  void finalize();

  /// The effective configuration, loadable again with `load`.
  void write(std::ostream& out) const;

  /// Every known "section.key".
  static std::vector<std::string> keys();
};

}  // namespace hslo::cli
