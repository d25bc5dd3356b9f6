#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hslo/rng.hpp"
#include "hslo/thermal/domain.hpp"
#include "hslo/thermal/layout.hpp"

namespace hslo::dataset {

/// How intensities are attached to the sampled source cells.
///
///  - uniform: every source carries `intensity`.
///  - case2:   twenty sources, two each of 2000, 4000, ..., 20000 W/m^2.
struct IntensityScheme {
  enum class Kind { uniform, case2 };

  Kind kind = Kind::uniform;
  int source_count = 20;
  double intensity = 10000.0;

  static IntensityScheme uniform(int sources = 20, double intensity = 10000.0) {
    return {Kind::uniform, sources, intensity};
  }
  static IntensityScheme case2() { return {Kind::case2, 20, 10000.0}; }

  /// The intensity multiset, in table order.
  std::vector<double> intensities() const;

  /// "uniform" or "case2".
  std::string_view name() const;
  static Kind parse_kind(std::string_view name);

  /// Throws DomainError when the scheme cannot populate `spec`.
  void validate(const thermal::DomainSpec& spec) const;

  bool operator==(const IntensityScheme&) const = default;
};

/// Draws `source_count` distinct cells uniformly without replacement and
/// assigns the scheme's intensities through a random permutation.
thermal::Layout sample_random_layout(const thermal::DomainSpec& spec, const IntensityScheme& scheme,
                                     Rng& rng);

}  // namespace hslo::dataset
