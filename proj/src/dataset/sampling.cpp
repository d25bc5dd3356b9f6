#include "hslo/dataset/sampling.hpp"

#include <algorithm>

#include "hslo/error.hpp"

namespace hslo::dataset {

std::vector<double> IntensityScheme::intensities() const {
  if (kind == Kind::uniform) {
    return std::vector<double>(static_cast<std::size_t>(std::max(source_count, 0)), intensity);
  }
  std::vector<double> out;
  out.reserve(20);
  for (int level = 1; level <= 10; ++level) {
    out.push_back(2000.0 * level);
    out.push_back(2000.0 * level);
  }
  return out;
}

std::string_view IntensityScheme::name() const {
  return kind == Kind::uniform ? "uniform" : "case2";
}

IntensityScheme::Kind IntensityScheme::parse_kind(std::string_view name) {
  if (name == "uniform") return Kind::uniform;
  if (name == "case2") return Kind::case2;
  throw DomainError("unknown intensity scheme '" + std::string(name) + "'");
}

void IntensityScheme::validate(const thermal::DomainSpec& spec) const {
  if (source_count < 0) throw DomainError("source count must be non-negative");
  if (kind == Kind::case2 && source_count != 20) {
    throw DomainError("case2 scheme requires exactly 20 sources");
  }
  if (kind == Kind::uniform && !(intensity > 0.0)) {
    throw DomainError("uniform intensity must be positive");
  }
  if (source_count > spec.cell_count()) {
    throw DomainError(std::to_string(source_count) + " sources do not fit in " +
                      std::to_string(spec.cell_count()) + " cells");
  }
}

thermal::Layout sample_random_layout(const thermal::DomainSpec& spec, const IntensityScheme& scheme,
                                     Rng& rng) {
  scheme.validate(spec);
  const int cells = spec.cell_count();
  std::vector<int> pool(static_cast<std::size_t>(cells));
  for (int i = 0; i < cells; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  // Partial Fisher-Yates: the first source_count slots are the draw.
  const auto k = static_cast<std::size_t>(scheme.source_count);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  auto levels = scheme.intensities();
  rng.shuffle(levels);
  std::vector<thermal::Source> sources;
  sources.reserve(k);
  for (std::size_t i = 0; i < k; ++i) sources.push_back({pool[i], levels[i]});
  return thermal::Layout(std::move(sources));
}

}  // namespace hslo::dataset
