#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hslo/rng.hpp"

namespace hslo::moea {

inline constexpr int kKernelChoices[] = {3, 5, 7, 9};
inline constexpr int kRateChoices[] = {3, 6};
inline constexpr int kDefaultLayers = 12;

/// One searchable block: parallel depthwise kernels and an expansion rate.
struct LayerGene {
  std::vector<int> kernels;  // sorted, distinct, subset of {3,5,7,9}
  int rate = 3;

  bool operator==(const LayerGene&) const = default;
  auto operator<=>(const LayerGene&) const = default;
};

struct ArchitectureGenome {
  std::vector<LayerGene> layers;

  /// Throws DomainError when a layer is malformed, has more than m_max
  /// kernels, or when layers.size() != layer_count.
  void validate(int layer_count = kDefaultLayers, int m_max = 4) const;

  bool operator==(const ArchitectureGenome&) const = default;
  auto operator<=>(const ArchitectureGenome&) const = default;
};

/// "k3k5:r3"
std::string to_string(const LayerGene& gene);
/// Space-separated layer tokens.
std::string to_string(const ArchitectureGenome& genome);
/// Throws FormatError naming the bad token.
LayerGene parse_layer(std::string_view token);
ArchitectureGenome parse_genome(std::string_view text);

/// Rate uniform over {3,6}; path count uniform over 1..m_max; kernels drawn
/// without replacement. Throws DomainError unless 1 <= m_max <= 4.
LayerGene sample_layer(int m_max, Rng& rng);
ArchitectureGenome sample_genome(int m_max, Rng& rng, int layer_count = kDefaultLayers);

/// Per layer, with probability pc the parents' genes trade places.
std::pair<ArchitectureGenome, ArchitectureGenome> crossover(const ArchitectureGenome& a,
                                                            const ArchitectureGenome& b, double pc,
                                                            Rng& rng);

/// With probability pm, resample one uniformly chosen layer.
ArchitectureGenome mutate(const ArchitectureGenome& genome, double pm, int m_max, Rng& rng);

/// One genome per line; blank lines and '#' comments are skipped.
void write_genomes(std::ostream& out, const std::vector<ArchitectureGenome>& genomes);
std::vector<ArchitectureGenome> read_genomes(std::istream& in);

}  // namespace hslo::moea
