#pragma once

#include <cstdint>
#include <vector>

#include "hslo/moea/genome.hpp"

namespace hslo::moea {

/// Fixed channel plan around the searchable layers.
struct BackbonePreset {
  /// Stem output followed by one output width per searchable layer.
  std::vector<int> channels{32, 48, 48, 96, 96, 96, 192, 192, 192, 256, 256, 320, 320};
  int layers_per_stage = 3;     // the first layer of each stage has stride 2
  int input_resolution = 200;
  int stem_resolution = 50;

  int layer_count() const noexcept { return static_cast<int>(channels.size()) - 1; }
  /// Output side length of layer `layer` (0-based).
  int spatial_size(int layer) const;
  /// Throws DomainError.
  void validate() const;

  /// The first `layers` searchable layers of the default preset.
  static BackbonePreset truncated(int layers);
};

struct ModelCost {
  std::int64_t params = 0;
  std::int64_t flops = 0;

  bool operator==(const ModelCost&) const = default;
};

/// Inverted-block cost of one layer (expansion, depthwise kernels,
/// projection; no bias or normalization terms). flops = 2 * params * S^2.
ModelCost layer_cost(const LayerGene& gene, int c_in, int c_out, int spatial);

/// Sum of `layer_cost` over the genome. Throws DomainError when the genome
/// does not match the preset.
ModelCost cost_model(const ArchitectureGenome& genome, const BackbonePreset& preset = {});

/// Deterministic stand-in for a validation error, in (0, 1]. It falls with
/// the receptive field, the number of paths and the expansion rate of each
/// layer, with diminishing returns, so it trades off against `cost_model`.
double error_proxy(const ArchitectureGenome& genome);

}  // namespace hslo::moea
