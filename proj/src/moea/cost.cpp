#include "hslo/moea/cost.hpp"

#include <algorithm>
#include <cmath>

#include "hslo/error.hpp"

namespace hslo::moea {

int BackbonePreset::spatial_size(int layer) const {
  const int stage = layer / layers_per_stage;
  int s = stem_resolution;
  for (int i = 0; i <= stage; ++i) s = (s + 1) / 2;
  return s;
}

void BackbonePreset::validate() const {
  if (channels.size() < 2) throw DomainError("preset needs a stem width and at least one layer");
  for (int c : channels) {
    if (c < 1) throw DomainError("preset channel widths must be positive");
  }
  if (layers_per_stage < 1) throw DomainError("layers_per_stage must be >= 1");
  if (stem_resolution < 1 || input_resolution < stem_resolution) {
    throw DomainError("preset resolutions must satisfy 1 <= stem <= input");
  }
}

BackbonePreset BackbonePreset::truncated(int layers) {
  BackbonePreset p;
  if (layers < 1 || layers > p.layer_count()) {
    throw DomainError("truncated preset needs 1.." + std::to_string(p.layer_count()) + " layers");
  }
  p.channels.resize(static_cast<std::size_t>(layers) + 1);
  return p;
}

ModelCost layer_cost(const LayerGene& gene, int c_in, int c_out, int spatial) {
  const std::int64_t hidden = std::int64_t{gene.rate} * c_in;
  std::int64_t depthwise = 0;
  for (int k : gene.kernels) depthwise += std::int64_t{k} * k * hidden;
  ModelCost cost;
  cost.params = std::int64_t{c_in} * hidden + depthwise + hidden * c_out;
  cost.flops = 2 * cost.params * spatial * spatial;
  return cost;
}

ModelCost cost_model(const ArchitectureGenome& genome, const BackbonePreset& preset) {
  preset.validate();
  genome.validate(preset.layer_count(), 4);
  ModelCost total;
  for (int i = 0; i < preset.layer_count(); ++i) {
    const auto c = layer_cost(genome.layers[static_cast<std::size_t>(i)],
                              preset.channels[static_cast<std::size_t>(i)],
                              preset.channels[static_cast<std::size_t>(i) + 1], preset.spatial_size(i));
    total.params += c.params;
    total.flops += c.flops;
  }
  return total;
}

double error_proxy(const ArchitectureGenome& genome) {
  if (genome.layers.empty()) return 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < genome.layers.size(); ++i) {
    const auto& g = genome.layers[i];
    const int widest = *std::ranges::max_element(g.kernels);
    const double capacity = 0.12 * widest + 0.45 * std::sqrt(static_cast<double>(g.kernels.size())) +
                            (g.rate == 6 ? 0.3 : 0.0);
    // Later layers matter slightly less.
    const double weight = 1.0 / (1.0 + 0.1 * static_cast<double>(i));
    sum += weight / (1.0 + capacity);
  }
  double norm = 0.0;
  for (std::size_t i = 0; i < genome.layers.size(); ++i) norm += 1.0 / (1.0 + 0.1 * static_cast<double>(i));
  return sum / norm;
}

}  // namespace hslo::moea
