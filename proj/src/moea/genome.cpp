#include "hslo/moea/genome.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "hslo/error.hpp"

namespace hslo::moea {

namespace {

bool is_kernel(int k) { return std::ranges::find(kKernelChoices, k) != std::end(kKernelChoices); }
bool is_rate(int r) { return std::ranges::find(kRateChoices, r) != std::end(kRateChoices); }

void check_m_max(int m_max) {
  if (m_max < 1 || m_max > 4) {
    throw DomainError("m_max must lie in 1..4, got " + std::to_string(m_max));
  }
}

}  // namespace

void ArchitectureGenome::validate(int layer_count, int m_max) const {
  if (static_cast<int>(layers.size()) != layer_count) {
    throw DomainError("genome has " + std::to_string(layers.size()) + " layers, expected " +
                      std::to_string(layer_count));
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& g = layers[i];
    const std::string where = "layer " + std::to_string(i + 1) + ": ";
    if (g.kernels.empty()) throw DomainError(where + "no kernels");
    if (static_cast<int>(g.kernels.size()) > m_max) {
      throw DomainError(where + "more than " + std::to_string(m_max) + " kernels");
    }
    for (std::size_t k = 0; k < g.kernels.size(); ++k) {
      if (!is_kernel(g.kernels[k])) throw DomainError(where + "bad kernel " + std::to_string(g.kernels[k]));
      if (k > 0 && g.kernels[k] <= g.kernels[k - 1]) {
        throw DomainError(where + "kernels must be sorted and distinct");
      }
    }
    if (!is_rate(g.rate)) throw DomainError(where + "bad rate " + std::to_string(g.rate));
  }
}

std::string to_string(const LayerGene& gene) {
  std::string out;
  for (int k : gene.kernels) out += "k" + std::to_string(k);
  out += ":r" + std::to_string(gene.rate);
  return out;
}

std::string to_string(const ArchitectureGenome& genome) {
  std::string out;
  for (const auto& g : genome.layers) {
    if (!out.empty()) out += ' ';
    out += to_string(g);
  }
  return out;
}

LayerGene parse_layer(std::string_view token) {
  auto fail = [&] { throw FormatError("bad layer token '" + std::string(token) + "'"); };
  const auto colon = token.find(':');
  if (colon == std::string_view::npos) fail();
  const auto kernels = token.substr(0, colon);
  const auto rate = token.substr(colon + 1);

  auto number = [&](std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) fail();
    return v;
  };

  LayerGene gene;
  std::size_t pos = 0;
  while (pos < kernels.size()) {
    if (kernels[pos] != 'k') fail();
    const auto next = kernels.find('k', pos + 1);
    const auto end = next == std::string_view::npos ? kernels.size() : next;
    gene.kernels.push_back(number(kernels.substr(pos + 1, end - pos - 1)));
    pos = end;
  }
  if (rate.size() < 2 || rate[0] != 'r') fail();
  gene.rate = number(rate.substr(1));

  ArchitectureGenome probe{{gene}};
  try {
    probe.validate(1, 4);
  } catch (const DomainError& e) {
    throw FormatError("bad layer token '" + std::string(token) + "': " + e.what());
  }
  return gene;
}

ArchitectureGenome parse_genome(std::string_view text) {
  ArchitectureGenome genome;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) genome.layers.push_back(parse_layer(token));
  if (genome.layers.empty()) throw FormatError("empty genome");
  return genome;
}

LayerGene sample_layer(int m_max, Rng& rng) {
  check_m_max(m_max);
  LayerGene gene;
  gene.rate = kRateChoices[rng.uniform_index(2)];
  const int paths = rng.uniform_int(1, m_max);
  std::vector<int> pool(std::begin(kKernelChoices), std::end(kKernelChoices));
  rng.shuffle(pool);
  gene.kernels.assign(pool.begin(), pool.begin() + paths);
  std::ranges::sort(gene.kernels);
  return gene;
}

ArchitectureGenome sample_genome(int m_max, Rng& rng, int layer_count) {
  check_m_max(m_max);
  if (layer_count < 1) throw DomainError("layer count must be >= 1");
  ArchitectureGenome genome;
  genome.layers.reserve(static_cast<std::size_t>(layer_count));
  for (int i = 0; i < layer_count; ++i) genome.layers.push_back(sample_layer(m_max, rng));
  return genome;
}

std::pair<ArchitectureGenome, ArchitectureGenome> crossover(const ArchitectureGenome& a,
                                                            const ArchitectureGenome& b, double pc,
                                                            Rng& rng) {
  if (a.layers.size() != b.layers.size()) throw DomainError("crossover parents differ in depth");
  std::pair<ArchitectureGenome, ArchitectureGenome> out{a, b};
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    if (rng.bernoulli(pc)) std::swap(out.first.layers[i], out.second.layers[i]);
  }
  return out;
}

ArchitectureGenome mutate(const ArchitectureGenome& genome, double pm, int m_max, Rng& rng) {
  ArchitectureGenome out = genome;
  if (out.layers.empty() || !rng.bernoulli(pm)) return out;
  const auto layer = static_cast<std::size_t>(rng.uniform_index(out.layers.size()));
  out.layers[layer] = sample_layer(m_max, rng);
  return out;
}

void write_genomes(std::ostream& out, const std::vector<ArchitectureGenome>& genomes) {
  for (const auto& g : genomes) out << to_string(g) << '\n';
}

std::vector<ArchitectureGenome> read_genomes(std::istream& in) {
  std::vector<ArchitectureGenome> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_genome(line));
  }
  return out;
}

}  // namespace hslo::moea
