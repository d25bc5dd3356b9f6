#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "hslo/moea/cost.hpp"
#include "hslo/moea/genome.hpp"

namespace hslo::moea {

/// Two minimized objectives.
using Objectives = std::array<double, 2>;

/// True when `a` is no worse than `b` everywhere and better somewhere.
bool dominates(const Objectives& a, const Objectives& b) noexcept;

/// Fronts of indices into `points`, best front first; indices ascend within
/// a front. Throws DomainError on a non-finite objective.
std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const Objectives> points);

/// Standard crowding distance: boundary points are infinite, interior points
/// sum their normalized neighbor gaps. An objective with zero range adds 0.
/// Throws DomainError on an empty front.
std::vector<double> crowding_distance(std::span<const Objectives> front);

struct MoeaConfig {
  int population_size = 40;
  int generations = 50;
  double pc = 1.0;
  double pm = 1.0;
  int m_max = 4;
  int layer_count = kDefaultLayers;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::function<void(int generation, std::size_t front_size)> progress;

  /// Throws ConfigError.
  void validate() const;
};

struct Candidate {
  ArchitectureGenome genome;
  Objectives objectives{};
  int rank = 0;  // 0 = first front
  double crowding = 0.0;
};

struct MoeaResult {
  std::vector<Candidate> population;  // final population, rank then crowding order
  std::vector<Candidate> front;       // distinct first-front members, sorted by objectives
  std::uint64_t evaluations = 0;
};

using ObjectiveFunction = std::function<Objectives(const ArchitectureGenome&)>;

/// (error_proxy, params under `preset`).
ObjectiveFunction analytic_objective(const BackbonePreset& preset = {});

/// Elitist non-dominated sorting search.
///
/// Every generation draws population_size / 2 parent pairs uniformly from
/// the current population; each pair is crossed over and both children are
/// then mutated. Parents and children are merged, duplicate genomes are
/// dropped (refilled from the duplicates only if too few remain), and the
/// next population is filled front by front, the last front by descending
/// crowding distance.
MoeaResult run_nsga2(const ObjectiveFunction& evaluate, const MoeaConfig& cfg);

/// "error_proxy,params,flops,genome".
void write_front_csv(std::ostream& out, std::span<const Candidate> front,
                     const BackbonePreset& preset = {});

}  // namespace hslo::moea
