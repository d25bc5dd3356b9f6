#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "hslo/dataset/sampling.hpp"
#include "hslo/optim/archive.hpp"
#include "hslo/optim/clustering.hpp"
#include "hslo/rng.hpp"
#include "hslo/surrogate/evaluator.hpp"
#include "hslo/thermal/domain.hpp"

namespace hslo::optim {

struct ProgressRecord {
  int group = 0;
  int sweep = 0;
  double best_fitness = 0.0;  // leader fitness after the sweep
};

struct MnsloConfig {
  int population_size = 30;
  int group_count = 1;
  std::size_t archive_capacity = 100;
  double epsilon = 5e-4;  // R_m units; 0.05 K at the default domain
  int max_sweeps = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::function<void(const ProgressRecord&)> progress;

  /// Throws ConfigError.
  void validate() const;
};

/// What is being placed: the domain (for the cell count) and the sources.
struct LayoutProblem {
  thermal::DomainSpec spec;
  dataset::IntensityScheme scheme;
};

struct TrajectoryPoint {
  int sweep = 0;
  double fitness = 0.0;

  bool operator==(const TrajectoryPoint&) const = default;
};

struct MnsloResult {
  SolutionArchive archive{1};
  thermal::Layout best_layout;
  double best_fitness = 0.0;
  std::vector<thermal::Layout> leaders;                 // final incumbents per group
  std::vector<std::vector<TrajectoryPoint>> trajectories;  // one per group
  std::uint64_t evaluator_calls = 0;
};

/// One neighborhood as seen by a sweep; handed to `SweepObserver`.
struct NeighborhoodRecord {
  int position = 0;  // 1-based source position
  double minimum = 0.0;
  std::vector<std::pair<thermal::Layout, double>> admitted;
};

using SweepObserver = std::function<void(const NeighborhoodRecord&)>;

struct SweepResult {
  thermal::Layout layout;
  double fitness = 0.0;
  bool improved = false;
  std::uint64_t evaluations = 0;
};

/// Evaluates all candidates, in parallel when workers > 1. The output order
/// matches the input order regardless of worker count.
std::vector<double> evaluate_all(const surrogate::Evaluator& evaluator,
                                 std::span<const thermal::Layout> candidates, unsigned workers);

/// One pass over every source position in random order.
///
/// For each position the whole neighborhood is evaluated; candidates with
/// fitness below (neighborhood minimum + epsilon), and the minimum itself,
/// are offered to the archive, which is then trimmed. A strictly better
/// neighborhood minimum replaces the incumbent (first in visiting order
/// among ties).
SweepResult local_search_sweep(const thermal::Layout& x, double fitness,
                               const surrogate::Evaluator& evaluator, SolutionArchive& archive,
                               const MnsloConfig& cfg, int cell_count, Rng& rng,
                               const SweepObserver& observer = {});

/// Clustered multi-start neighborhood search with a shared archive.
MnsloResult run_mnslo(const surrogate::Evaluator& evaluator, const LayoutProblem& problem,
                      const MnsloConfig& cfg);

/// Peak temperature of every archive entry under the exact evaluator, in
/// archive order.
std::vector<double> resimulate(const SolutionArchive& archive,
                               const surrogate::ExactEvaluator& exact);

/// Distinct archived layouts whose exact peak temperature is <= threshold.
/// Throws DomainError on an empty archive.
std::size_t count_solutions_below(const SolutionArchive& archive,
                                  const surrogate::ExactEvaluator& exact, double threshold_K);

/// "rank,fitness,tmax_K,cells,intensities" with quoted comma-joined lists.
/// `tmax_K` may be empty, in which case that column is left blank.
void write_archive_csv(std::ostream& out, const SolutionArchive& archive,
                       std::span<const double> tmax_K = {});

/// "group,sweep,fitness" rows.
void write_trajectory_csv(std::ostream& out, const MnsloResult& result);

}  // namespace hslo::optim
