#include "hslo/optim/mnslo.hpp"

#include <algorithm>
#include <exception>
#include <ostream>
#include <thread>
#include <unordered_set>

#include "hslo/error.hpp"
#include "hslo/format.hpp"
#include "hslo/optim/neighborhood.hpp"

namespace hslo::optim {

using thermal::Layout;

void MnsloConfig::validate() const {
  if (population_size < 1) throw ConfigError("mnslo: population_size must be >= 1");
  if (group_count < 1) throw ConfigError("mnslo: group_count must be >= 1");
  if (population_size % group_count != 0) {
    throw ConfigError("mnslo: population_size " + std::to_string(population_size) +
                      " is not divisible by group_count " + std::to_string(group_count));
  }
  if (archive_capacity < 1) throw ConfigError("mnslo: archive_capacity must be >= 1");
  if (!(epsilon >= 0.0)) throw ConfigError("mnslo: epsilon must be >= 0");
  if (max_sweeps < 1) throw ConfigError("mnslo: max_sweeps must be >= 1");
}

std::vector<double> evaluate_all(const surrogate::Evaluator& evaluator,
                                 std::span<const Layout> candidates, unsigned workers) {
  std::vector<double> out(candidates.size());
  const std::size_t n = candidates.size();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = evaluator.evaluate(candidates[i]);
    return out;
  }
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::exception_ptr> errors(used);
  {
    std::vector<std::jthread> threads;
    threads.reserve(used);
    for (unsigned w = 0; w < used; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += used) out[i] = evaluator.evaluate(candidates[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

SweepResult local_search_sweep(const Layout& x, double fitness, const surrogate::Evaluator& evaluator,
                               SolutionArchive& archive, const MnsloConfig& cfg, int cell_count,
                               Rng& rng, const SweepObserver& observer) {
  SweepResult result{x, fitness, false, 0};
  const int sources = static_cast<int>(x.size());
  for (int t : rng.permutation(sources, 1)) {
    const auto candidates = neighborhood(result.layout, t, cell_count, rng);
    if (candidates.empty()) continue;
    const auto values = evaluate_all(evaluator, candidates, cfg.workers);
    result.evaluations += candidates.size();

    const auto best = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    const double minimum = values[best];
    NeighborhoodRecord record;
    record.position = t;
    record.minimum = minimum;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      // The minimum itself always qualifies, so epsilon = 0 still keeps it.
      if (values[i] < minimum + cfg.epsilon || values[i] == minimum) {
        archive.offer(candidates[i], values[i]);
        if (observer) record.admitted.emplace_back(candidates[i], values[i]);
      }
    }
    archive.select();
    if (observer) observer(record);

    if (minimum < result.fitness) {
      result.layout = candidates[best];
      result.fitness = minimum;
      result.improved = true;
    }
  }
  return result;
}

namespace {

std::vector<Individual> initial_population(const LayoutProblem& problem, int size, Rng& rng) {
  std::vector<Individual> population;
  std::unordered_set<Layout, thermal::LayoutHash> seen;
  const int max_attempts = 1000 * size + 1000;
  for (int attempt = 0; static_cast<int>(population.size()) < size; ++attempt) {
    if (attempt >= max_attempts) {
      throw ConfigError("mnslo: could not draw " + std::to_string(size) + " distinct layouts");
    }
    auto layout = dataset::sample_random_layout(problem.spec, problem.scheme, rng);
    if (seen.insert(layout).second) population.push_back({std::move(layout), 0.0});
  }
  return population;
}

}  // namespace

MnsloResult run_mnslo(const surrogate::Evaluator& evaluator, const LayoutProblem& problem,
                      const MnsloConfig& cfg) {
  cfg.validate();
  problem.spec.validate();
  problem.scheme.validate(problem.spec);
  const int cell_count = problem.spec.cell_count();

  const Rng root(cfg.seed);
  Rng init_rng = root.split(1);
  auto population = initial_population(problem, cfg.population_size, init_rng);
  {
    std::vector<Layout> layouts;
    layouts.reserve(population.size());
    for (const auto& ind : population) layouts.push_back(ind.layout);
    const auto values = evaluate_all(evaluator, layouts, cfg.workers);
    for (std::size_t i = 0; i < population.size(); ++i) population[i].fitness = values[i];
  }

  MnsloResult result;
  result.archive = SolutionArchive(cfg.archive_capacity);
  result.evaluator_calls = population.size();

  const auto groups = cluster_population(population, cfg.group_count);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Rng rng = root.split(1000 + g);
    Layout incumbent = population[groups[g].leader].layout;
    double fitness = population[groups[g].leader].fitness;
    result.archive.offer(incumbent, fitness);
    result.archive.select();

    std::vector<TrajectoryPoint> trajectory{{0, fitness}};
    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
      auto step = local_search_sweep(incumbent, fitness, evaluator, result.archive, cfg, cell_count, rng);
      result.evaluator_calls += step.evaluations;
      incumbent = std::move(step.layout);
      fitness = step.fitness;
      trajectory.push_back({sweep, fitness});
      if (cfg.progress) cfg.progress({static_cast<int>(g), sweep, fitness});
      if (!step.improved) break;
    }
    result.leaders.push_back(std::move(incumbent));
    result.trajectories.push_back(std::move(trajectory));
  }

  result.best_layout = result.archive.best().layout;
  result.best_fitness = result.archive.best().fitness;
  return result;
}

std::vector<double> resimulate(const SolutionArchive& archive, const surrogate::ExactEvaluator& exact) {
  std::vector<double> out;
  out.reserve(archive.size());
  for (const auto& entry : archive.entries()) out.push_back(exact.tmax(entry.layout));
  return out;
}

std::size_t count_solutions_below(const SolutionArchive& archive,
                                  const surrogate::ExactEvaluator& exact, double threshold_K) {
  if (archive.empty()) throw DomainError("count_solutions_below: archive is empty");
  const auto tmax = resimulate(archive, exact);
  return static_cast<std::size_t>(
      std::count_if(tmax.begin(), tmax.end(), [&](double t) { return t <= threshold_K; }));
}

void write_archive_csv(std::ostream& out, const SolutionArchive& archive, std::span<const double> tmax_K) {
  out << "rank,fitness,tmax_K,cells,intensities\n";
  const auto entries = archive.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::string cells;
    std::string levels;
    for (const auto& s : entries[i].layout.sources()) {
      if (!cells.empty()) {
        cells += ',';
        levels += ',';
      }
      cells += std::to_string(s.cell);
      levels += format_number(s.intensity);
    }
    out << (i + 1) << ',' << format_number(entries[i].fitness) << ','
        << (i < tmax_K.size() ? format_number(tmax_K[i]) : std::string()) << ",\"" << cells << "\",\""
        << levels << "\"\n";
  }
}

void write_trajectory_csv(std::ostream& out, const MnsloResult& result) {
  out << "group,sweep,fitness\n";
  for (std::size_t g = 0; g < result.trajectories.size(); ++g) {
    for (const auto& p : result.trajectories[g]) {
      out << g << ',' << p.sweep << ',' << format_number(p.fitness) << '\n';
    }
  }
}

}  // namespace hslo::optim
