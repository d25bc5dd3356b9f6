#include "hslo/moea/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <thread>

#include "hslo/error.hpp"
#include "hslo/format.hpp"

namespace hslo::moea {

bool dominates(const Objectives& a, const Objectives& b) noexcept {
  bool better = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) better = true;
  }
  return better;
}

std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const Objectives> points) {
  const std::size_t n = points.size();
  for (const auto& p : points) {
    for (double v : p) {
      if (!std::isfinite(v)) throw DomainError("non_dominated_sort: non-finite objective");
    }
  }
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(points[i], points[j])) {
        dominated[i].push_back(j);
        ++count[j];
      } else if (dominates(points[j], points[i])) {
        dominated[j].push_back(i);
        ++count[i];
      }
    }
  }
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      for (std::size_t j : dominated[i]) {
        if (--count[j] == 0) next.push_back(j);
      }
    }
    std::ranges::sort(next);
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const Objectives> front) {
  const std::size_t n = front.size();
  if (n == 0) throw DomainError("crowding_distance: empty front");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> distance(n, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t m = 0; m < Objectives{}.size(); ++m) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return front[a][m] < front[b][m]; });
    distance[order.front()] = inf;
    distance[order.back()] = inf;
    const double range = front[order.back()][m] - front[order.front()][m];
    if (!(range > 0.0)) continue;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      distance[order[k]] += (front[order[k + 1]][m] - front[order[k - 1]][m]) / range;
    }
  }
  return distance;
}

void MoeaConfig::validate() const {
  if (population_size < 2 || population_size % 2 != 0) {
    throw ConfigError("moea: population_size must be even and >= 2");
  }
  if (generations < 0) throw ConfigError("moea: generations must be >= 0");
  if (!(pc >= 0.0 && pc <= 1.0)) throw ConfigError("moea: pc must lie in [0, 1]");
  if (!(pm >= 0.0 && pm <= 1.0)) throw ConfigError("moea: pm must lie in [0, 1]");
  if (m_max < 1 || m_max > 4) throw ConfigError("moea: m_max must lie in 1..4");
  if (layer_count < 1) throw ConfigError("moea: layer_count must be >= 1");
}

ObjectiveFunction analytic_objective(const BackbonePreset& preset) {
  return [preset](const ArchitectureGenome& g) {
    return Objectives{error_proxy(g), static_cast<double>(cost_model(g, preset).params)};
  };
}

namespace {

void evaluate_into(const ObjectiveFunction& evaluate, std::vector<Candidate>& items, std::size_t from,
                   unsigned workers) {
  const std::size_t n = items.size() - from;
  if (workers <= 1 || n < 2) {
    for (std::size_t i = from; i < items.size(); ++i) items[i].objectives = evaluate(items[i].genome);
    return;
  }
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::exception_ptr> errors(used);
  {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < used; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t i = from + w; i < items.size(); i += used) {
            items[i].objectives = evaluate(items[i].genome);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<Candidate> select_survivors(std::vector<Candidate> merged, std::size_t n) {
  std::vector<Candidate> pool;
  std::vector<Candidate> repeats;
  std::set<ArchitectureGenome> seen;
  for (auto& c : merged) {
    if (seen.insert(c.genome).second) {
      pool.push_back(std::move(c));
    } else {
      repeats.push_back(std::move(c));
    }
  }

  auto rank_pool = [](std::vector<Candidate>& items) {
    std::vector<Objectives> points;
    points.reserve(items.size());
    for (const auto& c : items) points.push_back(c.objectives);
    return non_dominated_sort(points);
  };

  std::vector<Candidate> next;
  next.reserve(n);
  for (auto* source : {&pool, &repeats}) {
    if (next.size() >= n || source->empty()) continue;
    const auto fronts = rank_pool(*source);
    for (std::size_t r = 0; r < fronts.size() && next.size() < n; ++r) {
      std::vector<Objectives> points;
      for (std::size_t i : fronts[r]) points.push_back((*source)[i].objectives);
      const auto crowd = crowding_distance(points);
      std::vector<std::size_t> order(fronts[r].size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
      for (std::size_t k : order) {
        if (next.size() >= n) break;
        Candidate c = (*source)[fronts[r][k]];
        c.rank = static_cast<int>(r);
        c.crowding = crowd[k];
        next.push_back(std::move(c));
      }
    }
  }
  return next;
}

}  // namespace

MoeaResult run_nsga2(const ObjectiveFunction& evaluate, const MoeaConfig& cfg) {
  cfg.validate();
  if (!evaluate) throw ConfigError("moea: no objective function");
  const auto n = static_cast<std::size_t>(cfg.population_size);
  const Rng root(cfg.seed);
  Rng init_rng = root.split(1);

  MoeaResult result;
  std::vector<Candidate> population;
  population.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    population.push_back({sample_genome(cfg.m_max, init_rng, cfg.layer_count), {}, 0, 0.0});
  }
  evaluate_into(evaluate, population, 0, cfg.workers);
  result.evaluations += n;
  population = select_survivors(std::move(population), n);

  for (int gen = 1; gen <= cfg.generations; ++gen) {
    Rng rng = root.split(1000 + static_cast<std::uint64_t>(gen));
    std::vector<Candidate> merged = population;
    for (std::size_t j = 0; j < n; j += 2) {
      const auto& a = population[rng.uniform_index(population.size())].genome;
      const auto& b = population[rng.uniform_index(population.size())].genome;
      auto [c1, c2] = crossover(a, b, cfg.pc, rng);
      merged.push_back({mutate(c1, cfg.pm, cfg.m_max, rng), {}, 0, 0.0});
      merged.push_back({mutate(c2, cfg.pm, cfg.m_max, rng), {}, 0, 0.0});
    }
    evaluate_into(evaluate, merged, n, cfg.workers);
    result.evaluations += n;
    population = select_survivors(std::move(merged), n);
    if (cfg.progress) {
      cfg.progress(gen, static_cast<std::size_t>(std::ranges::count(population, 0, &Candidate::rank)));
    }
  }

  std::set<ArchitectureGenome> seen;
  for (const auto& c : population) {
    if (c.rank == 0 && seen.insert(c.genome).second) result.front.push_back(c);
  }
  std::ranges::sort(result.front, [](const Candidate& a, const Candidate& b) {
    if (a.objectives != b.objectives) return a.objectives < b.objectives;
    return a.genome < b.genome;
  });
  result.population = std::move(population);
  return result;
}

void write_front_csv(std::ostream& out, std::span<const Candidate> front, const BackbonePreset& preset) {
  out << "error_proxy,params,flops,genome\n";
  for (const auto& c : front) {
    const auto cost = cost_model(c.genome, preset);
    out << format_number(c.objectives[0]) << ',' << cost.params << ',' << cost.flops << ',' << to_string(c.genome) << '\n';
  }
}

}  // namespace hslo::moea
