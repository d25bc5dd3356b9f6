#include "hslo/optim/clustering.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "hslo/error.hpp"

namespace hslo::optim {

double similarity(const thermal::Layout& a, const thermal::Layout& b) {
  if (a.size() != b.size()) {
    throw DomainError("similarity needs equal source counts (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  }
  if (a.empty()) return 0.0;
  const auto ca = a.canonical_cells();
  const auto cb = b.canonical_cells();
  long sum = 0;
  for (std::size_t d = 0; d < ca.size(); ++d) sum += std::abs(ca[d] - cb[d]);
  return static_cast<double>(sum) / static_cast<double>(ca.size());
}

std::vector<Group> cluster_population(const std::vector<Individual>& population, int group_count) {
  if (group_count < 1) throw DomainError("group count must be >= 1");
  const std::size_t np = population.size();
  const auto c = static_cast<std::size_t>(group_count);
  if (np == 0 || np % c != 0) {
    throw DomainError("population size " + std::to_string(np) + " is not divisible by " +
                      std::to_string(group_count) + " groups");
  }
  const std::size_t group_size = np / c;

  // Ascending fitness; stable so equal fitness keeps population order.
  std::vector<std::size_t> remaining(np);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  std::stable_sort(remaining.begin(), remaining.end(), [&](std::size_t i, std::size_t j) {
    return population[i].fitness < population[j].fitness;
  });

  std::vector<Group> groups;
  groups.reserve(c);
  while (!remaining.empty()) {
    const std::size_t leader = remaining.front();
    std::vector<std::pair<double, std::size_t>> others;
    others.reserve(remaining.size() - 1);
    for (std::size_t k = 1; k < remaining.size(); ++k) {
      const auto idx = remaining[k];
      others.emplace_back(similarity(population[leader].layout, population[idx].layout), idx);
    }
    std::sort(others.begin(), others.end());  // distance, then population index
    Group group;
    group.leader = leader;
    group.members.push_back(leader);
    for (std::size_t k = 0; k + 1 < group_size; ++k) group.members.push_back(others[k].second);
    groups.push_back(std::move(group));
    std::erase_if(remaining, [&](std::size_t idx) {
      const auto& m = groups.back().members;
      return std::find(m.begin(), m.end(), idx) != m.end();
    });
  }
  return groups;
}

}  // namespace hslo::optim
