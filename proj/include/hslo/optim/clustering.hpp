#pragma once

#include <cstddef>
#include <vector>

#include "hslo/thermal/layout.hpp"

namespace hslo::optim {

/// Mean absolute difference of the two canonical cell sequences:
/// sum_d |a_d - b_d| / N. Throws DomainError for unequal source counts.
double similarity(const thermal::Layout& a, const thermal::Layout& b);

struct Individual {
  thermal::Layout layout;
  double fitness = 0.0;
};

struct Group {
  std::size_t leader = 0;            // index into the population
  std::vector<std::size_t> members;  // leader first, then by closeness
};

/// Greedy leader clustering into `group_count` groups of NP / group_count.
///
/// The lowest-fitness remaining individual leads; its M - 1 most similar
/// remaining individuals join it. Equal fitness or equal similarity is
/// resolved by the lower population index. Throws DomainError when the
/// population size is not a multiple of `group_count`.
std::vector<Group> cluster_population(const std::vector<Individual>& population, int group_count);

}  // namespace hslo::optim
