#include "hslo/optim/neighborhood.hpp"

#include "hslo/error.hpp"

namespace hslo::optim {

std::vector<thermal::Layout> neighborhood(const thermal::Layout& x, int t, int cell_count, Rng& rng) {
  if (t < 1 || static_cast<std::size_t>(t) > x.size()) {
    throw DomainError("neighborhood position " + std::to_string(t) + " outside 1.." +
                      std::to_string(x.size()));
  }
  x.validate(cell_count);
  const auto pos = static_cast<std::size_t>(t - 1);
  const int own = x[pos].cell;

  // Cell -> occupying position, or -1.
  std::vector<int> holder(static_cast<std::size_t>(cell_count) + 1, -1);
  for (std::size_t k = 0; k < x.size(); ++k) holder[static_cast<std::size_t>(x[k].cell)] = static_cast<int>(k);

  std::vector<thermal::Layout> out;
  out.reserve(static_cast<std::size_t>(cell_count) - 1);
  for (int cell : rng.permutation(cell_count, 1)) {
    if (cell == own) continue;
    thermal::Layout candidate = x;
    const int k = holder[static_cast<std::size_t>(cell)];
    if (k < 0) {
      candidate.move_to(pos, cell);
    } else {
      candidate.swap_cells(pos, static_cast<std::size_t>(k));
    }
    out.push_back(std::move(candidate));
  }
  return out;
}

}  // namespace hslo::optim
