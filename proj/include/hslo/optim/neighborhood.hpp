#pragma once

#include <vector>

#include "hslo/rng.hpp"
#include "hslo/thermal/layout.hpp"

namespace hslo::optim {

/// Single-source neighbors of `x` for the source at 1-based position `t`.
///
/// Cells are visited in a random order drawn from `rng`; the cell already
/// held by source t is skipped. A free cell moves source t there; a cell
/// held by source k swaps the cells of t and k. With C^2 cells this gives
/// exactly C^2 - 1 candidates. Throws DomainError for t outside 1..|x|.
std::vector<thermal::Layout> neighborhood(const thermal::Layout& x, int t, int cell_count, Rng& rng);

}  // namespace hslo::optim
