#include "hslo/thermal/layout.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>

#include "hslo/error.hpp"
#include "hslo/rng.hpp"

namespace hslo::thermal {

Layout Layout::uniform(std::span<const int> cells, double intensity) {
  std::vector<Source> sources;
  sources.reserve(cells.size());
  for (int c : cells) sources.push_back({c, intensity});
  return Layout(std::move(sources));
}

bool Layout::occupies(int cell) const noexcept { return position_of(cell) >= 0; }

int Layout::position_of(int cell) const noexcept {
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (sources_[i].cell == cell) return static_cast<int>(i);
  }
  return -1;
}

void Layout::move_to(std::size_t pos, int cell) {
  if (pos >= sources_.size()) throw DomainError("source position out of range");
  if (occupies(cell)) {
    throw ConstraintViolation("cell " + std::to_string(cell) + " is already occupied");
  }
  sources_[pos].cell = cell;
}

void Layout::swap_cells(std::size_t a, std::size_t b) {
  if (a >= sources_.size() || b >= sources_.size()) {
    throw DomainError("source position out of range");
  }
  std::swap(sources_[a].cell, sources_[b].cell);
}

Layout Layout::canonical() const {
  auto sorted = sources_;
  std::sort(sorted.begin(), sorted.end(),
            [](const Source& a, const Source& b) { return a.cell < b.cell; });
  return Layout(std::move(sorted));
}

std::vector<int> Layout::canonical_cells() const {
  auto out = cells();
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Layout::cells() const {
  std::vector<int> out;
  out.reserve(sources_.size());
  for (const auto& s : sources_) out.push_back(s.cell);
  return out;
}

std::vector<double> Layout::intensities() const {
  std::vector<double> out;
  out.reserve(sources_.size());
  for (const auto& s : sources_) out.push_back(s.intensity);
  return out;
}

double Layout::total_power(double source_side_m) const {
  double sum = 0.0;
  for (const auto& s : sources_) sum += s.intensity;
  return sum * source_side_m * source_side_m;
}

void Layout::validate(int cell_count) const {
  std::unordered_set<int> seen;
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    const auto& s = sources_[i];
    if (s.cell < 1 || s.cell > cell_count) {
      throw DomainError("source " + std::to_string(i + 1) + ": cell index " +
                        std::to_string(s.cell) + " outside 1.." + std::to_string(cell_count));
    }
    if (!(s.intensity > 0.0) || !std::isfinite(s.intensity)) {
      throw DomainError("source " + std::to_string(i + 1) + ": intensity must be positive");
    }
    if (!seen.insert(s.cell).second) {
      throw ConstraintViolation("cell " + std::to_string(s.cell) + " occupied twice");
    }
  }
}

bool operator==(const Layout& a, const Layout& b) {
  if (a.size() != b.size()) return false;
  return a.canonical().sources_ == b.canonical().sources_;
}

std::size_t hash_value(const Layout& layout) noexcept {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  const Layout canonical = layout.canonical();
  for (const auto& s : canonical.sources()) {
    h = mix64(h ^ static_cast<std::uint64_t>(s.cell));
    h = mix64(h ^ std::bit_cast<std::uint64_t>(s.intensity));
  }
  return static_cast<std::size_t>(h);
}

}  // namespace hslo::thermal
