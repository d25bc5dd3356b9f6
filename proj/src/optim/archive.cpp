#include "hslo/optim/archive.hpp"

#include <algorithm>

#include "hslo/error.hpp"

namespace hslo::optim {

SolutionArchive::SolutionArchive(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw DomainError("archive capacity must be >= 1");
}

bool SolutionArchive::offer(const thermal::Layout& layout, double fitness) {
  auto canonical = layout.canonical();
  if (members_.contains(canonical)) return false;
  const auto at = std::upper_bound(entries_.begin(), entries_.end(), fitness,
                                   [](double f, const ArchiveEntry& e) { return f < e.fitness; });
  members_.insert(canonical);
  entries_.insert(at, ArchiveEntry{std::move(canonical), fitness});
  return true;
}

void SolutionArchive::select() {
  while (entries_.size() > capacity_) {
    members_.erase(entries_.back().layout);
    entries_.pop_back();
  }
}

bool SolutionArchive::contains(const thermal::Layout& layout) const {
  return members_.contains(layout);
}

const ArchiveEntry& SolutionArchive::best() const {
  if (entries_.empty()) throw DomainError("archive is empty");
  return entries_.front();
}

}  // namespace hslo::optim
