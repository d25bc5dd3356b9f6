#pragma once

#include <cstddef>
#include <span>
#include <unordered_set>
#include <vector>

#include "hslo/thermal/layout.hpp"

namespace hslo::optim {

struct ArchiveEntry {
  thermal::Layout layout;  // canonical
  double fitness = 0.0;

  bool operator==(const ArchiveEntry&) const = default;
};

/// Bounded set of near-optimal layouts, kept sorted by ascending fitness.
///
/// Offers may temporarily push the size above capacity; `select()` trims
/// back to the `capacity` best. Among equal fitness values the earlier
/// admission ranks first, so trimming is deterministic.
class SolutionArchive {
 public:
  explicit SolutionArchive(std::size_t capacity);

  /// Inserts the canonical form of `layout` unless already present.
  /// Returns true when the archive changed.
  bool offer(const thermal::Layout& layout, double fitness);

  /// Keeps only the `capacity` lowest-fitness entries.
  void select();

  std::span<const ArchiveEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool contains(const thermal::Layout& layout) const;
  /// Throws DomainError when empty.
  const ArchiveEntry& best() const;

  bool operator==(const SolutionArchive& other) const { return entries_ == other.entries_; }

 private:
  std::size_t capacity_;
  std::vector<ArchiveEntry> entries_;
  std::unordered_set<thermal::Layout, thermal::LayoutHash> members_;
};

}  // namespace hslo::optim
