#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hslo::thermal {

struct Source {
  int cell = 0;            // 1-based cell index
  double intensity = 0.0;  // W/m^2

  bool operator==(const Source&) const = default;
};

/// Positional sequence of heat sources.
///
/// Position order matters to the neighborhood moves (a move acts on "the
/// t-th source"), but equality, hashing and similarity only ever look at the
/// canonical form: entries sorted ascending by cell index.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::vector<Source> sources) : sources_(std::move(sources)) {}

  /// Uniform intensity for every listed cell.
  static Layout uniform(std::span<const int> cells, double intensity);

  std::size_t size() const noexcept { return sources_.size(); }
  bool empty() const noexcept { return sources_.empty(); }
  const Source& operator[](std::size_t pos) const { return sources_[pos]; }
  std::span<const Source> sources() const noexcept { return sources_; }

  bool occupies(int cell) const noexcept;
  /// Position holding `cell`, or -1.
  int position_of(int cell) const noexcept;

  /// Moves the source at `pos` to `cell` (which must be free).
  void move_to(std::size_t pos, int cell);
  /// Exchanges the cells of the sources at positions a and b.
  void swap_cells(std::size_t a, std::size_t b);

  Layout canonical() const;
  std::vector<int> canonical_cells() const;
  std::vector<int> cells() const;
  std::vector<double> intensities() const;
  double total_power(double source_side_m) const;

  /// Throws DomainError for an index outside 1..cell_count or a
  /// non-positive intensity, ConstraintViolation for a repeated cell.
  void validate(int cell_count) const;

  friend bool operator==(const Layout& a, const Layout& b);

 private:
  std::vector<Source> sources_;
};

std::size_t hash_value(const Layout& layout) noexcept;

struct LayoutHash {
  std::size_t operator()(const Layout& layout) const noexcept { return hash_value(layout); }
};

}  // namespace hslo::thermal
