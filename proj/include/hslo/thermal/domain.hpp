#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hslo::thermal {

enum class SinkEdge { north, south, east, west };

std::string_view to_string(SinkEdge edge);
/// Throws DomainError for unknown names.
SinkEdge parse_sink_edge(std::string_view name);

/// Physical and discretization parameters of the square layout domain.
///
/// Nodes are indexed (row, col) with row 0 on the north edge and col 0 on
/// the west edge; spacing is h = L / (N - 1). Unit cell (r, c) covers fine
/// rows [r*N/C, (r+1)*N/C) and the matching columns, and carries the 1-based
/// index r*C + c + 1.
struct DomainSpec {
  double side_length_m = 0.1;
  double conductivity = 1.0;
  double sink_temperature_K = 298.0;
  double sink_width_m = 0.001;
  SinkEdge sink_edge = SinkEdge::west;
  double sink_center_fraction = 0.5;
  int fine_resolution = 200;
  int cell_partition = 10;
  double source_side_m = 0.01;

  bool operator==(const DomainSpec&) const = default;

  /// Throws DomainError when an invariant is broken.
  void validate() const;

  int cell_count() const noexcept { return cell_partition * cell_partition; }
  int nodes_per_cell() const noexcept { return fine_resolution / cell_partition; }
  std::size_t node_count() const noexcept {
    return static_cast<std::size_t>(fine_resolution) * static_cast<std::size_t>(fine_resolution);
  }
  double spacing() const noexcept { return side_length_m / (fine_resolution - 1); }

  /// phi0 * L^2 / k, the temperature scale of the normalized metric.
  double temperature_scale(double reference_intensity) const noexcept {
    return reference_intensity * side_length_m * side_length_m / conductivity;
  }

  /// Flat (row-major) indices of the Dirichlet sink nodes.
  ///
  /// The sink is the run of boundary nodes within max(delta, h / 2) of the
  /// sink center, so a positive width always yields at least one node. A
  /// non-positive width yields none.
  std::vector<std::size_t> sink_nodes() const;

  /// Same domain at another node resolution.
  DomainSpec with_resolution(int resolution) const;
};

/// Domain of the two-case benchmark at its published defaults.
inline DomainSpec default_domain() { return DomainSpec{}; }

}  // namespace hslo::thermal
