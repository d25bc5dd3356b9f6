#include "hslo/thermal/domain.hpp"

#include <cmath>
#include <sstream>

#include "hslo/error.hpp"

namespace hslo::thermal {

std::string_view to_string(SinkEdge edge) {
  switch (edge) {
    case SinkEdge::north: return "north";
    case SinkEdge::south: return "south";
    case SinkEdge::east: return "east";
    case SinkEdge::west: return "west";
  }
  return "west";
}

SinkEdge parse_sink_edge(std::string_view name) {
  if (name == "north") return SinkEdge::north;
  if (name == "south") return SinkEdge::south;
  if (name == "east") return SinkEdge::east;
  if (name == "west") return SinkEdge::west;
  throw DomainError("unknown sink edge '" + std::string(name) + "'");
}

void DomainSpec::validate() const {
  auto fail = [](const std::string& msg) { throw DomainError("invalid domain: " + msg); };
  if (!(side_length_m > 0.0)) fail("side_length_m must be positive");
  if (!(conductivity > 0.0)) fail("conductivity must be positive");
  if (!std::isfinite(sink_temperature_K)) fail("sink_temperature_K must be finite");
  if (!(sink_width_m >= 0.0)) fail("sink_width_m must be non-negative");
  if (!(sink_center_fraction >= 0.0 && sink_center_fraction <= 1.0)) {
    fail("sink_center_fraction must lie in [0, 1]");
  }
  if (cell_partition < 1) fail("cell_partition must be >= 1");
  if (fine_resolution < 2) fail("fine_resolution must be >= 2");
  if (fine_resolution < cell_partition) fail("fine_resolution must be >= cell_partition");
  if (fine_resolution % cell_partition != 0) {
    std::ostringstream os;
    os << "fine_resolution " << fine_resolution << " is not divisible by cell_partition "
       << cell_partition;
    fail(os.str());
  }
  const double expected_side = side_length_m / cell_partition;
  if (std::abs(source_side_m - expected_side) > 1e-12 * side_length_m) {
    std::ostringstream os;
    os << "source_side_m " << source_side_m << " must equal L / C = " << expected_side;
    fail(os.str());
  }
}

std::vector<std::size_t> DomainSpec::sink_nodes() const {
  std::vector<std::size_t> nodes;
  if (!(sink_width_m > 0.0)) return nodes;
  const auto n = static_cast<std::size_t>(fine_resolution);
  const double h = spacing();
  const double center = sink_center_fraction * side_length_m;
  const double radius = std::max(sink_width_m, 0.5 * h) * (1.0 + 1e-9);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(static_cast<double>(i) * h - center) > radius) continue;
    switch (sink_edge) {
      case SinkEdge::west: nodes.push_back(i * n); break;
      case SinkEdge::east: nodes.push_back(i * n + (n - 1)); break;
      case SinkEdge::north: nodes.push_back(i); break;
      case SinkEdge::south: nodes.push_back((n - 1) * n + i); break;
    }
  }
  return nodes;
}

DomainSpec DomainSpec::with_resolution(int resolution) const {
  DomainSpec out = *this;
  out.fine_resolution = resolution;
  return out;
}

}  // namespace hslo::thermal
