#pragma once

#include <memory>

#include "hslo/thermal/domain.hpp"
#include "hslo/thermal/field.hpp"
#include "hslo/thermal/layout.hpp"

namespace hslo::thermal {

/// Node value = intensity of the source whose cell covers the node, else 0.
/// Throws DomainError / ConstraintViolation on an invalid layout.
IntensityField rasterize_intensity(const Layout& layout, const DomainSpec& spec);

/// Discrete power injected per unit intensity by each cell (index 0 is
/// cell 1): the control-volume area of the cell's nodes, h^2 per interior
/// node, h^2/2 per edge node, h^2/4 per corner node.
std::vector<double> cell_control_areas(const DomainSpec& spec);

enum class SolverKind { direct, conjugate_gradient };

struct SolveOptions {
  double tolerance = 1e-8;  // relative residual of the assembled system
  SolverKind kind = SolverKind::direct;
  int max_iterations = 0;   // 0 selects a size-dependent default
};

struct SolveReport {
  double relative_residual = 0.0;
  int iterations = 0;
};

/// Five-point finite-difference solver for k*lap(T) + phi = 0 with T = T0 on
/// the sink and zero normal flux elsewhere (mirror ghost nodes).
///
/// The unknowns are theta = T - T0 at all non-sink nodes. Boundary rows are
/// scaled by 1/2 (edges) and 1/4 (corners), which leaves the ghost-node
/// stencil unchanged but makes the matrix symmetric positive definite.
/// The sparse factorization is computed once on first direct solve and then
/// shared; `solve` is safe to call concurrently.
class ConductionSolver {
 public:
  /// Throws DomainError for an invalid spec, SingularSystemError when the
  /// spec has no sink nodes.
  explicit ConductionSolver(const DomainSpec& spec);
  ~ConductionSolver();
  ConductionSolver(ConductionSolver&&) noexcept;
  ConductionSolver& operator=(ConductionSolver&&) noexcept;

  const DomainSpec& spec() const noexcept;
  std::size_t unknowns() const noexcept;

  /// Throws SolverError carrying the final residual if `tolerance` is not met.
  TemperatureField solve(const IntensityField& intensity, const SolveOptions& options = {},
                         SolveReport* report = nullptr) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Process-wide solver instance for `spec`, built on first use.
std::shared_ptr<const ConductionSolver> shared_solver(const DomainSpec& spec);

TemperatureField solve_temperature(const Layout& layout, const DomainSpec& spec,
                                   double tolerance = 1e-8);

/// (max(field) - T0) / (phi0 * L^2 / k).
double normalized_metric(const TemperatureField& field, const DomainSpec& spec,
                         double reference_intensity = 10000.0);

/// Same normalization applied to a bare peak temperature.
double normalized_metric(double tmax_K, const DomainSpec& spec,
                         double reference_intensity = 10000.0);

}  // namespace hslo::thermal
