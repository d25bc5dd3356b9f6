#include "hslo/thermal/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "hslo/error.hpp"

namespace hslo::thermal {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vector = Eigen::VectorXd;
using Factorization = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

double boundary_weight(std::size_t i, std::size_t n) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; }

}  // namespace

IntensityField rasterize_intensity(const Layout& layout, const DomainSpec& spec) {
  spec.validate();
  layout.validate(spec.cell_count());
  const auto n = static_cast<std::size_t>(spec.fine_resolution);
  const auto m = static_cast<std::size_t>(spec.nodes_per_cell());
  const auto c = static_cast<std::size_t>(spec.cell_partition);
  IntensityField field(n, n, 0.0);
  for (const auto& s : layout.sources()) {
    const auto idx = static_cast<std::size_t>(s.cell - 1);
    const std::size_t r0 = (idx / c) * m;
    const std::size_t c0 = (idx % c) * m;
    for (std::size_t r = r0; r < r0 + m; ++r) {
      for (std::size_t col = c0; col < c0 + m; ++col) field(r, col) = s.intensity;
    }
  }
  return field;
}

std::vector<double> cell_control_areas(const DomainSpec& spec) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.fine_resolution);
  const auto m = static_cast<std::size_t>(spec.nodes_per_cell());
  const auto c = static_cast<std::size_t>(spec.cell_partition);
  const double h2 = spec.spacing() * spec.spacing();
  std::vector<double> areas(c * c, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t col = 0; col < n; ++col) {
      areas[(r / m) * c + col / m] += boundary_weight(r, n) * boundary_weight(col, n) * h2;
    }
  }
  return areas;
}

struct ConductionSolver::Impl {
  DomainSpec spec;
  std::size_t n = 0;
  std::vector<int> unknown_of_node;  // -1 on sink nodes
  std::vector<std::size_t> node_of_unknown;
  std::vector<double> rhs_weight;    // w_P * h^2 / k per unknown
  SparseMatrix matrix;
  Vector inverse_diagonal;

  mutable std::once_flag factor_once;
  mutable Factorization factor;
  mutable bool factor_ok = false;

  void assemble();
  const Factorization& factorization() const;
  Vector residual(const Vector& b, const Vector& x) const { return b - matrix.selfadjointView<Eigen::Lower>() * x; }
  Vector solve_direct(const Vector& b, double tol, SolveReport& report) const;
  Vector solve_cg(const Vector& b, double tol, int max_iter, SolveReport& report) const;
};

void ConductionSolver::Impl::assemble() {
  const auto sink = spec.sink_nodes();
  if (sink.empty()) {
    throw SingularSystemError("domain has no sink nodes; the Neumann problem is singular");
  }
  unknown_of_node.assign(n * n, 0);
  for (auto s : sink) unknown_of_node[s] = -1;
  int next = 0;
  for (std::size_t p = 0; p < n * n; ++p) {
    if (unknown_of_node[p] >= 0) {
      unknown_of_node[p] = next++;
      node_of_unknown.push_back(p);
    }
  }
  const double h2k = spec.spacing() * spec.spacing() / spec.conductivity;
  rhs_weight.resize(node_of_unknown.size());
  for (std::size_t u = 0; u < node_of_unknown.size(); ++u) {
    const auto p = node_of_unknown[u];
    rhs_weight[u] = boundary_weight(p / n, n) * boundary_weight(p % n, n) * h2k;
  }

  // Edge conductances: 1 in the interior, 1/2 for edges lying on the boundary.
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(3 * node_of_unknown.size());
  Vector diagonal = Vector::Zero(static_cast<Eigen::Index>(node_of_unknown.size()));
  auto couple = [&](std::size_t p, std::size_t q, double g) {
    const int up = unknown_of_node[p];
    const int uq = unknown_of_node[q];
    if (up >= 0) diagonal[up] += g;
    if (uq >= 0) diagonal[uq] += g;
    if (up >= 0 && uq >= 0) triplets.emplace_back(std::max(up, uq), std::min(up, uq), -g);
  };
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t p = r * n + c;
      if (c + 1 < n) couple(p, p + 1, boundary_weight(r, n) < 1.0 ? 0.5 : 1.0);
      if (r + 1 < n) couple(p, p + n, boundary_weight(c, n) < 1.0 ? 0.5 : 1.0);
    }
  }
  for (Eigen::Index u = 0; u < diagonal.size(); ++u) {
    triplets.emplace_back(static_cast<int>(u), static_cast<int>(u), diagonal[u]);
  }
  const auto size = static_cast<Eigen::Index>(node_of_unknown.size());
  matrix.resize(size, size);
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  matrix.makeCompressed();
  inverse_diagonal = diagonal.cwiseInverse();
}

const Factorization& ConductionSolver::Impl::factorization() const {
  std::call_once(factor_once, [this] {
    factor.compute(matrix);
    factor_ok = factor.info() == Eigen::Success;
  });
  if (!factor_ok) throw SingularSystemError("sparse LDLT factorization failed");
  return factor;
}

Vector ConductionSolver::Impl::solve_direct(const Vector& b, double tol, SolveReport& report) const {
  const auto& f = factorization();
  const double bnorm = b.norm();
  Vector x = f.solve(b);
  Vector r = residual(b, x);
  double rel = r.norm() / bnorm;
  int steps = 1;
  // A couple of refinement passes recover the last digits on large grids.
  for (; rel > tol && steps < 4; ++steps) {
    x += f.solve(r);
    r = residual(b, x);
    rel = r.norm() / bnorm;
  }
  report.relative_residual = rel;
  report.iterations = steps;
  if (!(rel <= tol)) {
    std::ostringstream os;
    os << "direct solve residual " << rel << " exceeds tolerance " << tol;
    throw SolverError(os.str(), rel);
  }
  return x;
}

Vector ConductionSolver::Impl::solve_cg(const Vector& b, double tol, int max_iter,
                                        SolveReport& report) const {
  const double bnorm = b.norm();
  const auto a = matrix.selfadjointView<Eigen::Lower>();
  Vector x = Vector::Zero(b.size());
  Vector r = b;
  Vector z = inverse_diagonal.cwiseProduct(r);
  Vector p = z;
  double rz = r.dot(z);
  double rel = r.norm() / bnorm;
  int it = 0;
  while (rel > tol && it < max_iter) {
    const Vector ap = a * p;
    const double alpha = rz / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    ++it;
    // Recompute the true residual now and then; the recurrence drifts.
    if (it % 256 == 0) r = residual(b, x);
    rel = r.norm() / bnorm;
    z = inverse_diagonal.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  rel = residual(b, x).norm() / bnorm;
  report.relative_residual = rel;
  report.iterations = it;
  if (!(rel <= tol)) {
    std::ostringstream os;
    os << "conjugate gradient stopped after " << it << " iterations at residual " << rel
       << " (tolerance " << tol << ")";
    throw SolverError(os.str(), rel);
  }
  return x;
}

ConductionSolver::ConductionSolver(const DomainSpec& spec) : impl_(std::make_unique<Impl>()) {
  spec.validate();
  impl_->spec = spec;
  impl_->n = static_cast<std::size_t>(spec.fine_resolution);
  impl_->assemble();
}

ConductionSolver::~ConductionSolver() = default;
ConductionSolver::ConductionSolver(ConductionSolver&&) noexcept = default;
ConductionSolver& ConductionSolver::operator=(ConductionSolver&&) noexcept = default;

const DomainSpec& ConductionSolver::spec() const noexcept { return impl_->spec; }

std::size_t ConductionSolver::unknowns() const noexcept { return impl_->node_of_unknown.size(); }

TemperatureField ConductionSolver::solve(const IntensityField& intensity, const SolveOptions& options,
                                         SolveReport* report) const {
  const auto& im = *impl_;
  if (intensity.rows() != im.n || intensity.cols() != im.n) {
    throw DomainError("intensity field dimensions do not match the domain resolution");
  }
  if (!(options.tolerance > 0.0)) throw DomainError("solver tolerance must be positive");

  Vector b(static_cast<Eigen::Index>(im.node_of_unknown.size()));
  for (std::size_t u = 0; u < im.node_of_unknown.size(); ++u) {
    b[static_cast<Eigen::Index>(u)] = im.rhs_weight[u] * intensity[im.node_of_unknown[u]];
  }

  SolveReport local;
  const double t0 = im.spec.sink_temperature_K;
  TemperatureField field(im.n, im.n, t0);
  if (b.squaredNorm() == 0.0) {
    if (report) *report = local;
    return field;
  }

  Vector theta;
  if (options.kind == SolverKind::direct) {
    theta = im.solve_direct(b, options.tolerance, local);
  } else {
    const int max_iter =
        options.max_iterations > 0 ? options.max_iterations : 100 * static_cast<int>(im.n) + 1000;
    theta = im.solve_cg(b, options.tolerance, max_iter, local);
  }
  for (std::size_t u = 0; u < im.node_of_unknown.size(); ++u) {
    field[im.node_of_unknown[u]] = t0 + theta[static_cast<Eigen::Index>(u)];
  }
  if (report) *report = local;
  return field;
}

namespace {

auto spec_key(const DomainSpec& s) {
  return std::make_tuple(s.side_length_m, s.conductivity, s.sink_temperature_K, s.sink_width_m,
                         static_cast<int>(s.sink_edge), s.sink_center_fraction, s.fine_resolution,
                         s.cell_partition, s.source_side_m);
}

}  // namespace

std::shared_ptr<const ConductionSolver> shared_solver(const DomainSpec& spec) {
  using Key = decltype(spec_key(spec));
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const ConductionSolver>> cache;
  const auto key = spec_key(spec);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto solver = std::make_shared<const ConductionSolver>(spec);
  std::lock_guard lock(mutex);
  return cache.try_emplace(key, std::move(solver)).first->second;
}

TemperatureField solve_temperature(const Layout& layout, const DomainSpec& spec, double tolerance) {
  const auto phi = rasterize_intensity(layout, spec);
  SolveOptions options;
  options.tolerance = tolerance;
  return shared_solver(spec)->solve(phi, options);
}

double normalized_metric(double tmax_K, const DomainSpec& spec, double reference_intensity) {
  if (!(reference_intensity > 0.0)) throw DomainError("reference intensity must be positive");
  return (tmax_K - spec.sink_temperature_K) / spec.temperature_scale(reference_intensity);
}

double normalized_metric(const TemperatureField& field, const DomainSpec& spec,
                         double reference_intensity) {
  return normalized_metric(field.max(), spec, reference_intensity);
}

}  // namespace hslo::thermal
