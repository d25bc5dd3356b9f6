#include "hslo/surrogate/evaluator.hpp"

#include <charconv>
#include <cmath>

#include "hslo/error.hpp"

namespace hslo::surrogate {

using thermal::DomainSpec;
using thermal::Layout;
using thermal::TemperatureField;

ExactEvaluator::ExactEvaluator(const DomainSpec& spec, double tolerance, double reference_intensity)
    : spec_(spec),
      tolerance_(tolerance),
      reference_intensity_(reference_intensity),
      solver_(thermal::shared_solver(spec)) {}

TemperatureField ExactEvaluator::field(const Layout& layout) const {
  thermal::SolveOptions options;
  options.tolerance = tolerance_;
  return solver_->solve(thermal::rasterize_intensity(layout, spec_), options);
}

double ExactEvaluator::do_evaluate(const Layout& layout) const {
  return thermal::normalized_metric(field(layout), spec_, reference_intensity_);
}

CoarseEvaluator::CoarseEvaluator(const DomainSpec& spec, int coarse_resolution, double tolerance,
                                 double reference_intensity)
    : spec_(spec), tolerance_(tolerance), reference_intensity_(reference_intensity) {
  spec.validate();
  if (coarse_resolution < spec.cell_partition || coarse_resolution < 2 ||
      coarse_resolution % spec.cell_partition != 0) {
    throw DomainError("coarse resolution " + std::to_string(coarse_resolution) +
                      " must be a positive multiple of the cell partition " +
                      std::to_string(spec.cell_partition));
  }
  if (coarse_resolution >= spec.fine_resolution) {
    throw DomainError("coarse resolution " + std::to_string(coarse_resolution) +
                      " must be below the fine resolution " + std::to_string(spec.fine_resolution));
  }
  coarse_ = spec.with_resolution(coarse_resolution);
  const auto fine_area = thermal::cell_control_areas(spec_);
  const auto coarse_area = thermal::cell_control_areas(coarse_);
  power_scale_.resize(fine_area.size());
  for (std::size_t i = 0; i < fine_area.size(); ++i) power_scale_[i] = fine_area[i] / coarse_area[i];
  solver_ = thermal::shared_solver(coarse_);
}

TemperatureField CoarseEvaluator::field(const Layout& layout) const {
  layout.validate(spec_.cell_count());
  std::vector<thermal::Source> scaled(layout.sources().begin(), layout.sources().end());
  for (auto& s : scaled) s.intensity *= power_scale_[static_cast<std::size_t>(s.cell - 1)];
  thermal::SolveOptions options;
  options.tolerance = tolerance_;
  return solver_->solve(thermal::rasterize_intensity(Layout(std::move(scaled)), coarse_), options);
}

TemperatureField CoarseEvaluator::fine_field(const Layout& layout) const {
  return prolong_bilinear(field(layout), static_cast<std::size_t>(spec_.fine_resolution));
}

double CoarseEvaluator::do_evaluate(const Layout& layout) const {
  return thermal::normalized_metric(field(layout), spec_, reference_intensity_);
}

CachedEvaluator::CachedEvaluator(std::shared_ptr<const Evaluator> inner, std::size_t capacity)
    : inner_(std::move(inner)), capacity_(capacity) {
  if (!inner_) throw DomainError("cached evaluator needs an inner evaluator");
  if (capacity_ < 1) throw DomainError("cache capacity must be >= 1");
}

std::size_t CachedEvaluator::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

double CachedEvaluator::do_evaluate(const Layout& layout) const {
  auto key = layout.canonical();
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) {
      order_.splice(order_.begin(), order_, it->second.second);
      hits_.fetch_add(1, std::memory_order_relaxed);
      return it->second.first;
    }
  }
  misses_.fetch_add(1, std::memory_order_relaxed);
  const double value = inner_->evaluate(key);
  std::lock_guard lock(mutex_);
  if (entries_.find(key) == entries_.end()) {
    order_.push_front(key);
    entries_.emplace(std::move(key), std::make_pair(value, order_.begin()));
    while (entries_.size() > capacity_) {
      entries_.erase(order_.back());
      order_.pop_back();
    }
  }
  return value;
}

thermal::Field2D prolong_bilinear(const thermal::Field2D& coarse, std::size_t n) {
  const std::size_t m = coarse.rows();
  if (m < 2 || coarse.cols() != m || n < 2) {
    throw DomainError("bilinear prolongation needs square grids of at least 2 nodes");
  }
  // Per-axis source index and weight, shared by rows and columns.
  std::vector<std::size_t> lo(n);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) * static_cast<double>(m - 1) / static_cast<double>(n - 1);
    auto i0 = static_cast<std::size_t>(std::floor(x));
    if (i0 > m - 2) i0 = m - 2;
    lo[i] = i0;
    w[i] = x - static_cast<double>(i0);
  }
  thermal::Field2D fine(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t r0 = lo[r];
    const double wr = w[r];
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t c0 = lo[c];
      const double wc = w[c];
      const double top = (1.0 - wc) * coarse(r0, c0) + wc * coarse(r0, c0 + 1);
      const double bottom = (1.0 - wc) * coarse(r0 + 1, c0) + wc * coarse(r0 + 1, c0 + 1);
      fine(r, c) = (1.0 - wr) * top + wr * bottom;
    }
  }
  return fine;
}

std::shared_ptr<const FieldEvaluator> make_field_evaluator(const std::string& kind,
                                                           const DomainSpec& spec, double tolerance) {
  if (kind == "exact") return std::make_shared<const ExactEvaluator>(spec, tolerance);
  if (kind.rfind("coarse:", 0) == 0) {
    int resolution = 0;
    const char* first = kind.data() + 7;
    const char* last = kind.data() + kind.size();
    const auto [ptr, ec] = std::from_chars(first, last, resolution);
    if (ec != std::errc() || ptr != last) {
      throw DomainError("bad coarse evaluator resolution in '" + kind + "'");
    }
    return std::make_shared<const CoarseEvaluator>(spec, resolution, tolerance);
  }
  throw DomainError("unknown evaluator '" + kind + "' (expected exact or coarse:R)");
}

std::shared_ptr<const Evaluator> make_evaluator(const std::string& kind, const DomainSpec& spec,
                                                std::size_t cache_capacity, double tolerance) {
  std::shared_ptr<const Evaluator> base = make_field_evaluator(kind, spec, tolerance);
  if (cache_capacity == 0) return base;
  return std::make_shared<const CachedEvaluator>(std::move(base), cache_capacity);
}

}  // namespace hslo::surrogate
