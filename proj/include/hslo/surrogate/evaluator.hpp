#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "hslo/thermal/domain.hpp"
#include "hslo/thermal/field.hpp"
#include "hslo/thermal/layout.hpp"
#include "hslo/thermal/solver.hpp"

namespace hslo::surrogate {

inline constexpr double kReferenceIntensity = 10000.0;

/// Fitness contract: layout -> predicted normalized peak temperature.
///
/// Implementations are pure functions of the canonical layout and are safe
/// to call from several threads. `calls()` counts every `evaluate` call.
class Evaluator {
 public:
  virtual ~Evaluator() = default;

  double evaluate(const thermal::Layout& layout) const {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return do_evaluate(layout);
  }

  std::uint64_t calls() const noexcept { return calls_.load(std::memory_order_relaxed); }

  virtual std::string name() const = 0;
  /// Node resolution the evaluator solves on (0 if not grid based).
  virtual int resolution() const = 0;

 protected:
  virtual double do_evaluate(const thermal::Layout& layout) const = 0;

 private:
  mutable std::atomic<std::uint64_t> calls_{0};
};

/// Evaluator that also exposes the temperature field behind its value.
class FieldEvaluator : public Evaluator {
 public:
  /// Field at the evaluator's own resolution.
  virtual thermal::TemperatureField field(const thermal::Layout& layout) const = 0;
  /// Field on the reference (fine) grid of `domain()`.
  virtual thermal::TemperatureField fine_field(const thermal::Layout& layout) const = 0;
  virtual const thermal::DomainSpec& domain() const = 0;
};

/// Full-resolution finite-difference ground truth.
class ExactEvaluator final : public FieldEvaluator {
 public:
  explicit ExactEvaluator(const thermal::DomainSpec& spec, double tolerance = 1e-8,
                          double reference_intensity = kReferenceIntensity);

  std::string name() const override { return "exact"; }
  int resolution() const override { return spec_.fine_resolution; }
  thermal::TemperatureField field(const thermal::Layout& layout) const override;
  thermal::TemperatureField fine_field(const thermal::Layout& layout) const override {
    return field(layout);
  }
  const thermal::DomainSpec& domain() const override { return spec_; }

  /// Peak temperature in kelvin.
  double tmax(const thermal::Layout& layout) const { return field(layout).max(); }

 protected:
  double do_evaluate(const thermal::Layout& layout) const override;

 private:
  thermal::DomainSpec spec_;
  double tolerance_;
  double reference_intensity_;
  std::shared_ptr<const thermal::ConductionSolver> solver_;
};

/// Same PDE on a coarser node grid.
///
/// Each cell's intensity is rescaled so the coarse grid injects the same
/// discrete power per cell as the fine grid does.
class CoarseEvaluator final : public FieldEvaluator {
 public:
  /// Throws DomainError unless coarse_resolution is a multiple of the cell
  /// partition and strictly below the fine resolution.
  CoarseEvaluator(const thermal::DomainSpec& spec, int coarse_resolution, double tolerance = 1e-8,
                  double reference_intensity = kReferenceIntensity);

  std::string name() const override { return "coarse:" + std::to_string(coarse_.fine_resolution); }
  int resolution() const override { return coarse_.fine_resolution; }
  thermal::TemperatureField field(const thermal::Layout& layout) const override;
  thermal::TemperatureField fine_field(const thermal::Layout& layout) const override;
  const thermal::DomainSpec& domain() const override { return spec_; }

 protected:
  double do_evaluate(const thermal::Layout& layout) const override;

 private:
  thermal::DomainSpec spec_;
  thermal::DomainSpec coarse_;
  double tolerance_;
  double reference_intensity_;
  std::vector<double> power_scale_;  // per cell, fine area / coarse area
  std::shared_ptr<const thermal::ConductionSolver> solver_;
};

/// LRU memoization keyed by canonical layout. Internally synchronized.
class CachedEvaluator final : public Evaluator {
 public:
  CachedEvaluator(std::shared_ptr<const Evaluator> inner, std::size_t capacity);

  std::string name() const override { return "cached(" + inner_->name() + ")"; }
  int resolution() const override { return inner_->resolution(); }

  const Evaluator& inner() const noexcept { return *inner_; }
  std::uint64_t hits() const noexcept { return hits_.load(std::memory_order_relaxed); }
  std::uint64_t misses() const noexcept { return misses_.load(std::memory_order_relaxed); }
  std::size_t size() const;

 protected:
  double do_evaluate(const thermal::Layout& layout) const override;

 private:
  using Order = std::list<thermal::Layout>;

  std::shared_ptr<const Evaluator> inner_;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  mutable Order order_;  // front = most recent
  mutable std::unordered_map<thermal::Layout, std::pair<double, Order::iterator>, thermal::LayoutHash>
      entries_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
};

/// Bilinear interpolation of a node-centered field onto an n x n node grid
/// spanning the same square.
thermal::Field2D prolong_bilinear(const thermal::Field2D& coarse, std::size_t n);

/// Builds an evaluator from "exact", "coarse:R", optionally wrapped by a
/// cache when cache_capacity > 0. Throws DomainError for unknown kinds.
std::shared_ptr<const Evaluator> make_evaluator(const std::string& kind,
                                                const thermal::DomainSpec& spec,
                                                std::size_t cache_capacity = 0,
                                                double tolerance = 1e-8);

std::shared_ptr<const FieldEvaluator> make_field_evaluator(const std::string& kind,
                                                           const thermal::DomainSpec& spec,
                                                           double tolerance = 1e-8);

}  // namespace hslo::surrogate
