#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hslo/dataset/sampling.hpp"
#include "hslo/surrogate/evaluator.hpp"

namespace hslo::surrogate {

struct AbsoluteErrors {
  double mae_K = 0.0;
  double max_ae_K = 0.0;
};

/// Mean and maximum of |predicted - truth| over every node.
/// Throws DomainError on a shape mismatch.
AbsoluteErrors compute_mae(const thermal::TemperatureField& predicted,
                           const thermal::TemperatureField& truth);

struct SurrogateReport {
  double mae_K = 0.0;     // mean of the per-sample MAE
  double max_ae_K = 0.0;  // worst node error over all samples
  std::vector<AbsoluteErrors> per_sample;
  std::size_t sample_count = 0;
  std::string candidate;
};

/// Compares `candidate` fields (prolonged to the fine grid) with exact
/// solves on `sample_count` seeded random layouts.
SurrogateReport benchmark_surrogate(const FieldEvaluator& candidate, const thermal::DomainSpec& spec,
                                    const dataset::IntensityScheme& scheme, std::size_t sample_count,
                                    std::uint64_t seed, double tolerance = 1e-8);

/// "sample_id,ae_K,max_ae_K" rows.
void write_report_csv(std::ostream& out, const SurrogateReport& report);
/// Single "key=value ..." summary line.
void write_report_summary(std::ostream& out, const SurrogateReport& report);

}  // namespace hslo::surrogate
