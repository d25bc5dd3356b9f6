#include "hslo/surrogate/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "hslo/error.hpp"

namespace hslo::surrogate {

AbsoluteErrors compute_mae(const thermal::TemperatureField& predicted,
                           const thermal::TemperatureField& truth) {
  if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols()) {
    throw DomainError("compute_mae: field shapes differ");
  }
  if (truth.size() == 0) throw DomainError("compute_mae: empty fields");
  AbsoluteErrors out;
  double sum = 0.0;
  const auto p = predicted.values();
  const auto t = truth.values();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double ae = std::abs(p[i] - t[i]);
    sum += ae;
    out.max_ae_K = std::max(out.max_ae_K, ae);
  }
  out.mae_K = sum / static_cast<double>(t.size());
  return out;
}

SurrogateReport benchmark_surrogate(const FieldEvaluator& candidate, const thermal::DomainSpec& spec,
                                    const dataset::IntensityScheme& scheme, std::size_t sample_count,
                                    std::uint64_t seed, double tolerance) {
  if (sample_count < 1) throw DomainError("benchmark needs at least one sample");
  const ExactEvaluator exact(spec, tolerance);
  Rng rng(seed);
  SurrogateReport report;
  report.candidate = candidate.name();
  report.sample_count = sample_count;
  report.per_sample.reserve(sample_count);
  double sum = 0.0;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const auto layout = dataset::sample_random_layout(spec, scheme, rng);
    const auto errors = compute_mae(candidate.fine_field(layout), exact.field(layout));
    report.per_sample.push_back(errors);
    sum += errors.mae_K;
    report.max_ae_K = std::max(report.max_ae_K, errors.max_ae_K);
  }
  report.mae_K = sum / static_cast<double>(sample_count);
  return report;
}

void write_report_csv(std::ostream& out, const SurrogateReport& report) {
  out << "sample_id,ae_K,max_ae_K\n";
  char line[96];
  for (std::size_t i = 0; i < report.per_sample.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.9g,%.9g\n", i, report.per_sample[i].mae_K,
                  report.per_sample[i].max_ae_K);
    out << line;
  }
}

void write_report_summary(std::ostream& out, const SurrogateReport& report) {
  char line[256];
  std::snprintf(line, sizeof line, "candidate=%s samples=%zu mae_K=%.9g max_ae_K=%.9g\n",
                report.candidate.c_str(), report.sample_count, report.mae_K, report.max_ae_K);
  out << line;
}

}  // namespace hslo::surrogate
