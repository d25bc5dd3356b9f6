#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "hslo/dataset/sampling.hpp"
#include "hslo/error.hpp"
#include "hslo/surrogate/evaluator.hpp"
#include "hslo/surrogate/metrics.hpp"
#include "hslo/thermal/solver.hpp"

using namespace hslo;
using namespace hslo::surrogate;
using thermal::Layout;

TEST_SUITE("surrogate") {

TEST_CASE("mean absolute error arithmetic") {
  thermal::Field2D truth(200, 200, 300.0);
  auto pred = truth;
  pred(0, 0) = 304.0;
  auto e = compute_mae(pred, truth);
  CHECK(e.mae_K == 4.0 / 40000.0);
  CHECK(e.max_ae_K == 4.0);
  pred(199, 199) = 298.0;
  e = compute_mae(pred, truth);
  CHECK(e.mae_K == 6.0 / 40000.0);
  CHECK(e.max_ae_K == 4.0);
  CHECK_THROWS_AS(compute_mae(thermal::Field2D(2, 2), thermal::Field2D(2, 3)), DomainError);
}

TEST_CASE("exact evaluator agrees with a direct solve and counts calls") {
  const thermal::DomainSpec s;
  const ExactEvaluator exact(s);
  const Layout l({{5, 10000.0}, {44, 10000.0}});
  const auto t = thermal::solve_temperature(l, s);
  CHECK(exact.evaluate(l) == thermal::normalized_metric(t, s));
  CHECK(exact.tmax(l) == t.max());
  CHECK(exact.calls() == 1);
  CHECK(exact.name() == "exact");
  CHECK(exact.resolution() == 200);
}

TEST_CASE("coarse evaluator construction rules") {
  const thermal::DomainSpec s;
  CHECK_THROWS_AS(CoarseEvaluator(s, 55), DomainError);
  CHECK_THROWS_AS(CoarseEvaluator(s, 200), DomainError);
  CHECK_NOTHROW(CoarseEvaluator(s, 50));
  CHECK_THROWS_AS(make_evaluator("fancy", s), DomainError);
  CHECK_THROWS_AS(make_evaluator("coarse:x", s), DomainError);
  CHECK(make_evaluator("coarse:100", s)->resolution() == 100);
  CHECK(make_evaluator("coarse:50", s, 10)->name() == "cached(coarse:50)");
}

TEST_CASE("coarse evaluator tracks an interior source") {
  const thermal::DomainSpec s;
  const CoarseEvaluator coarse(s, 50);
  // A single source far from the sink: the coarse peak tracks the fine one.
  const Layout l({{56, 10000.0}});
  const ExactEvaluator exact(s);
  CHECK(std::fabs(coarse.evaluate(l) - exact.evaluate(l)) < 0.02);
  CHECK(coarse.field(l).rows() == 50);
  CHECK(coarse.fine_field(l).rows() == 200);
}

TEST_CASE("coarse ranking tracks the exact ranking") {
  const thermal::DomainSpec s;
  const ExactEvaluator exact(s);
  const CoarseEvaluator coarse(s, 50);
  Rng rng(12);
  std::vector<double> e, c;
  for (int i = 0; i < 30; ++i) {
    const auto l = dataset::sample_random_layout(s, dataset::IntensityScheme::uniform(), rng);
    e.push_back(exact.evaluate(l));
    c.push_back(coarse.evaluate(l));
  }
  int concordant = 0, total = 0;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j, ++total)
      concordant += ((e[i] - e[j]) * (c[i] - c[j]) > 0) ? 1 : 0;
  CHECK(concordant > total * 3 / 4);
}

TEST_CASE("cache returns identical values and evicts least recent") {
  const thermal::DomainSpec s;
  auto inner = std::make_shared<const CoarseEvaluator>(s, 50);
  CachedEvaluator cache(inner, 2);
  const Layout a({{1, 10000.0}}), b({{2, 10000.0}}), c({{3, 10000.0}});
  const double fa = cache.evaluate(a);
  CHECK(cache.evaluate(Layout({{1, 10000.0}})) == fa);
  CHECK(cache.hits() == 1);
  cache.evaluate(b);
  cache.evaluate(a);  // a most recent
  cache.evaluate(c);  // evicts b
  CHECK(cache.size() == 2);
  const auto misses = cache.misses();
  cache.evaluate(a);
  CHECK(cache.misses() == misses);
  cache.evaluate(b);
  CHECK(cache.misses() == misses + 1);
  CHECK(inner->calls() == cache.misses());
}

TEST_CASE("bilinear prolongation reproduces linear fields") {
  thermal::Field2D coarse(5, 5);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) coarse(r, c) = 2.0 * r - 3.0 * c + 1.0;
  const auto fine = prolong_bilinear(coarse, 17);
  CHECK(fine.rows() == 17);
  for (int r = 0; r < 17; ++r) {
    for (int c = 0; c < 17; ++c) {
      CHECK(fine(r, c) == doctest::Approx(2.0 * r / 4.0 - 3.0 * c / 4.0 + 1.0));
    }
  }
}

TEST_CASE("benchmark of the exact solver against itself is error free") {
  thermal::DomainSpec s;
  s.fine_resolution = 20;
  const ExactEvaluator exact(s);
  const auto report = benchmark_surrogate(exact, s, dataset::IntensityScheme::uniform(), 3, 1);
  CHECK(report.sample_count == 3);
  CHECK(report.mae_K == 0.0);
  std::ostringstream csv, line;
  write_report_csv(csv, report);
  write_report_summary(line, report);
  CHECK(csv.str().rfind("sample_id,ae_K,max_ae_K\n", 0) == 0);
  CHECK(line.str().find("candidate=exact") != std::string::npos);
}

}  // TEST_SUITE
