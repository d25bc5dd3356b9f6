#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "../oracles/oracles.hpp"
#include "hslo/dataset/sampling.hpp"
#include "hslo/error.hpp"
#include "hslo/thermal/field_io.hpp"
#include "hslo/thermal/solver.hpp"

using namespace hslo;
using namespace hslo::thermal;

namespace {

DomainSpec at(int n, int c = 10) {
  DomainSpec s;
  s.fine_resolution = n;
  s.cell_partition = c;
  s.source_side_m = s.side_length_m / c;
  return s;
}

double max_abs(std::span<const double> a, std::span<const double> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("thermal") {

TEST_CASE("domain validation") {
  DomainSpec s;
  CHECK_NOTHROW(s.validate());
  CHECK(s.cell_count() == 100);
  CHECK(s.nodes_per_cell() == 20);

  auto bad = s;
  bad.fine_resolution = 205;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = s;
  bad.conductivity = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = s;
  bad.source_side_m = 0.02;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = s;
  bad.sink_center_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(parse_sink_edge("up"), DomainError);
  CHECK(parse_sink_edge("south") == SinkEdge::south);
}

TEST_CASE("sink nodes follow the width rule on every edge") {
  for (auto edge : {SinkEdge::west, SinkEdge::east, SinkEdge::north, SinkEdge::south}) {
    for (int n : {20, 50, 200}) {
      auto s = at(n);
      s.sink_edge = edge;
      const auto nodes = s.sink_nodes();
      const auto mask = oracle::sink_mask(s);
      std::vector<std::size_t> expected;
      for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) expected.push_back(i);
      auto got = nodes;
      std::ranges::sort(got);
      CHECK(got == expected);
      CHECK(!nodes.empty());
    }
  }
  // 0.1 m / 199 spacing puts two nodes within 0.5 h and two more within 1.5 h < 1 mm.
  CHECK(DomainSpec{}.sink_nodes().size() == 4);

  auto thin = DomainSpec{};
  thin.sink_width_m = 1e-7;
  CHECK(thin.sink_nodes().size() >= 1);

  auto none = DomainSpec{};
  none.sink_width_m = 0;
  CHECK(none.sink_nodes().empty());
  CHECK_THROWS_AS(ConductionSolver{none}, SingularSystemError);
}

TEST_CASE("layout invariants") {
  const Layout a({{7, 1.0}, {3, 2.0}});
  const Layout b({{3, 2.0}, {7, 1.0}});
  CHECK(a == b);
  CHECK(hash_value(a) == hash_value(b));
  CHECK(a.canonical()[0].cell == 3);
  CHECK(a != Layout({{3, 1.0}, {7, 2.0}}));

  CHECK_THROWS_AS(Layout({{1, 1.0}, {1, 2.0}}).validate(100), ConstraintViolation);
  CHECK_THROWS_AS(Layout({{0, 1.0}}).validate(100), DomainError);
  CHECK_THROWS_AS(Layout({{101, 1.0}}).validate(100), DomainError);
  CHECK_THROWS_AS(Layout({{5, -1.0}}).validate(100), DomainError);

  Layout m = a;
  CHECK_THROWS_AS(m.move_to(0, 3), ConstraintViolation);
  m.move_to(0, 9);
  CHECK(m[0].cell == 9);
  m.swap_cells(0, 1);
  CHECK(m[0].cell == 3);
  CHECK(m[0].intensity == 1.0);
  CHECK(Layout::uniform(std::vector<int>{1, 2}, 5.0).total_power(0.01) == doctest::Approx(10.0 * 1e-4));
}

TEST_CASE("rasterization covers one cell block per source") {
  const DomainSpec s;
  const auto phi = rasterize_intensity(Layout({{1, 5.0}, {100, 7.0}}), s);
  CHECK(phi.rows() == 200);
  CHECK(std::ranges::count(phi.values(), 5.0) == 400);
  CHECK(std::ranges::count(phi.values(), 7.0) == 400);
  CHECK(phi(0, 0) == 5.0);
  CHECK(phi(19, 19) == 5.0);
  CHECK(phi(20, 20) == 0.0);
  CHECK(phi(199, 199) == 7.0);
  CHECK_THROWS_AS(rasterize_intensity(Layout({{1, 1.0}, {1, 1.0}}), s), ConstraintViolation);

  const auto areas = cell_control_areas(at(20));
  const double h = 0.1 / 19;
  // Corner cell: one corner node, edge nodes along two sides, the rest interior.
  CHECK(areas[0] == doctest::Approx(h * h * (0.25 + 0.5 * 2 + 1.0)));
}

TEST_CASE("zero sources give a uniform sink temperature") {
  const auto t = solve_temperature(Layout{}, DomainSpec{});
  CHECK(t.min() == 298.0);
  CHECK(t.max() == 298.0);
}

TEST_CASE("linearity in the intensities") {
  const auto s = at(50);
  Rng rng(3);
  const auto a = dataset::sample_random_layout(s, dataset::IntensityScheme::case2(), rng);
  std::vector<Source> doubled;
  for (const auto& src : a.sources()) doubled.push_back({src.cell, 2 * src.intensity});
  const auto t1 = solve_temperature(a, s);
  const auto t2 = solve_temperature(Layout(doubled), s);
  for (std::size_t i = 0; i < t1.size(); ++i) {
    const double ref = 2 * (t1[i] - 298.0);
    if (ref != 0) CHECK(std::fabs((t2[i] - 298.0) - ref) / std::fabs(ref) <= 1e-8);
  }
}

TEST_CASE("superposition of disjoint layouts") {
  const auto s = at(50);
  const Layout a({{12, 10000.0}, {45, 4000.0}});
  const Layout b({{77, 20000.0}});
  const Layout ab({{12, 10000.0}, {45, 4000.0}, {77, 20000.0}});
  const auto ta = solve_temperature(a, s), tb = solve_temperature(b, s), tab = solve_temperature(ab, s);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    const double whole = tab[i] - 298.0;
    if (whole != 0) CHECK(std::fabs((ta[i] - 298.0) + (tb[i] - 298.0) - whole) / whole <= 1e-6);
  }
}

TEST_CASE("direct and iterative solves match a dense reference") {
  for (auto edge : {SinkEdge::west, SinkEdge::north, SinkEdge::east}) {
    auto s = at(20);
    s.sink_edge = edge;
    s.sink_center_fraction = edge == SinkEdge::east ? 0.3 : 0.5;
    const Layout two({{23, 10000.0}, {78, 6000.0}});
    const auto dense = oracle::dense_temperature(two, s);
    ConductionSolver solver(s);
    const auto phi = rasterize_intensity(two, s);
    SolveReport report;
    const auto direct = solver.solve(phi, {}, &report);
    CHECK(report.relative_residual <= 1e-8);
    CHECK(max_abs(direct.values(), dense) <= 1e-6);
    SolveOptions cg;
    cg.kind = SolverKind::conjugate_gradient;
    cg.tolerance = 1e-11;
    const auto iterative = solver.solve(phi, cg, &report);
    CHECK(report.iterations > 0);
    CHECK(max_abs(iterative.values(), dense) <= 1e-6);
  }
}

TEST_CASE("sink nodes are pinned and the field respects the maximum principle") {
  const DomainSpec s;
  Rng rng(4);
  const auto l = dataset::sample_random_layout(s, dataset::IntensityScheme::uniform(), rng);
  const auto t = solve_temperature(l, s);
  for (auto node : s.sink_nodes()) CHECK(t[node] == 298.0);
  CHECK(t.min() >= 298.0 - 1e-8);
}

TEST_CASE("raising one intensity never cools any node") {
  const auto s = at(50);
  const Layout a({{12, 10000.0}, {45, 4000.0}, {90, 2000.0}});
  const Layout b({{12, 10000.0}, {45, 9000.0}, {90, 2000.0}});
  const auto ta = solve_temperature(a, s), tb = solve_temperature(b, s);
  for (std::size_t i = 0; i < ta.size(); ++i) CHECK(tb[i] >= ta[i] - 1e-8);
}

TEST_CASE("mirror symmetry about the sink's edge midline") {
  const auto s = at(50);
  // West sink at the midpoint: reflecting rows maps cell (r, c) to (9 - r, c).
  const Layout a({{12, 10000.0}, {45, 4000.0}, {3, 2000.0}});
  std::vector<Source> mirrored;
  for (const auto& src : a.sources()) {
    const int r = (src.cell - 1) / 10, c = (src.cell - 1) % 10;
    mirrored.push_back({(9 - r) * 10 + c + 1, src.intensity});
  }
  const auto ta = solve_temperature(a, s), tb = solve_temperature(Layout(mirrored), s);
  double worst = 0;
  for (int r = 0; r < 50; ++r)
    for (int c = 0; c < 50; ++c) worst = std::max(worst, std::fabs(ta(r, c) - tb(49 - r, c)));
  CHECK(worst <= 1e-6);
}

TEST_CASE("refinement gap shrinks") {
  const Layout l({{34, 10000.0}, {56, 10000.0}, {91, 10000.0}});
  const double t50 = solve_temperature(l, at(50)).max();
  const double t100 = solve_temperature(l, at(100)).max();
  const double t200 = solve_temperature(l, at(200)).max();
  CHECK(std::fabs(t200 - t100) < std::fabs(t100 - t50));
}

TEST_CASE("solver failures carry the residual") {
  ConductionSolver solver(at(50));
  const auto phi = rasterize_intensity(Layout({{5, 10000.0}}), at(50));
  SolveOptions opt;
  opt.kind = SolverKind::conjugate_gradient;
  opt.max_iterations = 2;
  try {
    solver.solve(phi, opt);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.residual() > opt.tolerance);
  }
}

TEST_CASE("normalized metric") {
  const DomainSpec s;
  CHECK(std::fabs(normalized_metric(327.02, s) - 0.2902) <= 1e-12);
  CHECK(std::fabs(normalized_metric(326.74, s) - 0.2874) <= 1e-12);
  CHECK(normalized_metric(298.0, s) == 0.0);
  CHECK(normalized_metric(333.51, s) == doctest::Approx(0.3551));
  const auto t = solve_temperature(Layout({{5, 10000.0}}), at(50));
  CHECK(normalized_metric(t, at(50)) == normalized_metric(t.max(), at(50)));
}

TEST_CASE("field files round-trip") {
  Field2D f(3, 2, std::vector<double>{1.5, -2.0, 3.25, 1e-300, 298.123456789, 0.0});
  std::stringstream bin;
  write_field_binary(bin, f);
  CHECK(bin.str().substr(0, 4) == "HSLF");
  CHECK(bin.str().size() == 16 + 6 * 8);
  CHECK(read_field_binary(bin) == f);

  std::stringstream csv;
  write_field_csv(csv, f);
  const auto back = read_field_csv(csv);
  CHECK(back.rows() == 3);
  CHECK(back.cols() == 2);
  CHECK(back(2, 0) == doctest::Approx(298.123456789).epsilon(1e-9));

  std::stringstream full;
  write_field_binary(full, f);
  std::stringstream cut(full.str().substr(0, 30));
  CHECK_THROWS_AS(read_field_binary(cut), FormatError);
  std::stringstream wrong("HSLX" + full.str().substr(4));
  CHECK_THROWS_AS(read_field_binary(wrong), FormatError);
  std::stringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(read_field_csv(ragged), FormatError);
}

}  // TEST_SUITE
