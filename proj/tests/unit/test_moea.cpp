#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "../oracles/oracles.hpp"
#include "hslo/error.hpp"
#include "hslo/moea/cost.hpp"
#include "hslo/moea/genome.hpp"
#include "hslo/moea/nsga2.hpp"

using namespace hslo;
using namespace hslo::moea;

namespace {

std::multiset<std::string> layer_multiset(const ArchitectureGenome& a, const ArchitectureGenome& b,
                                          std::size_t i) {
  return {to_string(a.layers[i]), to_string(b.layers[i])};
}

}  // namespace

TEST_SUITE("moea") {

TEST_CASE("layer sampling covers every configuration") {
  Rng rng(1);
  std::map<std::string, int> seen;
  for (int i = 0; i < 6000; ++i) {
    const auto g = sample_layer(4, rng);
    CHECK(std::ranges::is_sorted(g.kernels));
    ++seen[to_string(g)];
  }
  CHECK(seen.size() == 30);
  for (const auto& g : oracle::all_layer_genes()) CHECK(seen.contains(to_string(g)));

  Rng one(2);
  for (int i = 0; i < 200; ++i) CHECK(sample_layer(1, one).kernels.size() == 1);
  CHECK_THROWS_AS(sample_layer(0, one), DomainError);
  CHECK_THROWS_AS(sample_layer(5, one), DomainError);
}

TEST_CASE("genome sampling respects the layer count") {
  Rng rng(3);
  const auto g = sample_genome(2, rng, 5);
  CHECK(g.layers.size() == 5);
  CHECK_NOTHROW(g.validate(5, 2));
  CHECK_THROWS_AS(g.validate(12, 2), DomainError);
  ArchitectureGenome bad = g;
  bad.layers[0].kernels = {5, 3};
  CHECK_THROWS_AS(bad.validate(5, 4), DomainError);
  bad.layers[0] = {{3, 5, 7}, 3};
  CHECK_THROWS_AS(bad.validate(5, 2), DomainError);
  bad.layers[0] = {{4}, 3};
  CHECK_THROWS_AS(bad.validate(5, 4), DomainError);
  bad.layers[0] = {{3}, 4};
  CHECK_THROWS_AS(bad.validate(5, 4), DomainError);
}

TEST_CASE("crossover") {
  Rng rng(4);
  const auto a = sample_genome(4, rng);
  const auto b = sample_genome(4, rng);
  const auto [a0, b0] = crossover(a, b, 0.0, rng);
  CHECK(a0 == a);
  CHECK(b0 == b);
  const auto [a1, b1] = crossover(a, b, 1.0, rng);
  CHECK(a1 == b);
  CHECK(b1 == a);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [c, d] = crossover(a, b, 0.5, rng);
    for (std::size_t i = 0; i < a.layers.size(); ++i) CHECK(layer_multiset(c, d, i) == layer_multiset(a, b, i));
  }
}

TEST_CASE("mutation") {
  Rng rng(5);
  const auto g = sample_genome(4, rng);
  for (int i = 0; i < 20; ++i) CHECK(mutate(g, 0.0, 4, rng) == g);
  std::vector<int> touched(12, 0);
  for (int i = 0; i < 2000; ++i) {
    const auto m = mutate(g, 1.0, 4, rng);
    int differing = 0;
    for (std::size_t l = 0; l < 12; ++l) {
      if (m.layers[l] != g.layers[l]) {
        ++differing;
        ++touched[l];
      }
    }
    CHECK(differing <= 1);
    CHECK_NOTHROW(m.validate());
  }
  for (int t : touched) CHECK(t > 0);
}

TEST_CASE("cost model") {
  const auto preset = BackbonePreset::truncated(1);
  const ArchitectureGenome single{{{{3}, 3}}};
  const auto c = cost_model(single, preset);
  CHECK(c.params == 8544);
  CHECK(c.flops == 2LL * 8544 * 25 * 25);
  CHECK(layer_cost({{3}, 3}, 32, 48, 25) == c);
  CHECK(c.params == oracle::block_params(32, 48, 3, {3}));

  const BackbonePreset full;
  CHECK(full.layer_count() == 12);
  const int expected_sizes[] = {25, 25, 25, 13, 13, 13, 7, 7, 7, 4, 4, 4};
  for (int l = 0; l < 12; ++l) CHECK(full.spatial_size(l) == expected_sizes[l]);

  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = sample_genome(4, rng);
    const auto base = cost_model(g);
    CHECK(base.flops > 0);
    for (std::size_t l = 0; l < 12; ++l) {
      auto bigger = g;
      bigger.layers[l].rate = 6;
      auto grown = cost_model(bigger);
      CHECK(grown.params >= base.params);
      CHECK(grown.flops >= base.flops);
      for (int k : kKernelChoices) {
        auto more = g;
        auto& ks = more.layers[l].kernels;
        if (std::ranges::find(ks, k) != ks.end()) continue;
        ks.push_back(k);
        std::ranges::sort(ks);
        grown = cost_model(more);
        CHECK(grown.params > base.params);
        CHECK(grown.flops > base.flops);
      }
    }
  }
  CHECK_THROWS_AS(cost_model(sample_genome(4, rng, 3)), DomainError);
}

TEST_CASE("doubling the rate doubles the expansion-dependent terms") {
  const LayerGene r3{{3, 7}, 3};
  const LayerGene r6{{3, 7}, 6};
  const auto c3 = layer_cost(r3, 48, 96, 13);
  const auto c6 = layer_cost(r6, 48, 96, 13);
  CHECK(c6.params == 2 * c3.params);
  CHECK(c6.flops == 2 * c3.flops);
}

TEST_CASE("error proxy") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = sample_genome(4, rng);
    const double e = error_proxy(g);
    CHECK(e > 0.0);
    CHECK(e <= 1.0);
    auto richer = g;
    richer.layers[0] = {{3, 5, 7, 9}, 6};
    CHECK(error_proxy(richer) <= e);
  }
}

TEST_CASE("non-dominated sort") {
  SUBCASE("worked example") {
    const std::vector<Objectives> pts = {{1, 5}, {2, 3}, {4, 1}, {3, 4}, {5, 5}, {2, 3}};
    const auto fronts = non_dominated_sort(pts);
    REQUIRE(fronts.size() == 3);
    CHECK(fronts[0] == std::vector<std::size_t>{0, 1, 2, 5});
    CHECK(fronts[1] == std::vector<std::size_t>{3});
    CHECK(fronts[2] == std::vector<std::size_t>{4});
  }
  SUBCASE("random points against peeling") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Objectives> pts;
      for (int i = 0; i < 60; ++i)
        pts.push_back({double(rng.uniform_int(0, 9)), double(rng.uniform_int(0, 9))});
      const auto ref = oracle::front_ranks(pts);
      const auto fronts = non_dominated_sort(pts);
      std::size_t total = 0;
      for (std::size_t f = 0; f < fronts.size(); ++f) {
        total += fronts[f].size();
        for (auto i : fronts[f]) CHECK(ref[i] == static_cast<int>(f));
      }
      CHECK(total == pts.size());
    }
  }
  CHECK(non_dominated_sort(std::vector<Objectives>{}).empty());
  const std::vector<Objectives> nan = {{1, std::nan("")}};
  CHECK_THROWS_AS(non_dominated_sort(nan), DomainError);
}

TEST_CASE("crowding distance") {
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<Objectives> line = {{0, 2}, {1, 1}, {2, 0}};
  const auto d = crowding_distance(line);
  CHECK(d[0] == inf);
  CHECK(d[1] == doctest::Approx(2.0));
  CHECK(d[2] == inf);

  const std::vector<Objectives> four = {{0, 4}, {3, 1}, {1, 3}, {4, 0}};
  const auto d4 = crowding_distance(four);
  CHECK(d4[2] == doctest::Approx(3.0 / 4 + 3.0 / 4));
  CHECK(d4[1] == doctest::Approx(3.0 / 4 + 3.0 / 4));

  const std::vector<Objectives> two = {{0, 1}, {1, 0}};
  for (double v : crowding_distance(two)) CHECK(v == inf);
  const std::vector<Objectives> flat = {{1, 0}, {1, 1}, {1, 2}};
  CHECK(crowding_distance(flat)[1] == doctest::Approx(1.0));
}

TEST_CASE("nsga-ii runs") {
  MoeaConfig cfg;
  cfg.population_size = 16;
  cfg.generations = 6;
  cfg.layer_count = 3;
  cfg.seed = 11;
  const auto objective = analytic_objective(BackbonePreset::truncated(3));
  const auto r = run_nsga2(objective, cfg);
  CHECK(r.population.size() == 16);
  CHECK(r.evaluations == 16u + 6u * 16u);
  CHECK_FALSE(r.front.empty());
  for (std::size_t i = 0; i < r.front.size(); ++i) {
    CHECK(r.front[i].rank == 0);
    for (const auto& p : r.population) CHECK_FALSE(dominates(p.objectives, r.front[i].objectives));
    if (i > 0) CHECK(r.front[i - 1].genome != r.front[i].genome);
  }
  for (std::size_t i = 1; i < r.population.size(); ++i) CHECK(r.population[i - 1].rank <= r.population[i].rank);

  const auto again = run_nsga2(objective, cfg);
  REQUIRE(again.front.size() == r.front.size());
  for (std::size_t i = 0; i < r.front.size(); ++i) CHECK(again.front[i].genome == r.front[i].genome);

  cfg.workers = 3;
  const auto parallel = run_nsga2(objective, cfg);
  REQUIRE(parallel.population.size() == r.population.size());
  for (std::size_t i = 0; i < r.population.size(); ++i)
    CHECK(parallel.population[i].genome == r.population[i].genome);

  cfg.population_size = 15;
  CHECK_THROWS_AS(run_nsga2(objective, cfg), ConfigError);
  cfg.population_size = 16;
  cfg.pm = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("genome text round trip") {
  Rng rng(12);
  std::vector<ArchitectureGenome> genomes;
  for (int i = 0; i < 10; ++i) genomes.push_back(sample_genome(4, rng));
  std::stringstream ss;
  ss << "# header\n\n";
  write_genomes(ss, genomes);
  CHECK(read_genomes(ss) == genomes);
  CHECK(to_string(LayerGene{{3, 9}, 6}) == "k3k9:r6");
  CHECK(parse_layer("k5k7:r3") == LayerGene{{5, 7}, 3});
  for (const char* bad : {"k3", "k3:r4", "k4:r3", "k5k3:r3", "k3k3:r3", ":r3", "k3:r3x", "kk3:r3"})
    CHECK_THROWS_AS(parse_layer(bad), FormatError);
  CHECK_THROWS_AS(parse_genome(""), FormatError);
}

TEST_CASE("front csv") {
  const auto preset = BackbonePreset::truncated(1);
  Candidate c;
  c.genome = ArchitectureGenome{{{{3}, 3}}};
  c.objectives = {0.5, 8544};
  std::ostringstream os;
  const std::vector<Candidate> front{c};
  write_front_csv(os, front, preset);
  CHECK(os.str() == "error_proxy,params,flops,genome\n0.5,8544,10680000,k3:r3\n");
}

}  // TEST_SUITE
