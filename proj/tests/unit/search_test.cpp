#include <set>

#include "doctest.h"
#include "support.hpp"
#include "tierslice/search.hpp"

using namespace tierslice;
using namespace tierslice::testing;

namespace {

Individual make(Genome g, double fitness, bool valid) {
  Individual i;
  i.genome = std::move(g);
  i.fitness = fitness;
  i.valid = valid;
  return i;
}

}  // namespace

TEST_CASE("seeded population shape and determinism") {
  GaConfig config;
  Rng a(42), b(42);
  const std::vector<std::string> four = {"a", "b", "c", "d"};
  const auto p1 = seedPopulation(config, four, a);
  const auto p2 = seedPopulation(config, four, b);
  REQUIRE(p1.size() == 30);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1[i].genome.size() == 4);
    CHECK(p1[i].genome == p2[i].genome);
  }
  Rng c(1);
  std::set<Tier> seen;
  for (const auto& ind : seedPopulation(config, {"only"}, c)) {
    CHECK(ind.genome.size() == 1);
    seen.insert(ind.genome[0]);
  }
  CHECK(seen.size() == 3);
  CHECK_THROWS_AS(seedPopulation(config, {}, c), Error);
}

TEST_CASE("mutation rewrites one gene") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto before = make({Tier::Client, Tier::Server, Tier::Both, Tier::Client}, 0, true);
    const auto after = mutate(before, rng);
    int changed = 0;
    for (std::size_t k = 0; k < 4; ++k) changed += before.genome[k] != after.genome[k];
    CHECK(changed <= 1);
  }
  Rng one(9);
  CHECK(mutate(make({Tier::Server}, 0, true), one).genome.size() == 1);
}

TEST_CASE("uniform crossover") {
  Rng rng(8);
  const auto a = make({Tier::Client, Tier::Server, Tier::Both}, 0, true);
  const auto [c1, c2] = crossover(a, a, rng);
  CHECK(c1.genome == a.genome);
  CHECK(c2.genome == a.genome);
  const auto x = make({Tier::Client, Tier::Client, Tier::Client, Tier::Client}, 0, true);
  const auto y = make({Tier::Both, Tier::Both, Tier::Both, Tier::Both}, 0, true);
  Rng r1(77), r2(77);
  const auto k1 = crossover(x, y, r1);
  const auto k2 = crossover(x, y, r2);
  CHECK(k1.first.genome == k2.first.genome);
  for (std::size_t i = 0; i < 4; ++i) CHECK(k1.first.genome[i] != k1.second.genome[i]);
  CHECK_THROWS_AS(crossover(x, make({Tier::Client}, 0, true), r1), Error);
}

TEST_CASE("tournament ignores invalid individuals") {
  Rng rng(1);
  GaConfig config;
  config.tournamentSize = 3;
  const std::vector<Individual> population = {make({Tier::Client}, 0.2, true),
                                              make({Tier::Server}, 0.9, false),
                                              make({Tier::Both}, 0.5, true)};
  CHECK(tournamentSelect(population, config, rng).fitness == 0.5);
  const std::vector<Individual> single = {make({Tier::Client}, 0.1, true),
                                          make({Tier::Server}, 0.9, false)};
  for (int i = 0; i < 20; ++i) CHECK(tournamentSelect(single, config, rng).fitness == 0.1);
  const std::vector<Individual> tie = {make({Tier::Both}, 0.5, true),
                                       make({Tier::Client}, 0.5, true)};
  CHECK(tournamentSelect(tie, config, rng).genome == Genome{Tier::Client});
  const std::vector<Individual> none = {make({Tier::Both}, 0.5, false)};
  CHECK_THROWS_AS(tournamentSelect(none, config, rng), Error);
}

TEST_CASE("run stops at fitness 1") {
  const auto g = makeGraph({{"C", Tier::Client}, {"F", std::nullopt}, {"G", std::nullopt}},
                           {{0, 1}, {0, 2}, {1, 2}});
  GaConfig config;
  config.rngSeed = 3;
  const auto r = run(g, fixedPlacement(g.slices), config);
  CHECK(r.valid);
  CHECK(r.bestFitness == 1.0);
  CHECK(r.generationsUsed >= 1);
  CHECK(r.history.size() == r.generationsUsed);
  CHECK(r.generationsUsed < config.maxGenerations);
}

TEST_CASE("run with nothing to place") {
  const auto g = makeGraph({{"C", Tier::Client}, {"S", Tier::Server}}, {{0, 1}, {0, 0}});
  const auto r = run(g, fixedPlacement(g.slices), GaConfig{});
  CHECK(r.generationsUsed == 0);
  CHECK(r.bestFitness == doctest::Approx(0.5));
  CHECK(r.bestPlacement == fixedPlacement(g.slices));
}

TEST_CASE("run is reproducible and history is monotone") {
  std::mt19937_64 rng(21);
  RandomGraphOptions options;
  options.maxUnplaced = 6;
  for (int i = 0; i < 10; ++i) {
    auto g = randomGraph(rng, options);
    if (unplacedSlices(g.slices).empty()) continue;
    if (!exhaustiveOracle(g, fixedPlacement(g.slices)).valid) continue;
    GaConfig config;
    config.rngSeed = 100 + static_cast<std::uint64_t>(i);
    config.maxGenerations = 40;
    const auto a = run(g, fixedPlacement(g.slices), config);
    const auto b = run(g, fixedPlacement(g.slices), config);
    CHECK(a.bestPlacement == b.bestPlacement);
    CHECK(a.history == b.history);
    for (std::size_t k = 1; k < a.history.size(); ++k) CHECK(a.history[k] >= a.history[k - 1]);
    CHECK(a.valid);
    CHECK(isValid(g, a.bestPlacement).valid);
  }
}

TEST_CASE("oracle enumeration") {
  const auto none = makeGraph({{"C", Tier::Client}}, {});
  const auto r0 = exhaustiveOracle(none, fixedPlacement(none.slices));
  CHECK(r0.enumerated == 1);
  CHECK(r0.bestFitness == 1.0);
  const auto two = makeGraph({{"C", Tier::Client}, {"A", std::nullopt}, {"B", std::nullopt}},
                             {{0, 1}, {1, 2}});
  const auto r2 = exhaustiveOracle(two, fixedPlacement(two.slices));
  CHECK(r2.enumerated == 9);
  CHECK(r2.bestFitness == 1.0);
  // Client/Client is the smallest genome reaching 1.
  CHECK(r2.bestPlacement.searched.at("A") == Tier::Client);
  CHECK(r2.bestPlacement.searched.at("B") == Tier::Client);

  std::vector<SliceInfo> many;
  for (int i = 0; i < 13; ++i) many.push_back({"s" + std::to_string(i), std::nullopt});
  const auto big = makeGraph(many, {});
  CHECK_THROWS_AS(exhaustiveOracle(big, Placement{}), Error);
}

TEST_CASE("run never beats the oracle") {
  std::mt19937_64 rng(99);
  RandomGraphOptions options;
  options.maxUnplaced = 5;
  for (int i = 0; i < 15; ++i) {
    const auto g = randomGraph(rng, options);
    const auto fixed = fixedPlacement(g.slices);
    const auto oracle = exhaustiveOracle(g, fixed);
    if (!oracle.valid) continue;
    GaConfig config;
    config.rngSeed = static_cast<std::uint64_t>(i);
    const auto r = run(g, fixed, config);
    CHECK(r.bestFitness <= oracle.bestFitness);
  }
}

TEST_CASE("parallel runs match sequential runs") {
  const auto g = fixtureGraph("counterexample.tjs");
  GaConfig config;
  config.rngSeed = 10;
  config.maxGenerations = 30;
  const auto seq = runMany(g, fixedPlacement(g.slices), config, 8, 1);
  const auto par = runMany(g, fixedPlacement(g.slices), config, 8, 4);
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].bestPlacement == par[i].bestPlacement);
    CHECK(seq[i].history == par[i].history);
  }
}

TEST_CASE("config validation") {
  GaConfig c;
  c.populationSize = 1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = GaConfig{};
  c.crossoverProb = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = GaConfig{};
  c.tournamentSize = 31;
  CHECK_THROWS_AS(c.validate(), Error);
}
