#include <algorithm>
#include <atomic>
#include <thread>

#include "tierslice/search.hpp"

namespace tierslice {

namespace {

constexpr Tier kTiers[] = {Tier::Client, Tier::Server, Tier::Both};
constexpr int kSeedingAttempts = 10;

Tier randomTier(Rng& rng) { return kTiers[drawBelow(rng, 3)]; }

const Individual* bestValid(const std::vector<Individual>& population) {
  const Individual* best = nullptr;
  for (const auto& ind : population)
    if (ind.valid && (!best || fitter(ind, *best))) best = &ind;
  return best;
}

}  // namespace

void GaConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::BadInput, what); };
  if (populationSize < 2) fail("population size must be at least 2");
  if (maxGenerations < 1) fail("generation limit must be at least 1");
  if (!(crossoverProb >= 0.0 && crossoverProb <= 1.0)) fail("crossover probability must be in [0,1]");
  if (!(mutationProb >= 0.0 && mutationProb <= 1.0)) fail("mutation probability must be in [0,1]");
  if (tournamentSize < 1 || tournamentSize > populationSize)
    fail("tournament size must be between 1 and the population size");
}

std::uint64_t drawBelow(Rng& rng, std::uint64_t n) {
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = Rng::max() - (Rng::max() % n);
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

double drawUnit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool fitter(const Individual& a, const Individual& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  return a.genome < b.genome;
}

std::vector<Individual> seedPopulation(const GaConfig& config,
                                       const std::vector<std::string>& unplaced, Rng& rng) {
  if (unplaced.empty())
    throw Error(ErrorCode::NoUnplacedSlices, "there are no unplaced slices to search over");
  std::vector<Individual> population(config.populationSize);
  for (auto& ind : population) {
    ind.genome.resize(unplaced.size());
    for (auto& gene : ind.genome) gene = randomTier(rng);
  }
  return population;
}

Individual mutate(Individual individual, Rng& rng) {
  if (individual.genome.empty()) return individual;
  const auto index = drawBelow(rng, individual.genome.size());
  individual.genome[index] = randomTier(rng);
  return individual;
}

std::pair<Individual, Individual> crossover(const Individual& a, const Individual& b, Rng& rng) {
  if (a.genome.size() != b.genome.size())
    throw Error(ErrorCode::GenomeLengthMismatch, "crossover of genomes with different lengths");
  std::pair<Individual, Individual> children{a, b};
  for (std::size_t i = 0; i < a.genome.size(); ++i)
    if (drawUnit(rng) < 0.5) std::swap(children.first.genome[i], children.second.genome[i]);
  return children;
}

const Individual& tournamentSelect(const std::vector<Individual>& population,
                                   const GaConfig& config, Rng& rng) {
  std::vector<const Individual*> valid;
  for (const auto& ind : population)
    if (ind.valid) valid.push_back(&ind);
  if (valid.empty())
    throw Error(ErrorCode::AllInvalid, "no valid individual to select from");
  const Individual* best = nullptr;
  if (config.tournamentSize >= valid.size()) {
    for (const auto* ind : valid)
      if (!best || fitter(*ind, *best)) best = ind;
    return *best;
  }
  for (std::size_t i = 0; i < config.tournamentSize; ++i) {
    const auto* pick = valid[drawBelow(rng, valid.size())];
    if (!best || fitter(*pick, *best)) best = pick;
  }
  return *best;
}

SearchProblem::SearchProblem(const SliceGraph& graph, const Placement& fixed)
    : fixed_(fixed), objective_(graph), validity_(graph) {
  baseTiers_.assign(graph.slices.size(), Tier::Both);
  for (std::size_t i = 0; i < graph.slices.size(); ++i) {
    const auto& s = graph.slices[i];
    if (s.fixedTier) {
      const auto t = fixed.tierOf(s.name);
      if (!t) throw Error(ErrorCode::MissingPlacement, "slice '" + s.name + "' has no placement");
      baseTiers_[i] = *t;
    } else {
      unplaced_.push_back(s.name);
      geneSlice_.push_back(i);
    }
  }
}

void SearchProblem::evaluate(Individual& individual) const {
  if (individual.genome.size() != geneSlice_.size())
    throw Error(ErrorCode::GenomeLengthMismatch, "genome does not match the unplaced slices");
  thread_local std::vector<Tier> tiers;
  tiers = baseTiers_;
  for (std::size_t g = 0; g < geneSlice_.size(); ++g) tiers[geneSlice_[g]] = individual.genome[g];
  individual.fitness = objective_.score(tiers);
  individual.valid = validity_(tiers);
}

Placement SearchProblem::placementOf(const Genome& genome) const {
  Placement p;
  p.fixed = fixed_.fixed;
  for (std::size_t g = 0; g < genome.size(); ++g) p.searched[unplaced_[g]] = genome[g];
  return p;
}

SearchResult run(const SliceGraph& graph, const Placement& fixed, const GaConfig& config) {
  config.validate();
  const SearchProblem problem(graph, fixed);
  SearchResult result;

  if (problem.unplaced().empty()) {
    Individual only;
    problem.evaluate(only);
    result.bestPlacement = problem.placementOf({});
    result.bestFitness = only.fitness;
    result.valid = only.valid;
    return result;
  }

  Rng rng(config.rngSeed);
  std::vector<Individual> population;
  for (int attempt = 0; attempt < kSeedingAttempts && !bestValid(population); ++attempt) {
    population = seedPopulation(config, problem.unplaced(), rng);
    for (auto& ind : population) problem.evaluate(ind);
  }
  if (!bestValid(population))
    throw Error(ErrorCode::AllInvalid,
                "no valid placement in " + std::to_string(kSeedingAttempts) +
                    " seeded populations of " + std::to_string(config.populationSize));

  result.generationsUsed = 1;
  result.history.push_back(bestValid(population)->fitness);

  std::vector<Individual> next;
  while (result.generationsUsed < config.maxGenerations && bestValid(population)->fitness < 1.0) {
    next.clear();
    next.push_back(*bestValid(population));
    while (next.size() < config.populationSize) {
      const Individual& a = tournamentSelect(population, config, rng);
      const Individual& b = tournamentSelect(population, config, rng);
      auto children = drawUnit(rng) < config.crossoverProb ? crossover(a, b, rng)
                                                           : std::make_pair(a, b);
      for (Individual* child : {&children.first, &children.second}) {
        if (next.size() == config.populationSize) break;
        if (drawUnit(rng) < config.mutationProb) *child = mutate(std::move(*child), rng);
        problem.evaluate(*child);
        next.push_back(std::move(*child));
      }
    }
    population.swap(next);
    ++result.generationsUsed;
    result.history.push_back(bestValid(population)->fitness);
  }

  const Individual& best = *bestValid(population);
  result.bestPlacement = problem.placementOf(best.genome);
  result.bestFitness = best.fitness;
  result.valid = true;
  return result;
}

std::vector<SearchResult> runMany(const SliceGraph& graph, const Placement& fixed,
                                  const GaConfig& config, std::size_t runs, std::size_t threads) {
  config.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(runs, 1));
  std::vector<SearchResult> results(runs);
  std::vector<std::exception_ptr> errors(runs);
  std::atomic<std::size_t> nextRun{0};
  auto worker = [&] {
    for (std::size_t i = nextRun++; i < runs; i = nextRun++) {
      GaConfig c = config;
      c.rngSeed = config.rngSeed + i;
      try {
        results[i] = run(graph, fixed, c);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

OracleResult exhaustiveOracle(const SliceGraph& graph, const Placement& fixed, std::size_t cap) {
  const SearchProblem problem(graph, fixed);
  const std::size_t n = problem.unplaced().size();
  if (n > cap)
    throw Error(ErrorCode::TooManySlices, std::to_string(n) + " unplaced slices exceed the cap of " +
                                              std::to_string(cap));
  OracleResult result;
  Individual current;
  current.genome.assign(n, Tier::Client);
  Individual best, bestInvalid;
  bool haveValid = false, haveInvalid = false;
  for (;;) {
    problem.evaluate(current);
    ++result.enumerated;
    if (current.valid) {
      ++result.validCount;
      if (!haveValid || fitter(current, best)) best = current;
      haveValid = true;
    } else {
      if (!haveInvalid || fitter(current, bestInvalid)) bestInvalid = current;
      haveInvalid = true;
    }
    // Odometer over client < server < both, last position fastest, so the
    // enumeration is in genome order.
    std::size_t pos = n;
    while (pos > 0) {
      Tier& gene = current.genome[pos - 1];
      if (gene != Tier::Both) {
        gene = gene == Tier::Client ? Tier::Server : Tier::Both;
        break;
      }
      gene = Tier::Client;
      --pos;
    }
    if (pos == 0) break;
  }
  const Individual& chosen = haveValid ? best : bestInvalid;
  result.bestPlacement = problem.placementOf(chosen.genome);
  result.bestFitness = chosen.fitness;
  result.valid = haveValid;
  return result;
}

}  // namespace tierslice
