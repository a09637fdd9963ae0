#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tierslice/fitness.hpp"

namespace tierslice {

struct GaConfig {
  std::size_t populationSize = 30;
  std::size_t maxGenerations = 300;
  double crossoverProb = 0.6;
  double mutationProb = 0.6;
  std::size_t tournamentSize = 4;
  std::uint64_t rngSeed = 0;

  /// Throws BadInput when a field is out of range.
  void validate() const;
};

using Rng = std::mt19937_64;
using Genome = std::vector<Tier>;

/// Uniform integer in [0, n). Defined here rather than through
/// std::uniform_int_distribution so results match across standard libraries.
std::uint64_t drawBelow(Rng& rng, std::uint64_t n);
/// Uniform real in [0, 1) with 53 random bits.
double drawUnit(Rng& rng);

struct Individual {
  Genome genome;
  double fitness = 0.0;
  bool valid = false;
};

/// Higher fitness first; equal fitness falls back to the smaller genome
/// (client < server < both, position by position).
bool fitter(const Individual& a, const Individual& b);

std::vector<Individual> seedPopulation(const GaConfig& config,
                                       const std::vector<std::string>& unplaced, Rng& rng);

/// Rewrites one uniformly chosen gene to a uniformly chosen tier.
Individual mutate(Individual individual, Rng& rng);

/// Uniform crossover: every position is swapped with probability 1/2.
std::pair<Individual, Individual> crossover(const Individual& a, const Individual& b, Rng& rng);

/// Best of tournamentSize draws (with replacement) from the valid members.
/// When the tournament is at least as large as the valid subset, the whole
/// subset competes. Throws AllInvalid.
const Individual& tournamentSelect(const std::vector<Individual>& population,
                                   const GaConfig& config, Rng& rng);

/// Everything search needs about one slice graph.
class SearchProblem {
 public:
  SearchProblem(const SliceGraph& graph, const Placement& fixed);

  const std::vector<std::string>& unplaced() const { return unplaced_; }
  /// Fills fitness and valid from the genome.
  void evaluate(Individual& individual) const;
  Placement placementOf(const Genome& genome) const;
  const Placement& fixed() const { return fixed_; }

 private:
  Placement fixed_;
  std::vector<std::string> unplaced_;
  std::vector<std::size_t> geneSlice_;
  std::vector<Tier> baseTiers_;
  OfflineAvailability objective_;
  ValidityCheck validity_;
};

struct SearchResult {
  Placement bestPlacement;
  double bestFitness = 0.0;
  bool valid = false;
  /// Generations evaluated, counting the seeded one.
  std::size_t generationsUsed = 0;
  /// Best fitness of each evaluated generation.
  std::vector<double> history;
};

/// Genetic search over the unplaced slices. Stops at the first valid
/// individual with fitness 1 or after maxGenerations generations.
SearchResult run(const SliceGraph& graph, const Placement& fixed, const GaConfig& config);

/// `runs` independent searches with seeds baseSeed, baseSeed + 1, ...,
/// spread over `threads` workers. The result does not depend on `threads`.
std::vector<SearchResult> runMany(const SliceGraph& graph, const Placement& fixed,
                                  const GaConfig& config, std::size_t runs,
                                  std::size_t threads = 0);

struct OracleResult {
  Placement bestPlacement;
  double bestFitness = 0.0;
  /// False when no placement is valid; the best invalid one is reported.
  bool valid = false;
  std::size_t enumerated = 0;
  std::size_t validCount = 0;
};

/// Enumerates all 3^n searched placements. Throws TooManySlices when n > cap.
OracleResult exhaustiveOracle(const SliceGraph& graph, const Placement& fixed,
                              std::size_t cap = 12);

}  // namespace tierslice
