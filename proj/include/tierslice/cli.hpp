#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tierslice/advisor.hpp"

namespace tierslice::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitInvalidPlacement = 3,
  kExitSearchFailure = 4,
};

/// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct TierSpread {
  std::size_t med = 0;
  std::size_t min = 0;
  std::size_t max = 0;
};

/// Summary of repeated searches on one input. Medians are lower medians so
/// every column stays an integer.
struct RunStats {
  std::string fixture;
  std::size_t slices = 0;
  std::size_t unplaced = 0;
  std::size_t runs = 0;
  TierSpread client;
  TierSpread server;
  TierSpread both;
  double offlinePercent = 0.0;
  std::size_t dataAdvice = 0;
  std::size_t sliceAdvice = 0;
};

RunStats runStats(const std::string& fixture, const DependenceGraph& graph, const GaConfig& ga,
                  const AdvisorConfig& advisor, std::size_t runs, std::size_t threads = 0);

std::string statsTable(const std::vector<RunStats>& rows);
std::string statsCsv(const std::vector<RunStats>& rows);

}  // namespace tierslice::cli
