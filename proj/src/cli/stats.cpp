#include <algorithm>
#include <cstdio>
#include <sstream>

#include "tierslice/cli.hpp"

namespace tierslice::cli {

namespace {

template <typename T>
T lowerMedian(std::vector<T> values) {
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

TierSpread spread(const std::vector<std::size_t>& counts) {
  return {lowerMedian(counts), *std::min_element(counts.begin(), counts.end()),
          *std::max_element(counts.begin(), counts.end())};
}

std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::vector<std::vector<std::string>> cells(const std::vector<RunStats>& rows) {
  std::vector<std::vector<std::string>> out;
  out.push_back({"fixture", "slices", "unplaced", "runs", "medC", "minC", "maxC", "medS", "minS",
                 "maxS", "medB", "minB", "maxB", "offline%", "data", "slice"});
  for (const auto& r : rows) {
    auto n = [](std::size_t v) { return std::to_string(v); };
    out.push_back({r.fixture, n(r.slices), n(r.unplaced), n(r.runs), n(r.client.med),
                   n(r.client.min), n(r.client.max), n(r.server.med), n(r.server.min),
                   n(r.server.max), n(r.both.med), n(r.both.min), n(r.both.max),
                   fixed2(r.offlinePercent), n(r.dataAdvice), n(r.sliceAdvice)});
  }
  return out;
}

}  // namespace

RunStats runStats(const std::string& fixture, const DependenceGraph& graph, const GaConfig& ga,
                  const AdvisorConfig& advisor, std::size_t runs, std::size_t threads) {
  if (runs == 0) throw Error(ErrorCode::BadInput, "at least one run is required");
  const auto sliceGraph = collapseToSliceGraph(graph);
  const auto fixed = fixedPlacement(sliceGraph.slices);
  const auto results = runMany(sliceGraph, fixed, ga, runs, threads);

  RunStats stats;
  stats.fixture = fixture;
  stats.slices = sliceGraph.slices.size();
  stats.unplaced = unplacedSlices(sliceGraph.slices).size();
  stats.runs = runs;
  std::vector<std::size_t> c, s, b, data, moves;
  std::vector<double> fitness;
  for (const auto& r : results) {
    std::size_t perTier[3] = {0, 0, 0};
    for (const auto& [name, tier] : r.bestPlacement.searched) ++perTier[static_cast<int>(tier)];
    c.push_back(perTier[0]);
    s.push_back(perTier[1]);
    b.push_back(perTier[2]);
    fitness.push_back(r.bestFitness);
    std::size_t d = 0, m = 0;
    for (const auto& a : advise(graph, r.bestPlacement, advisor))
      ++(a.kind == AdviceKind::ReplicateDeclaration ? d : m);
    data.push_back(d);
    moves.push_back(m);
  }
  stats.client = spread(c);
  stats.server = spread(s);
  stats.both = spread(b);
  stats.offlinePercent = lowerMedian(fitness) * 100.0;
  stats.dataAdvice = lowerMedian(data);
  stats.sliceAdvice = lowerMedian(moves);
  return stats;
}

std::string statsTable(const std::vector<RunStats>& rows) {
  const auto table = cells(rows);
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& row : table)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::ostringstream out;
  for (const auto& row : table) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == 0) {
        line += row[i] + std::string(width[i] - row[i].size(), ' ');
      } else {
        line += "  " + std::string(width[i] - row[i].size(), ' ') + row[i];
      }
    }
    out << line << "\n";
  }
  return out.str();
}

std::string statsCsv(const std::vector<RunStats>& rows) {
  std::ostringstream out;
  for (const auto& row : cells(rows)) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  return out.str();
}

}  // namespace tierslice::cli
