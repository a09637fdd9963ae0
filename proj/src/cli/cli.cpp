#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tierslice/cli.hpp"
#include "tierslice/frontend.hpp"

namespace tierslice::cli {

namespace {

using nlohmann::ordered_json;

struct Loaded {
  std::string path;
  std::optional<SourceProgram> program;
  DependenceGraph graph;
  SliceGraph slices;
};

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string readText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Usage("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void writeText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Usage("cannot write " + path);
}

bool isJsonPath(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

std::string where(const std::string& path, const SourcePos& pos) {
  return path + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column);
}

Loaded load(const std::string& path, std::ostream& err, bool needSource = false) {
  Loaded in;
  in.path = path;
  const auto text = readText(path);
  if (isJsonPath(path)) {
    if (needSource) throw Usage("this command needs TierJS source, not a graph file");
    in.graph = dependenceGraphFromJson(text);
  } else {
    in.program = analyze(text);
    for (const auto& w : in.program->warnings)
      err << where(path, w.pos) << ": warning: " << w.message << "\n";
    in.graph = buildPdg(*in.program);
  }
  in.slices = collapseToSliceGraph(in.graph);
  return in;
}

Placement loadPlacement(const std::string& path, const SliceGraph& graph) {
  auto placement = placementFromJson(readText(path));
  checkPlacement(graph.slices, placement);
  return placement;
}

std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string pct(double fraction) { return fixed2(fraction * 100.0) + " %"; }

std::string pad(const std::string& s, std::size_t width) {
  return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
}

std::size_t nameWidth(const std::vector<SliceInfo>& slices) {
  std::size_t w = 0;
  for (const auto& s : slices) w = std::max(w, s.name.size());
  return w;
}

void printViolations(const std::string& path, const std::vector<Violation>& violations,
                     std::ostream& os) {
  for (const auto& v : violations)
    os << where(path, v.call.pos) << ": unannotated " << directionName(v.direction)
       << " call from " << v.caller << " to " << v.callee << "\n";
}

void printFitness(const Loaded& in, const Placement& placement, std::ostream& out) {
  const auto report = evaluate(in.slices, placement);
  const auto w = nameWidth(in.slices.slices);
  out << "placement\n";
  for (std::size_t i = 0; i < report.perSlice.size(); ++i) {
    const auto& s = report.perSlice[i];
    const std::string tier(tierName(s.tier));
    out << "  " << pad(s.name, w) << "  "
        << (in.slices.slices[i].fixedTier ? pad(tier, 6) + "  fixed" : tier) << "\n";
  }
  std::size_t local = 0, total = 0;
  for (const auto& s : report.perSlice) {
    local += s.localCalls;
    total += s.totalCalls;
  }
  out << "offline availability: " << pct(report.program) << " (" << local << " of " << total
      << " calls local)\n";
  out << "per slice\n";
  for (const auto& s : report.perSlice)
    out << "  " << pad(s.name, w) << "  " << pad(pct(s.offline), 8) << "  " << s.localCalls
        << "/" << s.totalCalls << "\n";
  if (report.unresolvedCalls) out << "unresolved calls: " << report.unresolvedCalls << "\n";
  out << "valid: " << (report.valid ? "yes" : "no") << "\n";
  printViolations(in.path, report.violations, out);
}

ordered_json fitnessJson(const SliceGraph& graph, const Placement& placement) {
  return ordered_json::parse(fitnessToJson(evaluate(graph, placement)));
}

struct GaFlags {
  GaConfig config;

  void attach(CLI::App* app) {
    app->add_option("--pop", config.populationSize, "Population size")->capture_default_str();
    app->add_option("--gens", config.maxGenerations, "Generation limit")->capture_default_str();
    app->add_option("--pc", config.crossoverProb, "Crossover probability")->capture_default_str();
    app->add_option("--pm", config.mutationProb, "Mutation probability")->capture_default_str();
    app->add_option("--tournament", config.tournamentSize, "Tournament size")
        ->capture_default_str();
    app->add_option("--seed", config.rngSeed, "Random seed")->capture_default_str();
  }
};

struct Options {
  std::string input;
  std::vector<std::string> inputs;
  std::string placementFile;
  std::string output;
  GaFlags ga;
  AdvisorConfig advisor;
  bool dot = false;
  bool json = false;
  bool csv = false;
  bool search = false;
  bool apply = false;
  std::size_t runs = 0;
  std::size_t threads = 0;
  std::size_t maxIters = 10;
  std::size_t oracleCap = 12;
};

int cmdParse(const Options& o, std::ostream& out, std::ostream& err) {
  const auto in = load(o.input, err, true);
  const auto& p = *in.program;
  std::size_t fixed = 0;
  for (const auto& s : p.slices) fixed += s.fixedTier.has_value();
  out << "slices: " << p.slices.size() << " (" << fixed << " fixed)\n";
  std::size_t w = 0;
  for (const auto& s : p.slices) w = std::max(w, s.name.size());
  for (const auto& s : p.slices)
    out << "  " << pad(s.name, w) << "  "
        << (s.fixedTier ? std::string(tierName(*s.fixedTier)) : "unplaced") << "\n";

  std::array<std::size_t, 4> categories{};
  auto count = [&](const std::vector<Annotation>& list) {
    for (const auto& a : list) ++categories[static_cast<int>(annotationCategory(a.kind))];
  };
  for (const auto& s : p.slices) count(s.annotations);
  for (const auto& [id, list] : p.annotationsByNode) count(list);
  out << "annotations:";
  for (int c = 0; c < 4; ++c)
    out << (c ? ", " : " ") << categoryName(static_cast<AnnotationCategory>(c)) << " "
        << categories[c];
  out << "\n";

  const auto stmts = countStatements(p);
  out << "statements: " << stmts.total << " (" << stmts.shared << " shared)\n";
  std::array<std::size_t, 6> byResolution{};
  for (const auto& c : p.callSites) ++byResolution[static_cast<int>(c.resolution)];
  out << "calls:";
  for (int r = 0; r < 6; ++r)
    out << (r ? ", " : " ") << resolutionName(static_cast<CallResolution>(r)) << " "
        << byResolution[r];
  out << "\n";
  return kExitOk;
}

int cmdGraph(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.dot && o.json) throw Usage("--dot and --json are exclusive");
  const auto in = load(o.input, err);
  out << (o.json ? toJson(in.graph) : toDot(in.slices));
  return kExitOk;
}

int cmdAssign(const Options& o, std::ostream& out, std::ostream& err) {
  const auto in = load(o.input, err);
  if (o.runs > 0) {
    const auto stats = runStats(o.input, in.graph, o.ga.config, o.advisor, o.runs, o.threads);
    out << (o.csv ? statsCsv({stats}) : statsTable({stats}));
    return kExitOk;
  }
  const auto result = run(in.slices, fixedPlacement(in.slices.slices), o.ga.config);
  if (!o.output.empty()) writeText(o.output, placementToJson(result.bestPlacement));
  if (o.json) {
    ordered_json j;
    j["placement"] = ordered_json::parse(placementToJson(result.bestPlacement));
    j["fitness"] = fitnessJson(in.slices, result.bestPlacement);
    j["generationsUsed"] = result.generationsUsed;
    j["seed"] = o.ga.config.rngSeed;
    out << j.dump(2) << "\n";
  } else {
    printFitness(in, result.bestPlacement, out);
    out << "generations: " << result.generationsUsed << "\n";
  }
  return result.valid ? kExitOk : kExitInvalidPlacement;
}

int cmdOracle(const Options& o, std::ostream& out, std::ostream& err) {
  const auto in = load(o.input, err);
  const auto result = exhaustiveOracle(in.slices, fixedPlacement(in.slices.slices), o.oracleCap);
  if (!o.output.empty()) writeText(o.output, placementToJson(result.bestPlacement));
  if (o.json) {
    ordered_json j;
    j["placement"] = ordered_json::parse(placementToJson(result.bestPlacement));
    j["fitness"] = fitnessJson(in.slices, result.bestPlacement);
    j["enumerated"] = result.enumerated;
    j["validCount"] = result.validCount;
    out << j.dump(2) << "\n";
  } else {
    printFitness(in, result.bestPlacement, out);
    out << "enumerated: " << result.enumerated << " (" << result.validCount << " valid)\n";
  }
  if (!result.valid) {
    err << in.path << ": error: no valid placement exists\n";
    return kExitInvalidPlacement;
  }
  return kExitOk;
}

// Placement from --placement, or from a search when none is given.
std::optional<Placement> choosePlacement(const Options& o, const Loaded& in, std::ostream& err) {
  if (!o.placementFile.empty()) {
    if (o.search) throw Usage("--placement and --search are exclusive");
    auto placement = loadPlacement(o.placementFile, in.slices);
    const auto validity = isValid(in.slices, placement);
    if (!validity.valid) {
      err << o.placementFile << ": error: placement is not valid\n";
      printViolations(in.path, validity.violations, err);
      return std::nullopt;
    }
    return placement;
  }
  return run(in.slices, fixedPlacement(in.slices.slices), o.ga.config).bestPlacement;
}

int cmdAdvise(const Options& o, std::ostream& out, std::ostream& err) {
  const auto in = load(o.input, err);
  const auto placement = choosePlacement(o, in, err);
  if (!placement) return kExitInvalidPlacement;
  const auto fitness = evaluate(in.slices, *placement).program;
  const auto advice = advise(in.graph, *placement, o.advisor);
  out << (o.json ? adviceToJson(fitness, advice) : renderAdviceReport(fitness, advice));
  return kExitOk;
}

int cmdRefine(const Options& o, std::ostream& out, std::ostream& err) {
  if (!o.apply) return cmdAdvise(o, out, err);
  if (!o.placementFile.empty()) throw Usage("--apply searches its own placements");
  const auto in = load(o.input, err, true);
  const auto result = refineLoop(*in.program, o.ga.config, o.advisor, o.maxIters);

  std::ostringstream report;
  report << "iteration  slices  fitness   data  slice  generations\n";
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    const auto& s = result.steps[i];
    report << pad(std::to_string(i), 9) << "  " << pad(std::to_string(s.slices), 6) << "  "
           << pad(pct(s.fitness), 8) << "  " << pad(std::to_string(s.replicateAdvice), 4) << "  "
           << pad(std::to_string(s.moveAdvice), 5) << "  " << s.generationsUsed << "\n";
  }
  report << renderAdviceReport(result.fitness, result.remainingAdvice);

  const auto source = emit(result.program);
  if (o.output.empty()) {
    out << source;
    err << report.str();
  } else {
    writeText(o.output, source);
    out << report.str();
  }
  return result.valid ? kExitOk : kExitInvalidPlacement;
}

int cmdSplit(const Options& o, std::ostream& out, std::ostream& err) {
  const auto in = load(o.input, err);
  if (o.placementFile.empty()) throw Usage("split needs --placement");
  const auto placement = loadPlacement(o.placementFile, in.slices);
  const auto classification = classifyCalls(in.slices, placement);
  const auto validity = isValid(classification);
  if (!validity.valid) {
    err << o.placementFile << ": error: refusing to split an invalid placement\n";
    printViolations(in.path, validity.violations, err);
    return kExitInvalidPlacement;
  }

  std::vector<const PdgNode*> shared;
  for (const auto& n : in.graph.nodes)
    if (!n.owner && !n.function && n.kind != PdgNodeKind::Entry &&
        n.kind != PdgNodeKind::CallSite)
      shared.push_back(&n);
  std::stable_sort(shared.begin(), shared.end(), [](const PdgNode* a, const PdgNode* b) {
    return a->span.begin.offset < b->span.begin.offset;
  });

  for (const Tier side : {Tier::Client, Tier::Server}) {
    out << tierName(side) << "\n";
    for (std::size_t i = 0; i < in.slices.slices.size(); ++i) {
      const Tier t = classification.tiers[i];
      if (t == side || t == Tier::Both) out << "  slice " << in.slices.slices[i].name << "\n";
    }
    for (const auto* n : shared) {
      out << "  shared " << nodeKindName(n->kind);
      if (!n->name.empty()) out << " " << n->name;
      out << " at line " << n->span.begin.line << "\n";
    }
  }
  out << "remote calls\n";
  for (const auto& v : classification.calls) {
    if (v.locality != Locality::Remote) continue;
    out << "  " << where(in.path, v.call.pos) << ": "
        << ownerLabel(v.call.caller, in.slices.slices) << " -> "
        << ownerLabel(v.call.callee, in.slices.slices) << " (" << directionName(v.direction)
        << ")\n";
  }
  return kExitOk;
}

int cmdStats(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<RunStats> rows;
  for (const auto& path : o.inputs) {
    const auto in = load(path, err);
    rows.push_back(runStats(path, in.graph, o.ga.config, o.advisor, o.runs, o.threads));
  }
  out << (o.csv ? statsCsv(rows) : statsTable(rows));
  return kExitOk;
}

int exitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::DuplicateSliceName:
    case ErrorCode::UnknownAnnotationKind:
    case ErrorCode::MalformedConfig:
      return kExitParse;
    case ErrorCode::MissingPlacement:
    case ErrorCode::InvalidPlacement:
      return kExitInvalidPlacement;
    case ErrorCode::NoUnplacedSlices:
    case ErrorCode::GenomeLengthMismatch:
    case ErrorCode::AllInvalid:
    case ErrorCode::TooManySlices:
    case ErrorCode::TargetNotFound:
      return kExitSearchFailure;
    case ErrorCode::BadInput:
      return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tier assignment and offline-availability advice for TierJS programs",
               "tierslice"};
  app.require_subcommand(1);
  Options o;

  auto* parse = app.add_subcommand("parse", "Summarize slices, annotations and calls");
  parse->add_option("file", o.input, "TierJS source")->required();

  auto* graph = app.add_subcommand("graph", "Export the dependence graph");
  graph->add_option("file", o.input, "TierJS source or graph JSON")->required();
  graph->add_flag("--dot", o.dot, "Collapsed slice graph as DOT (default)");
  graph->add_flag("--json", o.json, "Full dependence graph as JSON");

  auto* assign = app.add_subcommand("assign", "Search a tier for every unplaced slice");
  assign->add_option("file", o.input, "TierJS source or graph JSON")->required();
  o.ga.attach(assign);
  assign->add_option("--runs", o.runs, "Repeat the search N times and print statistics");
  assign->add_option("--threads", o.threads, "Worker threads for --runs (0: all cores)");
  assign->add_flag("--csv", o.csv, "Statistics as CSV");
  assign->add_flag("--json", o.json, "Placement and fitness as JSON");
  assign->add_option("-o,--output", o.output, "Write the placement JSON to a file");

  auto* oracle = app.add_subcommand("oracle", "Enumerate every placement of the unplaced slices");
  oracle->add_option("file", o.input, "TierJS source or graph JSON")->required();
  oracle->add_option("--oracle-cap", o.oracleCap, "Largest number of unplaced slices")
      ->capture_default_str();
  oracle->add_flag("--json", o.json, "Placement and fitness as JSON");
  oracle->add_option("-o,--output", o.output, "Write the placement JSON to a file");

  auto* adviseCmd = app.add_subcommand("advise", "Replication and move advice");
  adviseCmd->add_option("file", o.input, "TierJS source or graph JSON")->required();
  adviseCmd->add_option("--placement", o.placementFile, "Placement JSON to advise on");
  adviseCmd->add_flag("--search", o.search, "Search a placement first (default)");
  o.ga.attach(adviseCmd);
  adviseCmd->add_option("--threshold", o.advisor.moveThreshold, "Move threshold")
      ->capture_default_str();
  adviseCmd->add_flag("--json", o.json, "Advice as JSON");

  auto* refine = app.add_subcommand("refine", "Search, advise and optionally apply the advice");
  refine->add_option("file", o.input, "TierJS source")->required();
  refine->add_flag("--apply", o.apply, "Apply advice until nothing is left");
  refine->add_option("--max-iters", o.maxIters, "Most advice applications")
      ->capture_default_str();
  o.ga.attach(refine);
  refine->add_option("--threshold", o.advisor.moveThreshold, "Move threshold")
      ->capture_default_str();
  refine->add_flag("--json", o.json, "Advice as JSON (without --apply)");
  refine->add_option("-o,--output", o.output, "Write the refined source to a file");

  auto* split = app.add_subcommand("split", "What each tier receives under a placement");
  split->add_option("file", o.input, "TierJS source or graph JSON")->required();
  split->add_option("--placement", o.placementFile, "Placement JSON")->required();

  auto* stats = app.add_subcommand("stats", "Repeated searches over several inputs");
  stats->add_option("files", o.inputs, "TierJS sources or graph JSON files")->required();
  o.runs = 100;
  stats->add_option("--runs", o.runs, "Searches per input")->capture_default_str();
  stats->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  o.ga.attach(stats);
  stats->add_option("--threshold", o.advisor.moveThreshold, "Move threshold")
      ->capture_default_str();
  stats->add_flag("--csv", o.csv, "CSV instead of an aligned table");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  // `stats` defaults to 100 runs; `assign` only prints statistics when asked.
  if (!stats->parsed() && assign->count("--runs") == 0) o.runs = 0;

  const std::string subject = o.input.empty() && !o.inputs.empty() ? o.inputs.front() : o.input;
  try {
    o.advisor.validate();
    o.ga.config.validate();
    if (parse->parsed()) return cmdParse(o, out, err);
    if (graph->parsed()) return cmdGraph(o, out, err);
    if (assign->parsed()) return cmdAssign(o, out, err);
    if (oracle->parsed()) return cmdOracle(o, out, err);
    if (adviseCmd->parsed()) return cmdAdvise(o, out, err);
    if (refine->parsed()) return cmdRefine(o, out, err);
    if (split->parsed()) return cmdSplit(o, out, err);
    if (stats->parsed()) return cmdStats(o, out, err);
  } catch (const ParseError& e) {
    err << where(subject, e.pos()) << ": error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    err << subject << ": error: " << e.what() << "\n";
    return exitCodeFor(e.code());
  } catch (const Usage& e) {
    err << "tierslice: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "tierslice: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace tierslice::cli
