#include "tierslice/source.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace tierslice {

namespace {

constexpr std::array<std::pair<AnnotationKind, std::string_view>, 17> kAnnotationNames = {{
    {AnnotationKind::Slice, "slice"},
    {AnnotationKind::Config, "config"},
    {AnnotationKind::Client, "client"},
    {AnnotationKind::Server, "server"},
    {AnnotationKind::Ui, "ui"},
    {AnnotationKind::RemoteCall, "remoteCall"},
    {AnnotationKind::LocalCall, "localCall"},
    {AnnotationKind::Blocking, "blocking"},
    {AnnotationKind::Reply, "reply"},
    {AnnotationKind::Broadcast, "broadcast"},
    {AnnotationKind::RemoteProcedure, "remoteProcedure"},
    {AnnotationKind::Local, "local"},
    {AnnotationKind::Copy, "copy"},
    {AnnotationKind::Replicated, "replicated"},
    {AnnotationKind::Observable, "observable"},
    {AnnotationKind::DefineHandler, "defineHandler"},
    {AnnotationKind::UseHandler, "useHandler"},
}};

}  // namespace

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateSliceName: return "DuplicateSliceName";
    case ErrorCode::UnknownAnnotationKind: return "UnknownAnnotationKind";
    case ErrorCode::MalformedConfig: return "MalformedConfig";
    case ErrorCode::MissingPlacement: return "MissingPlacement";
    case ErrorCode::InvalidPlacement: return "InvalidPlacement";
    case ErrorCode::NoUnplacedSlices: return "NoUnplacedSlices";
    case ErrorCode::GenomeLengthMismatch: return "GenomeLengthMismatch";
    case ErrorCode::AllInvalid: return "AllInvalid";
    case ErrorCode::TooManySlices: return "TooManySlices";
    case ErrorCode::TargetNotFound: return "TargetNotFound";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Error";
}

std::string_view annotationName(AnnotationKind kind) {
  for (const auto& [k, name] : kAnnotationNames)
    if (k == kind) return name;
  return "?";
}

std::optional<AnnotationKind> annotationFromName(std::string_view name) {
  for (const auto& [k, n] : kAnnotationNames)
    if (n == name) return k;
  return std::nullopt;
}

AnnotationCategory annotationCategory(AnnotationKind kind) {
  switch (kind) {
    case AnnotationKind::Slice:
    case AnnotationKind::Config:
    case AnnotationKind::Client:
    case AnnotationKind::Server:
    case AnnotationKind::Ui:
      return AnnotationCategory::Placement;
    case AnnotationKind::RemoteCall:
    case AnnotationKind::LocalCall:
    case AnnotationKind::Blocking:
    case AnnotationKind::Reply:
    case AnnotationKind::Broadcast:
    case AnnotationKind::RemoteProcedure:
      return AnnotationCategory::Communication;
    case AnnotationKind::Local:
    case AnnotationKind::Copy:
    case AnnotationKind::Replicated:
    case AnnotationKind::Observable:
      return AnnotationCategory::Sharing;
    case AnnotationKind::DefineHandler:
    case AnnotationKind::UseHandler:
      return AnnotationCategory::FailureHandling;
  }
  return AnnotationCategory::Placement;
}

std::string_view categoryName(AnnotationCategory category) {
  switch (category) {
    case AnnotationCategory::Placement: return "placement";
    case AnnotationCategory::Communication: return "communication";
    case AnnotationCategory::Sharing: return "sharing";
    case AnnotationCategory::FailureHandling: return "failure";
  }
  return "?";
}

bool hasAnnotation(const std::vector<Annotation>& annotations, AnnotationKind kind) {
  return std::any_of(annotations.begin(), annotations.end(),
                     [kind](const Annotation& a) { return a.kind == kind; });
}

std::string_view tierName(Tier tier) {
  switch (tier) {
    case Tier::Client: return "client";
    case Tier::Server: return "server";
    case Tier::Both: return "both";
  }
  return "?";
}

std::optional<Tier> tierFromName(std::string_view name) {
  if (name == "client") return Tier::Client;
  if (name == "server") return Tier::Server;
  if (name == "both") return Tier::Both;
  return std::nullopt;
}

std::string ownerName(const Owner& owner, const std::vector<SliceDecl>& slices) {
  return owner ? slices.at(*owner).name : std::string("<shared>");
}

std::string_view resolutionName(CallResolution resolution) {
  switch (resolution) {
    case CallResolution::Resolved: return "resolved";
    case CallResolution::Undeclared: return "undeclared";
    case CallResolution::Ambiguous: return "ambiguous";
    case CallResolution::NotAFunction: return "not-a-function";
    case CallResolution::Dynamic: return "dynamic";
    case CallResolution::External: return "external";
  }
  return "?";
}

std::optional<std::size_t> SourceProgram::findSlice(std::string_view name) const {
  for (std::size_t i = 0; i < slices.size(); ++i)
    if (slices[i].name == name) return i;
  return std::nullopt;
}

namespace {

std::size_t countIn(const std::vector<Stmt>& stmts);

std::size_t countExpr(const Expr& e) {
  std::size_t n = countIn(e.body);
  for (const auto& op : e.operands) n += countExpr(op);
  return n;
}

std::size_t countStmt(const Stmt& s) {
  std::size_t n = 1 + countIn(s.body) + countIn(s.alt);
  for (const auto& b : s.bindings)
    for (const auto& e : b.init) n += countExpr(e);
  for (const auto& e : s.exprs) n += countExpr(e);
  return n;
}

std::size_t countIn(const std::vector<Stmt>& stmts) {
  std::size_t n = 0;
  for (const auto& s : stmts) n += countStmt(s);
  return n;
}

}  // namespace

StatementCounts countStatements(const SourceProgram& program) {
  StatementCounts counts;
  for (const auto& slice : program.slices) {
    counts.perSlice.push_back(countIn(slice.body));
    counts.total += counts.perSlice.back();
  }
  counts.shared = countIn(program.shared);
  counts.total += counts.shared;
  return counts;
}

}  // namespace tierslice
