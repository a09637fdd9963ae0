#pragma once

#include <string>
#include <string_view>

#include "tierslice/source.hpp"

namespace tierslice {

/// Parses TierJS text. Annotations are taken from block comments and attached
/// to the syntactically next statement. The result is indexed (statement ids,
/// declarations, call sites) but calls are not yet resolved.
///
/// Throws ParseError with one of SyntaxError, DuplicateSliceName,
/// UnknownAnnotationKind or MalformedConfig.
SourceProgram parse(std::string_view sourceText);

/// Lexical, single-assignment resolution of every identifier reference and
/// call site. Unresolved identifier calls are recorded as warnings.
SourceProgram resolveCalls(SourceProgram program);

/// parse() followed by resolveCalls().
SourceProgram analyze(std::string_view sourceText);

/// Recomputes ids, declarations, call sites and config after the tree was
/// edited. Leaves the program unresolved.
void reindex(SourceProgram& program);

/// Canonical TierJS text for a program. Parsing the output yields a
/// structurally equal program.
std::string emit(const SourceProgram& program);

}  // namespace tierslice
