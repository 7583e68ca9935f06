#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hlsforge {

enum class ErrorCode {
  // core
  MissingDirectory,
  EmptyDataset,
  DuplicateDesign,
  // optdsl
  SyntaxError,
  CountMismatch,
  UnmatchedTemplate,
  UnfilledPlaceholder,
  InvalidAssignment,
  SpaceTooLarge,
  // frontends
  MissingTemplate,
  UnsupportedDirective,
  AnchorNotFound,
  // toolflows
  ManifestMissing,
  LabelUnknown,
  SynthReportMissing,
  ExecutableNotFound,
  // aggregate
  MalformedReport,
  MissingField,
  MalformedSpec,
  SourceUnreadable,
  // analysis
  LengthMismatch,
  EmptyInput,
  NoPairs,
  DegenerateTruth,
  EmptyValues,
  // shared
  InvalidArgument,
  IOError,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hlsforge
