#include "hlsforge/error.hpp"

namespace hlsforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingDirectory: return "MissingDirectory";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DuplicateDesign: return "DuplicateDesign";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::UnmatchedTemplate: return "UnmatchedTemplate";
    case ErrorCode::UnfilledPlaceholder: return "UnfilledPlaceholder";
    case ErrorCode::InvalidAssignment: return "InvalidAssignment";
    case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::MissingTemplate: return "MissingTemplate";
    case ErrorCode::UnsupportedDirective: return "UnsupportedDirective";
    case ErrorCode::AnchorNotFound: return "AnchorNotFound";
    case ErrorCode::ManifestMissing: return "ManifestMissing";
    case ErrorCode::LabelUnknown: return "LabelUnknown";
    case ErrorCode::SynthReportMissing: return "SynthReportMissing";
    case ErrorCode::ExecutableNotFound: return "ExecutableNotFound";
    case ErrorCode::MalformedReport: return "MalformedReport";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::MalformedSpec: return "MalformedSpec";
    case ErrorCode::SourceUnreadable: return "SourceUnreadable";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NoPairs: return "NoPairs";
    case ErrorCode::DegenerateTruth: return "DegenerateTruth";
    case ErrorCode::EmptyValues: return "EmptyValues";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IOError: return "IOError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace hlsforge
