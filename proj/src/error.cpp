#include "seer/error.hpp"

namespace seer {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IndexOutOfVocab: return "IndexOutOfVocab";
    case ErrorCode::NonFiniteLogits: return "NonFiniteLogits";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::BadComponentCount: return "BadComponentCount";
    case ErrorCode::MalformedTrace: return "MalformedTrace";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::IngestError: return "IngestError";
    case ErrorCode::BadQuery: return "BadQuery";
    case ErrorCode::CorruptBundle: return "CorruptBundle";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::BadModelFile: return "BadModelFile";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace seer
