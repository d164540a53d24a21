#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seer {

enum class ErrorCode {
  EmptyInput,
  IndexOutOfVocab,
  NonFiniteLogits,
  EmptyDataset,
  BadLabel,
  BadDimension,
  BadComponentCount,
  MalformedTrace,
  UnknownState,
  BadK,
  IngestError,
  BadQuery,
  CorruptBundle,
  VersionMismatch,
  BadModelFile,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure the engine reports carries one of the codes above; what()
/// renders as "<Code>: <detail>" so the CLI can print it on one line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace seer
