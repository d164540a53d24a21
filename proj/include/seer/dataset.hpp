#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace seer {

enum class Split { Train, Test };

std::string_view to_string(Split split);
Split parse_split(std::string_view s);

struct LabeledText {
  std::string text;
  int label = 0;
  Split split = Split::Train;

  friend bool operator==(const LabeledText&, const LabeledText&) = default;
};

/// One JSON object per line: {"text": ..., "label": int, "split": "train"|"test"}.
/// Blank lines are skipped; anything else malformed throws IngestError naming
/// the 1-based line number.
std::vector<LabeledText> read_dataset(std::istream& in);
std::vector<LabeledText> read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const std::vector<LabeledText>& rows);

std::vector<LabeledText> select_split(const std::vector<LabeledText>& rows, Split split);
std::vector<std::string> texts_of(const std::vector<LabeledText>& rows);

}  // namespace seer
