#include "seer/dataset.hpp"

#include <fstream>
#include <istream>

#include <json.hpp>

#include "seer/error.hpp"
#include "seer/json_util.hpp"

namespace seer {

std::string_view to_string(Split split) { return split == Split::Train ? "train" : "test"; }

Split parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  throw Error(ErrorCode::BadQuery, "unknown split '" + std::string(s) + "'");
}

std::vector<LabeledText> read_dataset(std::istream& in) {
  std::vector<LabeledText> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fail = [&](const std::string& why) {
      return Error(ErrorCode::IngestError, "line " + std::to_string(line_no) + ": " + why);
    };
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      throw fail("not valid JSON");
    }
    if (!j.is_object()) throw fail("expected a JSON object");
    if (!j.contains("text") || !j["text"].is_string()) throw fail("missing string field 'text'");
    if (!j.contains("label") || !j["label"].is_number_integer()) {
      throw fail("missing integer field 'label'");
    }
    LabeledText row;
    row.text = j["text"].get<std::string>();
    row.label = j["label"].get<int>();
    if (row.label < 0) {
      throw Error(ErrorCode::BadLabel, "line " + std::to_string(line_no) + ": negative label");
    }
    const std::string split = j.value("split", std::string("train"));
    if (split == "train") {
      row.split = Split::Train;
    } else if (split == "test") {
      row.split = Split::Test;
    } else {
      throw fail("split must be 'train' or 'test'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<LabeledText> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_dataset(in);
}

void write_dataset(const std::filesystem::path& path, const std::vector<LabeledText>& rows) {
  std::string out;
  for (const LabeledText& row : rows) {
    json j = {{"text", row.text}, {"label", row.label}, {"split", to_string(row.split)}};
    out += j.dump();
    out.push_back('\n');
  }
  write_file(path, out);
}

std::vector<LabeledText> select_split(const std::vector<LabeledText>& rows, Split split) {
  std::vector<LabeledText> out;
  for (const LabeledText& row : rows) {
    if (row.split == split) out.push_back(row);
  }
  return out;
}

std::vector<std::string> texts_of(const std::vector<LabeledText>& rows) {
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const LabeledText& row : rows) out.push_back(row.text);
  return out;
}

}  // namespace seer
