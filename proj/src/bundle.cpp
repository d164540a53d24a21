#include "seer/bundle.hpp"

#include <array>
#include <sstream>

#include <openssl/evp.h>

#include "seer/error.hpp"
#include "seer/model_io.hpp"

namespace seer {

namespace {

constexpr std::array<const char*, 5> kBundleFiles = {"model.json", "abstraction.json", "fsm.json",
                                                     "patterns.json", "instances.jsonl"};

json parse_member(const std::string& name, const std::string& contents) {
  try {
    return json::parse(contents);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptBundle, name + ": " + e.what());
  }
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Io, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

AnalysisBundle build_analysis(ModelBundle model, AbstractionModel abstraction,
                              const std::vector<LabeledText>& rows, const MiningConfig& mining,
                              const PhraseOptions& phrases) {
  AnalysisBundle b;
  b.instances = ingest(rows, model, abstraction);
  const std::vector<TraceRecord> train = b.instances.traces(Split::Train);
  b.fsm = build_fsm(abstraction.n_states(), model.num_classes(), train, phrases);
  b.patterns.config = mining;
  b.patterns.influential = mine_influential(train, mining.window, mining.influential_top_k,
                                            mining.max_phrases, mining.max_samples);
  b.patterns.buggy = mine_buggy(b.instances.traces(Split::Train, true),
                                b.instances.traces(Split::Train, false), mining.buggy_top_k, mining);
  b.model = std::move(model);
  b.abstraction = std::move(abstraction);
  return b;
}

std::string instances_to_jsonl(const InstanceTable& table) {
  std::string out;
  for (const InstanceRecord& r : table.records()) {
    out += instance_to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

InstanceTable instances_from_jsonl(std::string_view text, int n_classes, int n_states) {
  std::vector<InstanceRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(instance_from_json(parse_member("instances.jsonl", line)));
  }
  return InstanceTable(std::move(records), n_classes, n_states);
}

void save_bundle(const std::filesystem::path& dir, const AnalysisBundle& b) {
  std::filesystem::create_directories(dir);
  const std::array<std::string, 5> contents = {
      dump_json(model_to_json(b.model)), dump_json(abstraction_to_json(b.abstraction)),
      dump_json(fsm_to_json(b.fsm)), dump_json(patterns_to_json(b.patterns)),
      instances_to_jsonl(b.instances)};
  json files = json::object();
  for (std::size_t i = 0; i < kBundleFiles.size(); ++i) {
    write_file(dir / kBundleFiles[i], contents[i]);
    files[kBundleFiles[i]] = {{"sha256", sha256_hex(contents[i])}, {"bytes", contents[i].size()}};
  }
  const json manifest = {{"version", kBundleVersion},
                         {"model_version", kModelVersion},
                         {"abstraction_version", kAbstractionVersion},
                         {"fsm_version", kFsmVersion},
                         {"patterns_version", kPatternsVersion},
                         {"n_states", b.abstraction.n_states()},
                         {"n_classes", b.model.num_classes()},
                         {"files", std::move(files)}};
  write_file(dir / "manifest.json", dump_json(manifest));
}

AnalysisBundle load_bundle(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / "manifest.json")) {
    throw Error(ErrorCode::CorruptBundle, "manifest.json: missing from " + dir.string());
  }
  const json manifest = parse_member("manifest.json", read_file(dir / "manifest.json"));
  const auto expect = [&](const char* field, const char* value) {
    if (!manifest.contains(field) || manifest[field] != value) {
      throw Error(ErrorCode::VersionMismatch,
                  std::string(field) + " is " + (manifest.contains(field) ? manifest[field].dump() : "absent") +
                      ", expected \"" + value + "\"");
    }
  };
  expect("version", kBundleVersion);
  expect("model_version", kModelVersion);
  expect("abstraction_version", kAbstractionVersion);
  expect("fsm_version", kFsmVersion);
  expect("patterns_version", kPatternsVersion);

  std::array<std::string, 5> contents;
  for (std::size_t i = 0; i < kBundleFiles.size(); ++i) {
    const std::string name = kBundleFiles[i];
    const std::filesystem::path path = dir / name;
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::CorruptBundle, name + ": missing");
    if (!manifest.contains("files") || !manifest["files"].contains(name)) {
      throw Error(ErrorCode::CorruptBundle, name + ": not listed in manifest");
    }
    contents[i] = read_file(path);
    if (manifest["files"][name].value("sha256", std::string()) != sha256_hex(contents[i])) {
      throw Error(ErrorCode::CorruptBundle, name + ": content hash mismatch");
    }
  }

  AnalysisBundle b;
  try {
    b.model = model_from_json(parse_member("model.json", contents[0]));
    b.abstraction = abstraction_from_json(parse_member("abstraction.json", contents[1]));
    b.fsm = fsm_from_json(parse_member("fsm.json", contents[2]));
    b.patterns = patterns_from_json(parse_member("patterns.json", contents[3]));
    b.instances = instances_from_jsonl(contents[4], b.model.num_classes(), b.abstraction.n_states());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptBundle || e.code() == ErrorCode::VersionMismatch) throw;
    throw Error(ErrorCode::CorruptBundle, e.what());
  }
  return b;
}

}  // namespace seer
