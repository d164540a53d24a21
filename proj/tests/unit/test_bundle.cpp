#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "seer/bundle.hpp"
#include "seer/error.hpp"

using namespace seer;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("seer_bundle_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ErrorCode load_error(const fs::path& dir, std::string* detail = nullptr) {
  try {
    load_bundle(dir);
  } catch (const Error& e) {
    if (detail) *detail = e.detail();
    return e.code();
  }
  FAIL("bundle loaded");
  return ErrorCode::Io;
}

const AnalysisBundle& shared_bundle() {
  static const AnalysisBundle b = [] {
    auto p = testkit::small_pipeline(4);
    return build_analysis(p.model, p.abstraction, p.rows);
  }();
  return b;
}

}  // namespace

TEST_CASE("build_analysis uses the training split") {
  const AnalysisBundle& b = shared_bundle();
  CHECK(b.instances.size() == 200u);
  long finals = 0;
  for (const auto& n : b.fsm.nodes)
    for (long c : n.final_class_counts) finals += c;
  CHECK(finals == 150);
  CHECK_FALSE(b.patterns.influential.empty());
  const auto correct = b.instances.traces(Split::Train, true);
  for (const auto& p : b.patterns.buggy) {
    for (const auto& tr : correct) CHECK_FALSE(first_match(tr.states, p.states, b.patterns.config.max_gap).has_value());
  }
}

TEST_CASE("save then load is the identity") {
  const fs::path dir = scratch("roundtrip");
  save_bundle(dir, shared_bundle());
  for (const char* f : {"manifest.json", "model.json", "abstraction.json", "fsm.json", "patterns.json", "instances.jsonl"})
    CHECK(fs::exists(dir / f));
  const AnalysisBundle back = load_bundle(dir);
  CHECK(back.model == shared_bundle().model);
  CHECK(back.abstraction == shared_bundle().abstraction);
  CHECK(back.fsm == shared_bundle().fsm);
  CHECK(back.patterns == shared_bundle().patterns);
  CHECK(back.instances == shared_bundle().instances);
  CHECK(back == shared_bundle());

  const fs::path again = scratch("roundtrip2");
  save_bundle(again, back);
  for (const char* f : {"manifest.json", "fsm.json", "instances.jsonl"})
    CHECK(read_file(dir / f) == read_file(again / f));
}

TEST_CASE("tampering is detected and names the file") {
  const fs::path dir = scratch("tamper");
  save_bundle(dir, shared_bundle());
  std::string text = read_file(dir / "fsm.json");
  text[text.size() / 2] ^= 0x01;
  write_file(dir / "fsm.json", text);
  std::string detail;
  CHECK(load_error(dir, &detail) == ErrorCode::CorruptBundle);
  CHECK(detail.find("fsm.json") != std::string::npos);

  save_bundle(dir, shared_bundle());
  fs::remove(dir / "patterns.json");
  CHECK(load_error(dir, &detail) == ErrorCode::CorruptBundle);
  CHECK(detail.find("patterns.json") != std::string::npos);

  fs::remove_all(dir / "manifest.json");
  CHECK(load_error(dir) == ErrorCode::CorruptBundle);
}

TEST_CASE("version mismatch") {
  const fs::path dir = scratch("version");
  save_bundle(dir, shared_bundle());
  json manifest = json::parse(read_file(dir / "manifest.json"));
  manifest["model_version"] = "seer-gru/0";
  write_file(dir / "manifest.json", dump_json(manifest));
  CHECK(load_error(dir) == ErrorCode::VersionMismatch);
}

TEST_CASE("sha256 of a known string") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
