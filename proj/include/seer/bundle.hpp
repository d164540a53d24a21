#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "seer/abstraction.hpp"
#include "seer/corpus.hpp"
#include "seer/fsm.hpp"
#include "seer/model.hpp"
#include "seer/patterns.hpp"

namespace seer {

inline constexpr const char* kBundleVersion = "seer-bundle/1";

/// Everything the service and UI read: model, abstraction, FSM, patterns and
/// the analyzed instances of both splits.
struct AnalysisBundle {
  ModelBundle model;
  AbstractionModel abstraction;
  StateMachine fsm;
  PatternSet patterns;
  InstanceTable instances;

  friend bool operator==(const AnalysisBundle&, const AnalysisBundle&) = default;
};

/// Ingests `rows`, builds the FSM from the training traces and mines both
/// pattern kinds from the training split.
AnalysisBundle build_analysis(ModelBundle model, AbstractionModel abstraction,
                              const std::vector<LabeledText>& rows, const MiningConfig& mining = {},
                              const PhraseOptions& phrases = {});

/// Writes manifest.json, model.json, abstraction.json, fsm.json,
/// patterns.json and instances.jsonl. The manifest records versions plus a
/// SHA-256 and byte count per file.
void save_bundle(const std::filesystem::path& dir, const AnalysisBundle& bundle);

/// Verifies the manifest (VersionMismatch) and every file hash (CorruptBundle
/// naming the file) before parsing.
AnalysisBundle load_bundle(const std::filesystem::path& dir);

std::string sha256_hex(std::string_view data);

std::string instances_to_jsonl(const InstanceTable& table);
InstanceTable instances_from_jsonl(std::string_view text, int n_classes, int n_states);

}  // namespace seer
