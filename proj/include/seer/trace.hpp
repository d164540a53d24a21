#pragma once

#include <cstddef>
#include <vector>

#include "seer/vocabulary.hpp"

namespace seer {

/// An encoded instance as the FSM builder and miners see it: surface pieces,
/// abstract states, and the per-token intermediate argmax labels, all aligned.
struct TraceRecord {
  std::size_t instance = 0;
  std::vector<Token> tokens;
  std::vector<int> states;
  std::vector<int> labels;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

}  // namespace seer
