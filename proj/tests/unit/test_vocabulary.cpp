#include <doctest.h>

#include "fixtures.hpp"
#include "seer/dataset.hpp"
#include "seer/error.hpp"
#include "seer/vocabulary.hpp"

using namespace seer;

namespace {

// Reference segmenter: at each offset try every piece length from the longest.
std::vector<int> reference_segment(const std::string& word, const Vocabulary& v) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < word.size()) {
    std::size_t len = std::min(word.size() - i, v.max_piece_bytes());
    for (; len > 0; --len) {
      if (auto id = v.find(word.substr(i, len))) {
        out.push_back(*id);
        break;
      }
    }
    if (len == 0) {
      out.push_back(v.unknown_id());
      len = 1;
    }
    i += len;
  }
  return out;
}

}  // namespace

TEST_CASE("hypocrisy splits into three pieces") {
  const Vocabulary v = testkit::hypocrisy_vocabulary();
  const auto ids = tokenize("hypocrisy", v);
  REQUIRE(ids.size() == 3);
  CHECK(v.piece(ids[0]) == "hypo");
  CHECK(v.piece(ids[1]) == "cri");
  CHECK(v.piece(ids[2]) == "sy");
  const auto pieces = tokenize_pieces("Hypocrisy", v);
  CHECK(pieces[0].word_start);
  CHECK_FALSE(pieces[1].word_start);
  CHECK(join_pieces(pieces) == "hypocrisy");
}

TEST_CASE("empty input is rejected") {
  const Vocabulary v = testkit::hypocrisy_vocabulary();
  for (const char* text : {"", "   ", "\t\n"}) {
    try {
      tokenize(text, v);
      FAIL("expected EmptyInput");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyInput);
    }
  }
}

TEST_CASE("unmatched characters map to the unknown id") {
  const Vocabulary v = testkit::hypocrisy_vocabulary();
  CHECK(tokenize("zzqx", v) == std::vector<int>(4, v.unknown_id()));
  const auto pieces = tokenize_pieces("zzqx", v);
  std::string joined;
  for (const auto& p : pieces) joined += p.piece;
  CHECK(joined == "zzqx");
}

TEST_CASE("segmentation agrees with a reference segmenter and reproduces the word") {
  const Vocabulary v = testkit::make_vocabulary({"a", "ab", "abc", "b", "bc", "c", "ca", "cab", "d"});
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::string word;
    const std::size_t len = 1 + rng.below(9);
    for (std::size_t i = 0; i < len; ++i) word.push_back("abcdeA"[rng.below(6)]);
    const std::string norm = normalize_text(word);
    CHECK(tokenize(word, v) == reference_segment(norm, v));
    std::string joined;
    for (const auto& p : tokenize_pieces(word, v)) joined += p.piece;
    CHECK(joined == norm);
  }
}

TEST_CASE("normalization lowercases and collapses whitespace") {
  CHECK(normalize_text("  The  Movie\twas\n\nGOOD ") == "the movie was good");
  const Vocabulary v = testkit::make_vocabulary({"the", "movie"});
  const auto pieces = tokenize_pieces("The   MOVIE", v);
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[1].word_start);
  CHECK(join_pieces(pieces) == "the movie");
}

TEST_CASE("multibyte characters become single unknown pieces") {
  const Vocabulary v = testkit::make_vocabulary({"caf"});
  const auto pieces = tokenize_pieces("café", v);
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[1].id == v.unknown_id());
  CHECK(pieces[1].piece == "\xC3\xA9");
}

TEST_CASE("vocabulary invariants are enforced") {
  CHECK_THROWS_AS(Vocabulary({"a", "a"}, 0), Error);
  CHECK_THROWS_AS(Vocabulary({"a", "b"}, 2), Error);
  CHECK_THROWS_AS(Vocabulary({}, 0), Error);
  const Vocabulary v({"<unk>", "x"}, 0);
  CHECK_FALSE(v.find("<unk>").has_value());
  CHECK(v.find("x") == 1);
}

TEST_CASE("built vocabulary covers every training character") {
  const std::vector<std::string> texts = {"good movie", "bad movie", "movie night!"};
  const Vocabulary v = build_vocabulary(texts, 2);
  CHECK(v.piece(0) == "<unk>");
  CHECK(v.piece(1) == "movie");
  CHECK(v.find("bad").has_value());  // "bad" and "good" tie at 1; "bad" sorts first
  CHECK_FALSE(v.find("good").has_value());
  for (const auto& t : texts) {
    for (int id : tokenize(t, v)) CHECK(id != v.unknown_id());
  }
  CHECK(build_vocabulary(texts, 2) == v);
}

TEST_CASE("dataset reader validates rows") {
  std::istringstream ok("{\"text\":\"a\",\"label\":1,\"split\":\"test\"}\n\n{\"text\":\"b\",\"label\":0}\n");
  const auto rows = read_dataset(ok);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].split == Split::Test);
  CHECK(rows[1].split == Split::Train);

  std::istringstream bad("{\"text\":\"a\",\"label\":1}\n{\"text\":3,\"label\":1}\n");
  try {
    read_dataset(bad);
    FAIL("expected IngestError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IngestError);
    CHECK(e.detail().find("line 2") != std::string::npos);
  }
  std::istringstream negative("{\"text\":\"a\",\"label\":-1}\n");
  CHECK_THROWS_AS(read_dataset(negative), Error);
}
