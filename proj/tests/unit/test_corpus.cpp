#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "seer/corpus.hpp"
#include "seer/error.hpp"

using namespace seer;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("ingest binds every row to its trace and prediction") {
  const auto p = testkit::small_pipeline(1, 80, 20);
  const InstanceTable table = ingest(p.rows, p.model, p.abstraction);
  REQUIRE(table.size() == 100u);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const InstanceRecord& r = table.at(i);
    CHECK(r.index == i);
    CHECK(r.text == p.rows[i].text);
    CHECK(r.human_label == p.rows[i].label);
    CHECK(r.split == p.rows[i].split);
    CHECK(r.correct == (r.prediction == r.human_label));
    const HiddenTrace tr = forward_trace(p.model, tokenize(r.text, p.model.vocab));
    CHECK(r.trace.states == encode_trace(p.abstraction, tr));
    CHECK(r.trace.labels == tr.intermediate_labels());
    CHECK(r.prediction == tr.final_label);
    CHECK(r.trace.tokens.size() == r.trace.states.size());
  }
  CHECK(table.split_members(Split::Train).size() == 80u);
  CHECK(ingest(p.rows, p.model, p.abstraction) == table);
}

TEST_CASE("ingest errors") {
  const auto p = testkit::small_pipeline(2, 10, 0);
  auto rows = p.rows;
  rows[3].label = 2;
  CHECK(code_of([&] { ingest(rows, p.model, p.abstraction); }) == ErrorCode::BadLabel);
  rows = p.rows;
  rows[4].text = "  ";
  CHECK_THROWS_WITH_AS(ingest(rows, p.model, p.abstraction), doctest::Contains("row 4"), Error);
}

TEST_CASE("correctness filter on the ten-instance table") {
  const InstanceTable t = testkit::ten_instance_table();
  QuerySpec spec;
  spec.correct = false;
  const QueryResult r = query(t, spec);
  CHECK(r.total_count == 3u);
  CHECK(r.page == std::vector<std::size_t>{2, 5, 8});
  spec.split = Split::Train;
  CHECK(query(t, spec).total_count == 2u);
}

TEST_CASE("keyword search for quarters") {
  const InstanceTable t = testkit::quarters_table();
  QuerySpec spec;
  spec.split = Split::Train;
  spec.text = TextQuery{"quarters", false};
  const QueryResult r = query(t, spec);
  CHECK(r.total_count == 28u);
  CHECK(r.prediction_distribution == std::vector<long>{1, 27});
  CHECK(r.label_distribution == std::vector<long>{4, 24});
}

TEST_CASE("distributions cover the whole filtered set, not the page") {
  const InstanceTable t = testkit::random_table(120, 3);
  QuerySpec spec;
  spec.page_size = 7;
  const QueryResult all = query(t, spec);
  CHECK(all.page.size() == 7u);
  long total = 0;
  for (long c : all.label_distribution) total += c;
  CHECK(total == 120);
  total = 0;
  for (long c : all.prediction_distribution) total += c;
  CHECK(total == 120);
  spec.split = Split::Test;
  spec.correct = true;
  const QueryResult some = query(t, spec);
  total = 0;
  for (long c : some.label_distribution) total += c;
  CHECK(total == static_cast<long>(some.total_count));
}

TEST_CASE("imbalanced corpus reports its label split") {
  std::vector<InstanceRecord> rows;
  for (std::size_t i = 0; i < 100; ++i) rows.push_back(testkit::make_record(i, Split::Train, "x", {0}, 1, i < 92 ? 1 : 0));
  const QueryResult r = query(InstanceTable(std::move(rows), 2, 1), QuerySpec{});
  CHECK(r.label_distribution == std::vector<long>{8, 92});
}

TEST_CASE("query equals a linear scan on random specs") {
  const InstanceTable t = testkit::random_table(200, 4);
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const QuerySpec spec = testkit::random_spec(rng, t);
    CHECK(query(t, spec) == testkit::scan_query(t, spec));
  }
}

TEST_CASE("default ordering and paging") {
  const InstanceTable t = testkit::random_table(120, 6);
  const QuerySpec spec;
  CHECK(spec.page_size == 50);
  const QueryResult first = query(t, spec);
  REQUIRE(first.page.size() == 50u);
  for (std::size_t i = 0; i < 50; ++i) CHECK(first.page[i] == i);
  QuerySpec third;
  third.page = 3;
  CHECK(query(t, third).page.size() == 20u);
  third.page = 4;
  CHECK(query(t, third).page.empty());
}

TEST_CASE("invalid queries") {
  const InstanceTable t = testkit::ten_instance_table();
  QuerySpec spec;
  spec.text = TextQuery{"ab(c", true};
  try {
    query(t, spec);
    FAIL("expected BadQuery");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadQuery);
    CHECK(e.detail().find("position") != std::string::npos);
  }
  QuerySpec page;
  page.page = 0;
  CHECK(code_of([&] { query(t, page); }) == ErrorCode::BadQuery);
  QuerySpec size;
  size.page_size = 501;
  CHECK(code_of([&] { query(t, size); }) == ErrorCode::BadQuery);
  size.page_size = 500;
  CHECK(query(t, size).total_count == 10u);
}

TEST_CASE("span search examples") {
  CHECK(find_spans("abab", TextQuery{"ab", false}) == std::vector<TextSpan>{{0, 2}, {2, 4}});
  CHECK(find_spans("aab", TextQuery{"a+b", true}) == std::vector<TextSpan>{{0, 3}});
  CHECK(find_spans("The THE the", TextQuery{"tHe", false}) == std::vector<TextSpan>{{0, 3}, {4, 7}, {8, 11}});
  CHECK(find_spans("aaaa", TextQuery{"aa", false}) == std::vector<TextSpan>{{0, 2}, {2, 4}});
  CHECK(find_spans("xyz", TextQuery{"a*", true}).empty());
  CHECK_THROWS_AS(find_spans("x", TextQuery{"", false}), Error);
}

TEST_CASE("regex spans agree with std::regex on fuzzed input") {
  Rng rng(7);
  const std::string atoms[] = {"a", "b", "ab", "[ab]", ".", "(a|b)", "\\s", "[^a ]"};
  const std::string quant[] = {"", "+", "?", "*"};
  for (int trial = 0; trial < 400; ++trial) {
    std::string pattern;
    const std::size_t n = 1 + rng.below(3);
    for (std::size_t i = 0; i < n; ++i) pattern += atoms[rng.below(8)] + quant[i == 0 ? rng.below(2) : rng.below(4)];
    std::string text;
    const std::size_t len = rng.below(20);
    for (std::size_t i = 0; i < len; ++i) text.push_back("ab c"[rng.below(4)]);
    CHECK(find_spans(text, TextQuery{pattern, true}) == testkit::std_regex_spans(text, pattern));
    const std::string kw = std::string(1, "abAB"[rng.below(4)]) + (rng.below(2) ? "b" : "");
    CHECK(find_spans(text, TextQuery{kw, false}) == testkit::keyword_spans(text, kw));
  }
}

TEST_CASE("search over a table lists instances with spans") {
  const InstanceTable t = testkit::quarters_table();
  const auto hits = search_spans(t, TextQuery{"quarters", false});
  CHECK(hits.size() == 29u);
  CHECK(hits[27].instance == 27u);
  CHECK(hits[27].spans == std::vector<TextSpan>{{0, 8}});
}

TEST_CASE("instance json round trip") {
  const auto p = testkit::small_pipeline(3, 20, 5);
  const InstanceTable table = ingest(p.rows, p.model, p.abstraction);
  for (const auto& r : table.records()) CHECK(instance_from_json(json::parse(instance_to_json(r).dump())) == r);
  json bad = instance_to_json(table.at(0));
  bad["correct"] = !bad["correct"].get<bool>();
  CHECK_THROWS_AS(instance_from_json(bad), Error);
}
