#include "fixtures.hpp"
#include "gen.hpp"

#include "normlog/error.hpp"

#include <doctest.h>

using namespace normlog;

namespace {

const char* kSmall = R"({"agents":["a"],"norms":["i"],"root":"w","states":[
  {"id":"w","children":[{"to":"u","agents":["a"]},{"to":"v","agents":[]}]},
  {"id":"u","atoms":["p"],"V":[["i","a"]],"children":[{"to":"u2","agents":["a"]}]},
  {"id":"v"},{"id":"u2"}]})";

std::string with(std::string doc, const std::string& from, const std::string& to) {
  doc.replace(doc.find(from), from.size(), to);
  return doc;
}

} // namespace

TEST_CASE("loading a small model") {
  Model m = load_model(kSmall);
  CHECK(m.size() == 4);
  CHECK(m.name(m.root()) == "w");
  CHECK(m.depth(m.find("u2")) == 2);
  CHECK(m.height() == 2);
  CHECK(m.holds(m.find("u"), "p"));
  CHECK(m.marked(SpecialKind::Violation, "i", "a", m.find("u")));
  CHECK(m.label(m.find("u")) == std::set<std::string>{"a"});
  CHECK(m.label(m.find("v")).empty());
  CHECK(m.ancestor(m.find("u2"), 0) == m.root());
  CHECK(load_model(dump_model(m)).size() == 4);
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(load_model("{"), ModelError);
  CHECK_THROWS_AS(load_model(with(kSmall, R"("root":"w")", R"("root":"nope")")), ModelError);
  CHECK_THROWS_WITH_AS(load_model(with(kSmall, R"({"id":"v"})", R"({"id":"v","children":[{"to":"w","agents":[]}]})")),
                       doctest::Contains("cycle"), ModelError);
  CHECK_THROWS_WITH_AS(load_model(with(kSmall, R"({"id":"v"})", R"({"id":"v","children":[{"to":"u2","agents":[]}]})")),
                       doctest::Contains("multiple parents"), ModelError);
  CHECK_THROWS_AS(load_model(with(kSmall, R"({"id":"u2"})", R"({"id":"u"})")), ModelError);
  CHECK_THROWS_AS(load_model(with(kSmall, R"("agents":["a"]}]},)", R"("agents":["zed"]}]},)")), ModelError);
  CHECK_THROWS_AS(load_model(with(kSmall, R"("V":[["i","a"]])", R"("V":[["j","a"]])")), ModelError);
  CHECK_THROWS_AS(load_model(with(kSmall, R"({"id":"u2"})", R"({"id":"u2","colour":"red"})")), ModelError);
  CHECK_THROWS_AS(load_model(with(kSmall, R"({"id":"u2"}])", R"({"id":"u2"},{"id":"orphan"}])")), ModelError);
}

TEST_CASE("paths through a state") {
  Model m = fixture("fig1a");
  auto all = paths_through(m, m.root());
  CHECK(all.size() == leaves_below(m, m.root()).size());
  auto via_s6 = paths_through(m, m.find("s6"));
  CHECK(via_s6.size() == 2);
  for (const auto& p : via_s6) {
    CHECK(p[0] == m.root());
    CHECK(p[6] == m.find("s6"));
    CHECK(m.children(p.back()).empty());
  }
  auto cut = paths_through(m, m.find("s2"), 3);
  for (const auto& p : cut) CHECK(p.size() <= 4);
  CHECK(path_to(m, m.find("s6")).size() == 7);
}

TEST_CASE("restrict truncates and composes") {
  std::mt19937 rng(3);
  for (int n = 0; n < 200; ++n) {
    Model m = gen::random_model(rng);
    for (const auto& p : paths_through(m, m.root())) {
      std::size_t j = gen::pick(rng, p.size()), i = gen::pick(rng, j + 1);
      CHECK(restrict(p, j).size() == j + 1);
      CHECK(restrict(restrict(p, j), i) == restrict(p, i));
    }
  }
  Path p{{0}};
  CHECK_THROWS_AS(restrict(p, 1), ModelError);
}
