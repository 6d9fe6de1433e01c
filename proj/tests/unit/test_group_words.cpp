#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "expanse/errors.hpp"
#include "expanse/group_words.hpp"

using namespace expanse;

namespace {

// Independent enumeration: all letter strings of length <= n, freely
// reduced by hand, collected as a set of letter vectors.
std::set<std::vector<std::pair<int, int>>> brute_force_free(int rank, int n) {
  std::set<std::vector<std::pair<int, int>>> out;
  std::vector<std::vector<std::pair<int, int>>> layer{{}};
  out.insert(std::vector<std::pair<int, int>>{});
  for (int len = 1; len <= n; ++len) {
    std::vector<std::vector<std::pair<int, int>>> next;
    for (const auto& w : layer) {
      for (int g = 0; g < rank; ++g) {
        for (int s : {1, -1}) {
          if (!w.empty() && w.front().first == g && w.front().second == -s) continue;
          auto v = w;
          v.insert(v.begin(), {g, s});
          next.push_back(v);
        }
      }
    }
    for (const auto& v : next) out.insert(v);
    layer = std::move(next);
  }
  return out;
}

std::size_t free_ball_formula(int r, int n) {
  if (r == 1) return static_cast<std::size_t>(2 * n + 1);
  std::size_t p = 1;
  for (int i = 0; i < n; ++i) p *= static_cast<std::size_t>(2 * r - 1);
  return 1 + static_cast<std::size_t>(2 * r) * (p - 1) / static_cast<std::size_t>(2 * r - 2);
}

}  // namespace

TEST_CASE("free reduction cancels adjacent inverse pairs") {
  const GroupSpec f2 = GroupSpec::free_group(2);
  CHECK(parse_word(f2, "a b b^-1 a^-1").is_identity());
  CHECK(parse_word(f2, "a b a^-1").length() == 3);
  CHECK(parse_word(f2, "a a b^-1 b a").to_string() == parse_word(f2, "a^3").to_string());
}

TEST_CASE("abelian normal form is the exponent vector") {
  const GroupSpec z2 = GroupSpec::free_abelian(2);
  const Word w = parse_word(z2, "b a b^-1 a");
  CHECK(w == parse_word(z2, "a^2"));
  CHECK(multiply(z2, parse_word(z2, "a b"), parse_word(z2, "b a")) == parse_word(z2, "a^2 b^2"));
  CHECK(w.length() == 2);
}

TEST_CASE("inverse and multiply") {
  const GroupSpec f2 = GroupSpec::free_group(2);
  const Word w = parse_word(f2, "a b^-1 a");
  CHECK(inverse(f2, w) == parse_word(f2, "a^-1 b a^-1"));
  CHECK(multiply(f2, w, inverse(f2, w)).is_identity());
}

TEST_CASE("to_string round-trips through parse_word") {
  const GroupSpec f3 = GroupSpec::free_group(3);
  const Word w = parse_word(f3, "a^2 c^-1 b a");
  CHECK(parse_word(f3, w.to_string()) == w);
  CHECK(Word{}.to_string() == "e");
}

TEST_CASE("malformed words throw") {
  const GroupSpec f2 = GroupSpec::free_group(2);
  CHECK_THROWS_AS(parse_word(f2, "c"), MalformedInput);
  CHECK_THROWS_AS(parse_word(f2, "a^"), MalformedInput);
  const Letter bad[] = {{5, 1}};
  CHECK_THROWS_AS(reduce(f2, bad), MalformedInput);
}

TEST_CASE("free balls match brute-force enumeration and the closed form") {
  for (int r = 1; r <= 3; ++r) {
    for (int n = 0; n <= 4; ++n) {
      const Ball b = ball(GroupSpec::free_group(r), n);
      const auto oracle = brute_force_free(r, n);
      CHECK(b.size() == oracle.size());
      CHECK(b.size() == free_ball_formula(r, n));
      CHECK(ball_size(GroupSpec::free_group(r), n) == oracle.size());
      std::set<std::vector<std::pair<int, int>>> got;
      for (const Word& w : b.elements) {
        std::vector<std::pair<int, int>> v;
        for (const Letter& l : w.letters()) v.emplace_back(l.gen, l.sign);
        got.insert(v);
      }
      CHECK(got == oracle);
    }
  }
}

TEST_CASE("rank-2 abelian balls have 2n^2 + 2n + 1 elements") {
  for (int n = 0; n <= 8; ++n) {
    const Ball b = ball(GroupSpec::free_abelian(2), n);
    CHECK(b.size() == static_cast<std::size_t>(2 * n * n + 2 * n + 1));
    std::set<Word> unique(b.elements.begin(), b.elements.end());
    CHECK(unique.size() == b.size());
  }
}

TEST_CASE("ball order is breadth first with valid parents") {
  const Ball b = ball(GroupSpec::free_group(2), 3);
  CHECK(b.elements.front().is_identity());
  CHECK(b.parent.front() == -1);
  for (std::size_t i = 1; i < b.size(); ++i) {
    CHECK(b.elements[i - 1].length() <= b.elements[i].length());
    const Word& parent = b.elements[static_cast<std::size_t>(b.parent[i])];
    CHECK(prepend(b.group, b.head[i], parent) == b.elements[i]);
  }
  CHECK(b.prefix_size(1) == 5);
  CHECK(b.frontier().size() == 36);
}
