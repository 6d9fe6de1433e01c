#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace expanse {

enum class GroupKind { free, free_abelian };

struct GroupSpec {
  GroupKind kind = GroupKind::free;
  int rank = 1;

  static GroupSpec free_group(int rank);
  static GroupSpec free_abelian(int rank);

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

// One generator or its inverse. Letters order by generator index, then
// positive before negative sign.
struct Letter {
  std::uint8_t gen = 0;
  std::int8_t sign = 1;

  Letter inverse() const { return {gen, static_cast<std::int8_t>(-sign)}; }

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter& a, const Letter& b) {
    if (auto c = a.gen <=> b.gen; c != 0) return c;
    return b.sign <=> a.sign;
  }
};

// A word in normal form. letters()[0] is the outermost letter: the word
// l0 l1 ... lk acts on a point as l0(l1(...lk(x))).
//
// Free groups: freely reduced. Free abelian groups: letters sorted by
// generator index with all letters of one generator sharing a sign, so the
// word spells out the exponent vector. In both cases length() = #g.
class Word {
 public:
  Word() = default;

  std::span<const Letter> letters() const { return letters_; }
  int length() const { return static_cast<int>(letters_.size()); }
  bool is_identity() const { return letters_.empty(); }
  const Letter& front() const { return letters_.front(); }

  // "e" for the identity, otherwise space separated runs such as "a² b⁻¹ a".
  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  friend Word reduce(const GroupSpec&, std::span<const Letter>);
  friend Word prepend(const GroupSpec&, Letter, const Word&);
  std::vector<Letter> letters_;
};

// Normal form of an arbitrary letter sequence. Throws MalformedInput if a
// generator index is out of range.
Word reduce(const GroupSpec& group, std::span<const Letter> raw);

Word inverse(const GroupSpec& group, const Word& w);

// lhs · rhs: rhs acts first.
Word multiply(const GroupSpec& group, const Word& lhs, const Word& rhs);

// True if prepending `head` to a word whose outermost letter is `first`
// yields a normal-form word one letter longer.
bool extends(GroupKind kind, Letter head, const Letter* first);

// Prepends a letter that satisfies extends(); unchecked otherwise.
Word prepend(const GroupSpec& group, Letter head, const Word& w);

// Letters in enumeration order: (0,+), (0,-), (1,+), ...
std::vector<Letter> alphabet(const GroupSpec& group);

// Parses "e", "a b^-1 a", "a^2 b" or the superscript form of to_string().
Word parse_word(const GroupSpec& group, std::string_view text);

// The word-metric ball K_n, enumerated breadth first. Every element except
// the identity records its parent (the element with the outermost letter
// removed) and that letter, so images can be built one generator at a time.
struct Ball {
  GroupSpec group;
  int radius = 0;
  std::vector<Word> elements;
  std::vector<std::int32_t> parent;  // -1 for the identity
  std::vector<Letter> head;          // outermost letter; unused for identity
  std::vector<std::size_t> level_begin;  // radius + 2 offsets into elements

  std::size_t size() const { return elements.size(); }
  // Number of elements of length <= n (n clamped to radius).
  std::size_t prefix_size(int n) const;
  std::span<const Word> frontier() const;
};

Ball ball(const GroupSpec& group, int n);
Ball extend_frontier(const Ball& b);

// |K_n| without enumerating.
std::size_t ball_size(const GroupSpec& group, int n);

}  // namespace expanse
