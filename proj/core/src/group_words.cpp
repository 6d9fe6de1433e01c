#include "expanse/group_words.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <string>

#include "expanse/errors.hpp"

namespace expanse {

namespace {

constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

std::size_t sat_add(std::size_t a, std::size_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

std::string generator_name(int gen) {
  if (gen < 26) return std::string(1, static_cast<char>('a' + gen));
  return "g" + std::to_string(gen);
}

std::string superscript(int exponent) {
  static const char* const kDigits[] = {"⁰", "¹", "²", "³", "⁴",
                                        "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string out;
  if (exponent < 0) {
    out = "⁻";
    exponent = -exponent;
  }
  std::string digits = std::to_string(exponent);
  for (char c : digits) out += kDigits[c - '0'];
  return out;
}

void check_group(const GroupSpec& group) {
  if (group.rank < 1 || group.rank > 255) {
    throw MalformedInput("group rank must be in 1..255, got " +
                         std::to_string(group.rank));
  }
}

}  // namespace

GroupSpec GroupSpec::free_group(int rank) {
  GroupSpec g{GroupKind::free, rank};
  check_group(g);
  return g;
}

GroupSpec GroupSpec::free_abelian(int rank) {
  GroupSpec g{GroupKind::free_abelian, rank};
  check_group(g);
  return g;
}

std::string Word::to_string() const {
  if (letters_.empty()) return "e";
  std::string out;
  std::size_t i = 0;
  while (i < letters_.size()) {
    std::size_t j = i;
    while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
    if (!out.empty()) out += ' ';
    out += generator_name(letters_[i].gen);
    const int exponent = static_cast<int>(j - i) * letters_[i].sign;
    if (exponent != 1) out += superscript(exponent);
    i = j;
  }
  return out;
}

Word reduce(const GroupSpec& group, std::span<const Letter> raw) {
  check_group(group);
  for (const Letter& l : raw) {
    if (l.gen >= group.rank || (l.sign != 1 && l.sign != -1)) {
      throw MalformedInput("letter references generator " +
                           std::to_string(l.gen) + " in a rank " +
                           std::to_string(group.rank) + " group");
    }
  }
  Word w;
  if (group.kind == GroupKind::free) {
    for (const Letter& l : raw) {
      if (!w.letters_.empty() && w.letters_.back() == l.inverse()) {
        w.letters_.pop_back();
      } else {
        w.letters_.push_back(l);
      }
    }
    return w;
  }
  std::vector<long long> exponents(static_cast<std::size_t>(group.rank), 0);
  for (const Letter& l : raw) exponents[l.gen] += l.sign;
  for (int g = 0; g < group.rank; ++g) {
    const long long e = exponents[static_cast<std::size_t>(g)];
    const Letter l{static_cast<std::uint8_t>(g),
                   static_cast<std::int8_t>(e < 0 ? -1 : 1)};
    for (long long k = 0; k < (e < 0 ? -e : e); ++k) w.letters_.push_back(l);
  }
  return w;
}

Word inverse(const GroupSpec& group, const Word& w) {
  std::vector<Letter> raw;
  raw.reserve(w.letters().size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
    raw.push_back(it->inverse());
  }
  return reduce(group, raw);
}

Word multiply(const GroupSpec& group, const Word& lhs, const Word& rhs) {
  std::vector<Letter> raw(lhs.letters().begin(), lhs.letters().end());
  raw.insert(raw.end(), rhs.letters().begin(), rhs.letters().end());
  return reduce(group, raw);
}

bool extends(GroupKind kind, Letter head, const Letter* first) {
  if (first == nullptr) return true;
  if (kind == GroupKind::free) return head != first->inverse();
  return head.gen < first->gen ||
         (head.gen == first->gen && head.sign == first->sign);
}

Word prepend(const GroupSpec&, Letter head, const Word& w) {
  Word out;
  out.letters_.reserve(w.letters_.size() + 1);
  out.letters_.push_back(head);
  out.letters_.insert(out.letters_.end(), w.letters_.begin(), w.letters_.end());
  return out;
}

std::vector<Letter> alphabet(const GroupSpec& group) {
  std::vector<Letter> out;
  for (int g = 0; g < group.rank; ++g) {
    out.push_back({static_cast<std::uint8_t>(g), 1});
    out.push_back({static_cast<std::uint8_t>(g), -1});
  }
  return out;
}

Word parse_word(const GroupSpec& group, std::string_view text) {
  std::vector<Letter> raw;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw MalformedInput("cannot parse word '" + std::string(text) +
                         "': " + why);
  };
  auto starts = [&](std::string_view tok) {
    return text.substr(i, tok.size()) == tok;
  };
  static const std::string_view kSup[] = {"⁰", "¹", "²", "³", "⁴",
                                          "⁵", "⁶", "⁷", "⁸", "⁹"};
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*') {
      ++i;
      continue;
    }
    const char c = text[i];
    int gen = -1;
    if (c == 'e' && group.rank < 5 && (i + 1 == text.size() ||
                     std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      ++i;
      continue;
    }
    if (c >= 'a' && c <= 'z') {
      gen = c - 'a';
      ++i;
    } else {
      fail("unexpected character");
    }
    long long exponent = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      bool neg = false;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
      }
      if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
        fail("exponent expected");
      }
      long long v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + (text[i] - '0');
        if (v > 1000000) fail("exponent too large");
        ++i;
      }
      exponent = neg ? -v : v;
    } else if (starts("⁻") || starts("⁰") || starts("¹") || starts("²") ||
               starts("³") || starts("⁴") || starts("⁵") || starts("⁶") ||
               starts("⁷") || starts("⁸") || starts("⁹")) {
      bool neg = false;
      if (starts("⁻")) {
        neg = true;
        i += std::string_view("⁻").size();
      }
      long long v = 0;
      bool any = false;
      for (;;) {
        int digit = -1;
        for (int d = 0; d < 10; ++d) {
          if (starts(kSup[d])) {
            digit = d;
            break;
          }
        }
        if (digit < 0) break;
        any = true;
        v = v * 10 + digit;
        if (v > 1000000) fail("exponent too large");
        i += kSup[digit].size();
      }
      if (!any) v = 1;
      exponent = neg ? -v : v;
    }
    if (gen >= group.rank) fail("generator out of range");
    const Letter l{static_cast<std::uint8_t>(gen),
                   static_cast<std::int8_t>(exponent < 0 ? -1 : 1)};
    for (long long k = 0; k < (exponent < 0 ? -exponent : exponent); ++k) {
      raw.push_back(l);
    }
  }
  return reduce(group, raw);
}

std::size_t Ball::prefix_size(int n) const {
  if (n < 0) return 0;
  if (n >= radius) return elements.size();
  return level_begin[static_cast<std::size_t>(n) + 1];
}

std::span<const Word> Ball::frontier() const {
  const std::size_t begin = level_begin[static_cast<std::size_t>(radius)];
  return std::span<const Word>(elements).subspan(begin);
}

namespace {

void grow(Ball& b) {
  const std::vector<Letter> letters = alphabet(b.group);
  const std::size_t begin = b.level_begin[static_cast<std::size_t>(b.radius)];
  const std::size_t end = b.elements.size();
  for (std::size_t w = begin; w < end; ++w) {
    const Letter* first =
        b.elements[w].is_identity() ? nullptr : &b.elements[w].front();
    const Letter first_copy = first ? *first : Letter{};
    for (const Letter& l : letters) {
      if (!extends(b.group.kind, l, first ? &first_copy : nullptr)) continue;
      Word child = prepend(b.group, l, b.elements[w]);
      b.elements.push_back(std::move(child));
      b.parent.push_back(static_cast<std::int32_t>(w));
      b.head.push_back(l);
    }
  }
  b.radius += 1;
  b.level_begin.push_back(b.elements.size());
}

}  // namespace

Ball extend_frontier(const Ball& b) {
  Ball out = b;
  grow(out);
  return out;
}

Ball ball(const GroupSpec& group, int n) {
  check_group(group);
  if (n < 0) throw ParameterError("ball radius must be non-negative");
  Ball b;
  b.group = group;
  b.radius = 0;
  b.elements.emplace_back();
  b.parent.push_back(-1);
  b.head.push_back({});
  b.level_begin = {0, 1};
  const std::size_t expected = ball_size(group, n);
  if (expected != kSaturated) b.elements.reserve(expected);
  for (int r = 0; r < n; ++r) grow(b);
  return b;
}

std::size_t ball_size(const GroupSpec& group, int n) {
  if (n < 0) return 0;
  const auto r = static_cast<std::size_t>(group.rank);
  if (group.kind == GroupKind::free) {
    std::size_t total = 1;
    std::size_t level = 2 * r;
    for (int k = 1; k <= n; ++k) {
      total = sat_add(total, level);
      level = sat_mul(level, 2 * r - 1);
    }
    return total;
  }
  // Lattice points with L1 norm <= n: sum_k 2^k C(r,k) C(n,k).
  std::size_t total = 0;
  const auto nn = static_cast<std::size_t>(n);
  for (std::size_t k = 0; k <= std::min(r, nn); ++k) {
    std::size_t binom_r = 1, binom_n = 1, pow2 = 1;
    for (std::size_t j = 0; j < k; ++j) {
      binom_r = sat_mul(binom_r, r - j) / (j + 1);
      binom_n = sat_mul(binom_n, nn - j) / (j + 1);
      pow2 = sat_mul(pow2, 2);
    }
    total = sat_add(total, sat_mul(pow2, sat_mul(binom_r, binom_n)));
  }
  return total;
}

}  // namespace expanse
