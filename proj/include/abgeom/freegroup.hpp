#pragma once

#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace abgeom {

// Raised when a letter index exceeds the rank, or two words of different
// rank are combined.
class RankError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class WordSyntaxError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One generator c_k or its inverse. Generators are 1-based.
struct Letter {
  int generator = 1;
  int sign = 1;  // +1 or -1

  Letter inverse() const { return {generator, -sign}; }
  bool cancels(const Letter& other) const {
    return generator == other.generator && sign == -other.sign;
  }
  // c1 < c1^-1 < c2 < c2^-1 < ...
  int order_key() const { return 2 * (generator - 1) + (sign < 0 ? 1 : 0); }

  friend bool operator==(const Letter&, const Letter&) = default;
  friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) {
    return a.order_key() <=> b.order_key();
  }
};

// Element of the free group F_n in freely reduced normal form.
class Word {
 public:
  explicit Word(int rank = 1);

  // Reduces the given letters; throws RankError on out-of-range generators.
  Word(int rank, std::span<const Letter> letters);
  Word(int rank, std::initializer_list<Letter> letters)
      : Word(rank, std::span<const Letter>(letters.begin(), letters.size())) {}

  static Word identity(int rank) { return Word(rank); }
  static Word generator(int rank, int k, int power = 1);

  int rank() const { return rank_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }

  friend bool operator==(const Word&, const Word&) = default;
  // Shortlex: length first, then letter order.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  int rank_;
  std::vector<Letter> letters_;
};

// Free reduction by a single left-to-right stack pass.
Word reduce(int rank, std::span<const Letter> letters);
Word concat(const Word& a, const Word& b);
Word invert(const Word& w);
Word power(const Word& w, int exponent);
std::vector<long> abelianize(const Word& w);

// Strips conjugating prefix/suffix pairs, then picks the lexicographically
// least rotation so that conjugate words share one key.
Word cyclic_reduce(const Word& w);
bool is_cyclically_reduced(const Word& w);

// "c1 c2^-1 c3"; the identity is spelled "e".
std::string to_string(const Word& w);
Word parse_word(int rank, std::string_view text);

inline Word operator*(const Word& a, const Word& b) { return concat(a, b); }

}  // namespace abgeom
