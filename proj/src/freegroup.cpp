#include "abgeom/freegroup.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace abgeom {

namespace {

void check_letter(int rank, const Letter& l) {
  if (l.generator < 1 || l.generator > rank) {
    throw RankError("generator c" + std::to_string(l.generator) +
                    " out of range for rank " + std::to_string(rank));
  }
  if (l.sign != 1 && l.sign != -1) {
    throw std::invalid_argument("letter sign must be +1 or -1");
  }
}

void check_same_rank(const Word& a, const Word& b) {
  if (a.rank() != b.rank()) {
    throw RankError("rank mismatch: " + std::to_string(a.rank()) + " vs " +
                    std::to_string(b.rank()));
  }
}

void push_reduced(std::vector<Letter>& stack, const Letter& l) {
  if (!stack.empty() && stack.back().cancels(l)) {
    stack.pop_back();
  } else {
    stack.push_back(l);
  }
}

}  // namespace

Word::Word(int rank) : rank_(rank) {
  if (rank < 0) throw RankError("rank must be non-negative");
}

Word::Word(int rank, std::span<const Letter> letters) : Word(rank) {
  letters_.reserve(letters.size());
  for (const auto& l : letters) {
    check_letter(rank, l);
    push_reduced(letters_, l);
  }
}

Word Word::generator(int rank, int k, int power) {
  std::vector<Letter> ls(static_cast<std::size_t>(std::abs(power)),
                         Letter{k, power < 0 ? -1 : 1});
  return Word(rank, ls);
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(
      a.letters_.begin(), a.letters_.end(), b.letters_.begin(), b.letters_.end());
}

Word reduce(int rank, std::span<const Letter> letters) { return Word(rank, letters); }

Word concat(const Word& a, const Word& b) {
  check_same_rank(a, b);
  std::vector<Letter> out = a.letters();
  for (const auto& l : b.letters()) push_reduced(out, l);
  return Word(a.rank(), out);
}

Word invert(const Word& w) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
    out.push_back(it->inverse());
  }
  return Word(w.rank(), out);
}

Word power(const Word& w, int exponent) {
  const Word base = exponent < 0 ? invert(w) : w;
  Word out(w.rank());
  for (int i = 0; i < std::abs(exponent); ++i) out = concat(out, base);
  return out;
}

std::vector<long> abelianize(const Word& w) {
  std::vector<long> counts(static_cast<std::size_t>(w.rank()), 0);
  for (const auto& l : w.letters()) counts[l.generator - 1] += l.sign;
  return counts;
}

bool is_cyclically_reduced(const Word& w) {
  return w.size() < 2 || !w.letters().front().cancels(w.letters().back());
}

Word cyclic_reduce(const Word& w) {
  const auto& ls = w.letters();
  std::size_t lo = 0;
  std::size_t hi = ls.size();
  while (hi - lo >= 2 && ls[lo].cancels(ls[hi - 1])) {
    ++lo;
    --hi;
  }
  std::vector<Letter> core(ls.begin() + lo, ls.begin() + hi);
  if (core.empty()) return Word(w.rank());

  std::vector<Letter> best = core;
  std::vector<Letter> rotated = core;
  for (std::size_t r = 1; r < core.size(); ++r) {
    std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
    if (std::lexicographical_compare(rotated.begin(), rotated.end(), best.begin(),
                                     best.end())) {
      best = rotated;
    }
  }
  return Word(w.rank(), best);
}

std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += 'c';
    out += std::to_string(w[i].generator);
    if (w[i].sign < 0) out += "^-1";
  }
  return out;
}

Word parse_word(int rank, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<Letter> letters;
  std::string tok;
  while (in >> tok) {
    if (tok == "e") continue;
    auto fail = [&] { throw WordSyntaxError("bad word token '" + tok + "'"); };
    if (tok.size() < 2 || tok[0] != 'c') fail();
    int sign = 1;
    std::string_view digits(tok);
    digits.remove_prefix(1);
    if (const auto caret = digits.find('^'); caret != std::string_view::npos) {
      if (digits.substr(caret) != "^-1") fail();
      sign = -1;
      digits = digits.substr(0, caret);
    }
    int k = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (digits.empty() || digits[0] < '0' || digits[0] > '9') fail();
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) fail();
    letters.push_back({k, sign});
  }
  return Word(rank, letters);
}

}  // namespace abgeom
