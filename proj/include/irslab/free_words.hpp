#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace irslab {

/// Signed generator index: +i is s_i, -i is s_i^-1, 1 <= i <= rank.
using Letter = int;

/// Position of a letter in the canonical order s1, s1^-1, s2, s2^-1, ...
inline std::size_t letter_order(Letter l) { return 2 * static_cast<std::size_t>((l < 0 ? -l : l) - 1) + (l < 0 ? 1 : 0); }
inline Letter letter_at(std::size_t order) {
  Letter g = static_cast<Letter>(order / 2) + 1;
  return order % 2 == 0 ? g : -g;
}

/// A freely reduced word in the free group of the given rank.
///
/// Words act on the left: for w = l_1 l_2 ... l_k the action of w applies
/// l_k first. Ordering is length-lexicographic over letter_order.
class ReducedWord {
 public:
  ReducedWord() = default;
  explicit ReducedWord(unsigned rank) : rank_(rank) {}

  /// Free reduction of an arbitrary letter sequence. Throws
  /// std::invalid_argument on letter 0 or |letter| > rank.
  static ReducedWord reduce(unsigned rank, std::span<const Letter> letters);

  /// Parses the text form "s1 s2^-1 s1"; "e" or "" is the empty word.
  /// Integer exponents "s2^3" are accepted and expanded.
  static ReducedWord parse(unsigned rank, std::string_view text);

  std::string str() const;

  unsigned rank() const { return rank_; }
  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  ReducedWord inverse() const;
  friend ReducedWord operator*(const ReducedWord& a, const ReducedWord& b);

  bool is_cyclically_reduced() const;
  /// True for s1^k, including the empty word.
  bool is_power_of_first_generator() const;

  friend bool operator==(const ReducedWord& a, const ReducedWord& b) { return a.letters_ == b.letters_; }
  friend std::strong_ordering operator<=>(const ReducedWord& a, const ReducedWord& b);

 private:
  unsigned rank_ = 0;
  std::vector<Letter> letters_;
};

struct CyclicReduction {
  ReducedWord conjugator;
  ReducedWord core;
};

/// w = conjugator * core * conjugator^-1 with core cyclically reduced.
CyclicReduction cyclic_reduce(const ReducedWord& w);

/// 1 + sum_{k=1..R} 2r (2r-1)^(k-1).
std::uint64_t ball_size(unsigned rank, unsigned radius);

/// All reduced words of length <= radius in length-lex order.
std::vector<ReducedWord> ball(unsigned rank, unsigned radius);

/// Indexed enumeration of a word ball with evaluation tables.
///
/// For every non-empty word at index i, first_letter(i) is its leftmost
/// letter and suffix(i) the index of the word with that letter removed, so
/// images under an action can be filled in index order:
///   image[i] = act(first_letter(i), image[suffix(i)]).
class WordBall {
 public:
  WordBall(unsigned rank, unsigned radius);

  unsigned rank() const { return rank_; }
  unsigned radius() const { return radius_; }
  std::size_t size() const { return words_.size(); }
  const ReducedWord& word(std::size_t i) const { return words_[i]; }
  const std::vector<ReducedWord>& words() const { return words_; }
  Letter first_letter(std::size_t i) const { return first_[i]; }
  std::size_t suffix(std::size_t i) const { return suffix_[i]; }
  std::optional<std::size_t> index_of(const ReducedWord& w) const;

 private:
  struct LettersHash {
    std::size_t operator()(const std::vector<Letter>& v) const;
  };

  unsigned rank_;
  unsigned radius_;
  std::vector<ReducedWord> words_;
  std::vector<Letter> first_;
  std::vector<std::size_t> suffix_;
  std::unordered_map<std::vector<Letter>, std::size_t, LettersHash> index_;
};

}  // namespace irslab
