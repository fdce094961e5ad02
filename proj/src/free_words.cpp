#include "irslab/free_words.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace irslab {

ReducedWord ReducedWord::reduce(unsigned rank, std::span<const Letter> letters) {
  ReducedWord w(rank);
  for (Letter l : letters) {
    if (l == 0 || static_cast<unsigned>(l < 0 ? -l : l) > rank) {
      throw std::invalid_argument("letter " + std::to_string(l) + " out of range for rank " + std::to_string(rank));
    }
    if (!w.letters_.empty() && w.letters_.back() == -l) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(l);
    }
  }
  return w;
}

ReducedWord ReducedWord::parse(unsigned rank, std::string_view text) {
  std::vector<Letter> letters;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token == "e") continue;
    if (token.size() < 2 || token[0] != 's') throw std::invalid_argument("malformed word token '" + token + "'");
    auto caret = token.find('^');
    std::string_view gen_part = std::string_view(token).substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
    int gen = 0;
    auto [p, ec] = std::from_chars(gen_part.data(), gen_part.data() + gen_part.size(), gen);
    if (ec != std::errc{} || p != gen_part.data() + gen_part.size() || gen <= 0) {
      throw std::invalid_argument("malformed generator in '" + token + "'");
    }
    long exponent = 1;
    if (caret != std::string::npos) {
      std::string_view exp_part = std::string_view(token).substr(caret + 1);
      auto [q, ec2] = std::from_chars(exp_part.data(), exp_part.data() + exp_part.size(), exponent);
      if (ec2 != std::errc{} || q != exp_part.data() + exp_part.size()) {
        throw std::invalid_argument("malformed exponent in '" + token + "'");
      }
    }
    Letter l = exponent < 0 ? -gen : gen;
    for (long k = 0; k < (exponent < 0 ? -exponent : exponent); ++k) letters.push_back(l);
  }
  return reduce(rank, letters);
}

std::string ReducedWord::str() const {
  if (letters_.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i > 0) out += ' ';
    Letter l = letters_[i];
    out += 's' + std::to_string(l < 0 ? -l : l);
    if (l < 0) out += "^-1";
  }
  return out;
}

ReducedWord ReducedWord::inverse() const {
  ReducedWord w(rank_);
  w.letters_.assign(letters_.rbegin(), letters_.rend());
  for (Letter& l : w.letters_) l = -l;
  return w;
}

ReducedWord operator*(const ReducedWord& a, const ReducedWord& b) {
  std::vector<Letter> joined = a.letters_;
  joined.insert(joined.end(), b.letters_.begin(), b.letters_.end());
  return ReducedWord::reduce(std::max(a.rank_, b.rank_), joined);
}

bool ReducedWord::is_cyclically_reduced() const {
  return letters_.size() < 2 || letters_.front() != -letters_.back();
}

bool ReducedWord::is_power_of_first_generator() const {
  return std::all_of(letters_.begin(), letters_.end(), [](Letter l) { return l == 1 || l == -1; });
}

std::strong_ordering operator<=>(const ReducedWord& a, const ReducedWord& b) {
  if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.letters_.size(); ++i) {
    if (auto c = letter_order(a.letters_[i]) <=> letter_order(b.letters_[i]); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

CyclicReduction cyclic_reduce(const ReducedWord& w) {
  const auto& l = w.letters();
  std::size_t lo = 0;
  std::size_t hi = l.size();
  while (hi - lo >= 2 && l[lo] == -l[hi - 1]) {
    ++lo;
    --hi;
  }
  std::vector<Letter> conj(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(lo));
  std::vector<Letter> core(l.begin() + static_cast<std::ptrdiff_t>(lo), l.begin() + static_cast<std::ptrdiff_t>(hi));
  return {ReducedWord::reduce(w.rank(), conj), ReducedWord::reduce(w.rank(), core)};
}

std::uint64_t ball_size(unsigned rank, unsigned radius) {
  std::uint64_t total = 1;
  std::uint64_t sphere = 2ULL * rank;
  for (unsigned k = 1; k <= radius; ++k) {
    total += sphere;
    sphere *= 2ULL * rank - 1;
  }
  return total;
}

std::vector<ReducedWord> ball(unsigned rank, unsigned radius) { return WordBall(rank, radius).words(); }

std::size_t WordBall::LettersHash::operator()(const std::vector<Letter>& v) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (Letter l : v) {
    h ^= static_cast<std::size_t>(l + 1024);
    h *= 0x100000001b3ULL;
  }
  return h;
}

WordBall::WordBall(unsigned rank, unsigned radius) : rank_(rank), radius_(radius) {
  if (rank == 0) throw std::invalid_argument("word ball needs rank >= 1");
  words_.reserve(ball_size(rank, radius));
  words_.emplace_back(rank);
  first_.push_back(0);
  suffix_.push_back(0);
  // Extending prefixes in order by letters in order yields length-lex order.
  std::size_t level_begin = 0;
  std::size_t level_end = 1;
  for (unsigned len = 1; len <= radius; ++len) {
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (std::size_t o = 0; o < 2 * rank; ++o) {
        Letter l = letter_at(o);
        const auto& prefix = words_[i].letters();
        if (!prefix.empty() && prefix.back() == -l) continue;
        std::vector<Letter> letters = prefix;
        letters.push_back(l);
        words_.push_back(ReducedWord::reduce(rank, letters));
      }
    }
    level_begin = level_end;
    level_end = words_.size();
  }
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i].letters(), i);
  for (std::size_t i = 1; i < words_.size(); ++i) {
    const auto& letters = words_[i].letters();
    first_.push_back(letters.front());
    std::vector<Letter> rest(letters.begin() + 1, letters.end());
    suffix_.push_back(index_.at(rest));
  }
}

std::optional<std::size_t> WordBall::index_of(const ReducedWord& w) const {
  auto it = index_.find(w.letters());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace irslab
