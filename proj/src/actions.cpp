#include "irslab/actions.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "irslab/parallel.hpp"

namespace irslab {

Homomorphism::Homomorphism(std::shared_ptr<const FiniteSpace> space, std::vector<Permutation> generators)
    : space_(std::move(space)), gens_(std::move(generators)) {
  if (!space_) throw std::invalid_argument("homomorphism without a space");
  if (gens_.empty()) throw std::invalid_argument("homomorphism needs rank >= 1");
  for (const auto& g : gens_) require_full_group(*space_, g);
}

bool Homomorphism::is_lean_aperiodic() const { return cycle_structure(gens_[0]).single_cycle; }

Homomorphism Homomorphism::with_generator(unsigned i, Permutation g) const {
  if (i >= gens_.size()) throw std::invalid_argument("generator index out of range");
  std::vector<Permutation> gens = gens_;
  gens[i] = std::move(g);
  return Homomorphism(space_, std::move(gens));
}

namespace {

void require_rank(const Homomorphism& alpha, const ReducedWord& w) {
  for (Letter l : w.letters()) {
    if (static_cast<unsigned>(l < 0 ? -l : l) > alpha.rank()) {
      throw std::invalid_argument("word uses a generator beyond the homomorphism rank");
    }
  }
}

// Images of `start` under every ball word, in ball index order.
void ball_images(const Homomorphism& alpha, const WordBall& ball, Atom start, std::vector<Atom>& images) {
  images.resize(ball.size());
  images[0] = start;
  for (std::size_t i = 1; i < ball.size(); ++i) images[i] = alpha.apply(ball.first_letter(i), images[ball.suffix(i)]);
}

}  // namespace

Atom evaluate(const Homomorphism& alpha, const ReducedWord& w, Atom x) {
  require_rank(alpha, w);
  const auto& letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) x = alpha.apply(*it, x);
  return x;
}

Permutation evaluate_permutation(const Homomorphism& alpha, const ReducedWord& w) {
  require_rank(alpha, w);
  std::vector<Atom> images(alpha.size());
  for (Atom x = 0; x < alpha.size(); ++x) images[x] = evaluate(alpha, w, x);
  return Permutation(std::move(images));
}

Rational hom_metric(const Homomorphism& alpha, const Homomorphism& beta) {
  if (alpha.size() != beta.size() || alpha.rank() != beta.rank()) {
    throw std::invalid_argument("hom_metric: homomorphisms differ in space size or rank");
  }
  Rational best(0);
  for (unsigned i = 0; i < alpha.rank(); ++i) best = std::max(best, uniform_metric(alpha.generator(i), beta.generator(i)));
  return best;
}

std::vector<Atom> orbit(const Homomorphism& alpha, Atom x) {
  std::vector<bool> seen(alpha.size(), false);
  std::vector<Atom> out{x};
  seen[x] = true;
  for (std::size_t head = 0; head < out.size(); ++head) {
    Atom v = out[head];
    for (unsigned i = 0; i < alpha.rank(); ++i) {
      for (Atom w : {alpha.generator(i)(v), alpha.generator(i).preimage(v)}) {
        if (!seen[w]) {
          seen[w] = true;
          out.push_back(w);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

OrbitPartition orbit_partition(const Homomorphism& alpha) {
  constexpr std::uint32_t unset = ~std::uint32_t{0};
  OrbitPartition part;
  part.orbit_of.assign(alpha.size(), unset);
  for (Atom x = 0; x < alpha.size(); ++x) {
    if (part.orbit_of[x] != unset) continue;
    auto members = orbit(alpha, x);
    const auto id = static_cast<std::uint32_t>(part.orbits.size());
    for (Atom y : members) part.orbit_of[y] = id;
    part.orbits.push_back(std::move(members));
  }
  return part;
}

std::map<std::size_t, Rational> index_distribution(const Homomorphism& alpha) {
  std::map<std::size_t, std::int64_t> atoms_by_size;
  for (const auto& o : orbit_partition(alpha).orbits) atoms_by_size[o.size()] += static_cast<std::int64_t>(o.size());
  std::map<std::size_t, Rational> out;
  for (auto [size, atoms] : atoms_by_size) out.emplace(size, alpha.space().measure(static_cast<std::size_t>(atoms)));
  return out;
}

StabilizerTrace::StabilizerTrace(unsigned radius, std::size_t word_count)
    : radius_(radius), word_count_(word_count), bits_((word_count + 63) / 64, 0) {}

std::size_t StabilizerTrace::count() const {
  std::size_t c = 0;
  for (auto b : bits_) c += static_cast<std::size_t>(std::popcount(b));
  return c;
}

std::vector<ReducedWord> StabilizerTrace::fixed_words(const WordBall& ball) const {
  if (ball.size() != word_count_) throw std::invalid_argument("trace and ball sizes differ");
  std::vector<ReducedWord> out;
  for (std::size_t i = 0; i < word_count_; ++i) {
    if (contains(i)) out.push_back(ball.word(i));
  }
  return out;
}

std::string StabilizerTrace::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  const std::size_t bytes = (word_count_ + 7) / 8;
  std::string out;
  out.reserve(2 * bytes);
  for (std::size_t b = 0; b < bytes; ++b) {
    auto byte = static_cast<unsigned>((bits_[b / 8] >> (8 * (b % 8))) & 0xFFU);
    out += digits[byte >> 4];
    out += digits[byte & 0xF];
  }
  return out;
}

StabilizerTrace stabilizer_trace(const Homomorphism& alpha, Atom x, const WordBall& ball) {
  if (ball.rank() != alpha.rank()) throw std::invalid_argument("ball rank differs from homomorphism rank");
  std::vector<Atom> images;
  ball_images(alpha, ball, x, images);
  StabilizerTrace t(ball.radius(), ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    if (images[i] == x) t.insert(i);
  }
  return t;
}

StabilizerTrace stabilizer_trace(const Homomorphism& alpha, Atom x, unsigned radius) {
  return stabilizer_trace(alpha, x, WordBall(alpha.rank(), radius));
}

std::vector<StabilizerTrace> all_traces(const Homomorphism& alpha, const WordBall& ball) {
  std::vector<StabilizerTrace> out(alpha.size());
  parallel::for_each_index(alpha.size(), [&](std::size_t x) { out[x] = stabilizer_trace(alpha, static_cast<Atom>(x), ball); });
  return out;
}

bool SchreierBall::contains(std::uint32_t v) const { return std::find(vertices.begin(), vertices.end(), v) != vertices.end(); }

SchreierBall schreier_ball(const Homomorphism& alpha, Atom x, unsigned radius) {
  SchreierBall b;
  b.rank = alpha.rank();
  b.radius = radius;
  b.root = x;
  std::unordered_map<Atom, unsigned> depth{{x, 0}};
  b.vertices.push_back(x);
  b.depth.push_back(0);
  for (std::size_t head = 0; head < b.vertices.size(); ++head) {
    if (b.depth[head] == radius) continue;
    for (std::size_t o = 0; o < 2 * b.rank; ++o) {
      Atom w = alpha.apply(letter_at(o), b.vertices[head]);
      if (depth.emplace(w, b.depth[head] + 1).second) {
        b.vertices.push_back(w);
        b.depth.push_back(b.depth[head] + 1);
      }
    }
  }
  for (Atom v : b.vertices) {
    for (std::size_t o = 0; o < 2 * b.rank; ++o) {
      Atom w = alpha.apply(letter_at(o), v);
      b.edges.push_back({v, letter_at(o), w, depth.contains(w)});
    }
  }
  b.code = stabilizer_trace(alpha, x, 2 * radius + 1);
  return b;
}

SchreierBall ball_from_code(unsigned rank, unsigned radius, const StabilizerTrace& code) {
  const WordBall big(rank, 2 * radius + 1);
  if (code.word_count() != big.size()) throw std::invalid_argument("code is not a radius 2R+1 trace");
  const std::size_t inner = ball_size(rank, radius);
  auto in_code = [&](const ReducedWord& w) {
    auto idx = big.index_of(w);
    return idx && code.contains(*idx);
  };

  // rep[i] = smallest index in the class of word i under g ~ g' iff g^-1 g' fixes the root.
  std::vector<std::uint32_t> rep(inner);
  for (std::size_t i = 0; i < inner; ++i) {
    rep[i] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 0; j < i; ++j) {
      if (rep[j] == j && in_code(big.word(j).inverse() * big.word(i))) {
        rep[i] = static_cast<std::uint32_t>(j);
        break;
      }
    }
  }

  SchreierBall b;
  b.rank = rank;
  b.radius = radius;
  b.root = 0;
  b.code = code;
  for (std::size_t i = 0; i < inner; ++i) {
    if (rep[i] != i) continue;
    b.vertices.push_back(static_cast<std::uint32_t>(i));
    b.depth.push_back(static_cast<unsigned>(big.word(i).length()));
  }
  for (std::uint32_t v : b.vertices) {
    const ReducedWord& g = big.word(v);
    for (std::size_t o = 0; o < 2 * rank; ++o) {
      Letter l = letter_at(o);
      ReducedWord step = ReducedWord::reduce(rank, std::vector<Letter>{l}) * g;
      SchreierEdge e{v, l, 0, false};
      for (std::uint32_t u : b.vertices) {
        if (in_code(big.word(u).inverse() * step)) {
          e.to = u;
          e.internal = true;
          break;
        }
      }
      b.edges.push_back(e);
    }
  }
  return b;
}

bool balls_isomorphic(const Homomorphism& alpha, Atom x, const Homomorphism& beta, Atom y, unsigned radius) {
  if (alpha.rank() != beta.rank()) throw std::invalid_argument("balls_isomorphic: ranks differ");
  const WordBall big(alpha.rank(), 2 * radius + 1);
  return stabilizer_trace(alpha, x, big) == stabilizer_trace(beta, y, big);
}

std::optional<std::map<std::uint32_t, std::uint32_t>> match_balls(const SchreierBall& a, const SchreierBall& b) {
  if (a.rank != b.rank || a.vertices.size() != b.vertices.size()) return std::nullopt;
  const std::size_t degree = 2 * a.rank;
  auto positions = [](const SchreierBall& ball) {
    std::unordered_map<std::uint32_t, std::size_t> pos;
    for (std::size_t i = 0; i < ball.vertices.size(); ++i) pos.emplace(ball.vertices[i], i);
    return pos;
  };
  const auto pos_a = positions(a);
  const auto pos_b = positions(b);

  std::map<std::uint32_t, std::uint32_t> forward{{a.root, b.root}};
  std::map<std::uint32_t, std::uint32_t> backward{{b.root, a.root}};
  std::deque<std::uint32_t> queue{a.root};
  while (!queue.empty()) {
    std::uint32_t u = queue.front();
    queue.pop_front();
    std::uint32_t v = forward.at(u);
    const std::size_t pu = pos_a.at(u);
    const std::size_t pv = pos_b.at(v);
    for (std::size_t o = 0; o < degree; ++o) {
      const SchreierEdge& ea = a.edges[pu * degree + o];
      const SchreierEdge& eb = b.edges[pv * degree + o];
      if (ea.label != eb.label || ea.internal != eb.internal) return std::nullopt;
      if (!ea.internal) continue;
      auto fa = forward.find(ea.to);
      auto fb = backward.find(eb.to);
      if (fa == forward.end() && fb == backward.end()) {
        forward.emplace(ea.to, eb.to);
        backward.emplace(eb.to, ea.to);
        queue.push_back(ea.to);
      } else if (fa == forward.end() || fb == backward.end() || fa->second != eb.to) {
        return std::nullopt;
      }
    }
  }
  if (forward.size() != a.vertices.size()) return std::nullopt;
  return forward;
}

EmpiricalIRS empirical_irs(const Homomorphism& alpha, unsigned radius) {
  const WordBall ball(alpha.rank(), radius);
  auto traces = all_traces(alpha, ball);
  std::map<std::string, std::pair<StabilizerTrace, std::int64_t>> counts;
  for (auto& t : traces) {
    auto [it, fresh] = counts.try_emplace(t.hex(), t, 0);
    it->second.second += 1;
  }
  EmpiricalIRS irs;
  irs.radius = radius;
  for (auto& [key, entry] : counts) {
    irs.weights.emplace_back(std::move(entry.first), alpha.space().measure(static_cast<std::size_t>(entry.second)));
  }
  return irs;
}

Rational invariance_defect(const Homomorphism& alpha, unsigned radius) {
  const WordBall ball(alpha.rank(), radius);
  const std::size_t n = alpha.size();
  auto plain = all_traces(alpha, ball);
  Rational worst(0);
  for (std::size_t o = 0; o < 2 * alpha.rank(); ++o) {
    const Letter s = letter_at(o);
    // Bit i of conjugated[x] records alpha(s^-1 w_i s) x == x.
    std::vector<StabilizerTrace> conjugated(n);
    parallel::for_each_index(n, [&](std::size_t xi) {
      const auto x = static_cast<Atom>(xi);
      std::vector<Atom> images;
      ball_images(alpha, ball, alpha.apply(s, x), images);
      StabilizerTrace t(radius, ball.size());
      for (std::size_t i = 0; i < ball.size(); ++i) {
        if (alpha.apply(-s, images[i]) == x) t.insert(i);
      }
      conjugated[xi] = std::move(t);
    });
    std::map<std::string, std::int64_t> diff;
    for (std::size_t x = 0; x < n; ++x) {
      diff[plain[x].hex()] += 1;
      diff[conjugated[x].hex()] -= 1;
    }
    std::int64_t total = 0;
    for (auto& [key, d] : diff) total += d < 0 ? -d : d;
    worst = std::max(worst, Rational(total, 2 * static_cast<std::int64_t>(n)));
  }
  return worst;
}

}  // namespace irslab
