#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geolog/errors.hpp"

namespace geolog {

// Index of an element within one FiniteFrame. Indices are only meaningful
// relative to the frame that produced them.
using Elem = int;

struct FrameBuildOptions {
  // Distributivity is enumerated exhaustively over (element, subset) pairs up
  // to this many elements. Larger frames get every (element, pair) triple
  // plus seeded random subsets; for finite lattices pairwise distributivity
  // already implies the full law, the sampling is belt and braces.
  int exhaustive_law_bound = 12;
  int random_law_samples = 10000;
  std::uint64_t law_seed = 0;
};

// A finite complete lattice whose binary meet distributes over arbitrary
// joins. Validation happens once at construction: order closure,
// antisymmetry, existence of all binary meets/joins, distributivity.
// Instances are immutable; meet/join are table lookups.
class FiniteFrame {
 public:
  static FiniteFrame build(const std::vector<std::string>& elements,
                           const std::vector<std::pair<std::string, std::string>>& leq_pairs,
                           const FrameBuildOptions& opts = {});

  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<std::string>& element_ids() const { return ids_; }

  const std::string& id_of(Elem e) const {
    check_elem(e);
    return ids_[static_cast<std::size_t>(e)];
  }

  Elem index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) fail(ErrorKind::UnknownElement, "no element '" + id + "' in this frame");
    return it->second;
  }

  bool contains(const std::string& id) const { return index_.count(id) != 0; }

  bool leq(Elem a, Elem b) const {
    check_elem(a);
    check_elem(b);
    return leq_[static_cast<std::size_t>(a) * ids_.size() + static_cast<std::size_t>(b)] != 0;
  }

  Elem top() const { return top_; }
  Elem bot() const { return bot_; }

  Elem meet(Elem a, Elem b) const {
    check_elem(a);
    check_elem(b);
    return meet_[static_cast<std::size_t>(a) * ids_.size() + static_cast<std::size_t>(b)];
  }

  Elem join(Elem a, Elem b) const {
    check_elem(a);
    check_elem(b);
    return join_[static_cast<std::size_t>(a) * ids_.size() + static_cast<std::size_t>(b)];
  }

  // Meet over a finite family; the empty family gives top.
  Elem meet_all(const std::vector<Elem>& xs) const {
    Elem acc = top_;
    for (Elem x : xs) acc = meet(acc, x);
    return acc;
  }

  // Join over a finite family; the empty family gives bot.
  Elem join_all(const std::vector<Elem>& xs) const {
    Elem acc = bot_;
    for (Elem x : xs) acc = join(acc, x);
    return acc;
  }

  bool same_elements(const FiniteFrame& other) const {
    return ids_ == other.ids_ && leq_ == other.leq_;
  }

 private:
  void check_elem(Elem e) const {
    if (e < 0 || e >= size())
      fail(ErrorKind::UnknownElement, "element index " + std::to_string(e) + " out of range");
  }

  void verify_law(const FrameBuildOptions& opts) const;

  std::vector<std::string> ids_;
  std::unordered_map<std::string, Elem> index_;
  std::vector<std::uint8_t> leq_;  // n*n, row-major
  std::vector<Elem> meet_;         // n*n
  std::vector<Elem> join_;         // n*n
  Elem top_ = 0;
  Elem bot_ = 0;
};

namespace detail {

inline std::string id_list(const FiniteFrame& f, const std::vector<Elem>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += f.id_of(xs[i]);
  }
  out += "}";
  return out;
}

}  // namespace detail

inline FiniteFrame FiniteFrame::build(const std::vector<std::string>& elements,
                                      const std::vector<std::pair<std::string, std::string>>& leq_pairs,
                                      const FrameBuildOptions& opts) {
  FiniteFrame f;
  if (elements.empty()) fail(ErrorKind::BadInput, "a frame needs at least one element");
  f.ids_ = elements;
  for (int i = 0; i < static_cast<int>(f.ids_.size()); ++i) {
    if (!f.index_.emplace(f.ids_[static_cast<std::size_t>(i)], i).second)
      fail(ErrorKind::BadInput, "duplicate element id '" + f.ids_[static_cast<std::size_t>(i)] + "'");
  }
  const std::size_t n = f.ids_.size();
  f.leq_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) f.leq_[i * n + i] = 1;
  for (const auto& [lo, hi] : leq_pairs) {
    f.leq_[static_cast<std::size_t>(f.index_of(lo)) * n + static_cast<std::size_t>(f.index_of(hi))] = 1;
  }

  // Reflexive-transitive closure of the declared relation.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (f.leq_[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (f.leq_[k * n + j]) f.leq_[i * n + j] = 1;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (f.leq_[i * n + j] && f.leq_[j * n + i])
        fail(ErrorKind::NotAPoset,
             "elements '" + f.ids_[i] + "' and '" + f.ids_[j] + "' are order-equivalent after closure");

  // Greatest lower / least upper bounds for every pair, by direct scan.
  f.meet_.assign(n * n, 0);
  f.join_.assign(n * n, 0);
  std::vector<Elem> bounds;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      bounds.clear();
      for (std::size_t c = 0; c < n; ++c)
        if (f.leq_[c * n + a] && f.leq_[c * n + b]) bounds.push_back(static_cast<Elem>(c));
      Elem glb = -1;
      for (Elem c : bounds) {
        bool greatest = true;
        for (Elem d : bounds)
          if (!f.leq_[static_cast<std::size_t>(d) * n + static_cast<std::size_t>(c)]) { greatest = false; break; }
        if (greatest) { glb = c; break; }
      }
      if (glb < 0)
        fail(ErrorKind::NotALattice,
             "pair ('" + f.ids_[a] + "','" + f.ids_[b] + "') has no greatest lower bound");
      bounds.clear();
      for (std::size_t c = 0; c < n; ++c)
        if (f.leq_[a * n + c] && f.leq_[b * n + c]) bounds.push_back(static_cast<Elem>(c));
      Elem lub = -1;
      for (Elem c : bounds) {
        bool least = true;
        for (Elem d : bounds)
          if (!f.leq_[static_cast<std::size_t>(c) * n + static_cast<std::size_t>(d)]) { least = false; break; }
        if (least) { lub = c; break; }
      }
      if (lub < 0)
        fail(ErrorKind::NotALattice,
             "pair ('" + f.ids_[a] + "','" + f.ids_[b] + "') has no least upper bound");
      f.meet_[a * n + b] = glb;
      f.meet_[b * n + a] = glb;
      f.join_[a * n + b] = lub;
      f.join_[b * n + a] = lub;
    }
  }

  Elem t = 0, bo = 0;
  for (std::size_t i = 1; i < n; ++i) {
    t = f.join_[static_cast<std::size_t>(t) * n + i];
    bo = f.meet_[static_cast<std::size_t>(bo) * n + i];
  }
  f.top_ = t;
  f.bot_ = bo;

  f.verify_law(opts);
  return f;
}

inline void FiniteFrame::verify_law(const FrameBuildOptions& opts) const {
  const int n = size();
  auto check = [&](Elem x, const std::vector<Elem>& ys) {
    Elem lhs = meet(x, join_all(ys));
    Elem rhs = bot_;
    for (Elem y : ys) rhs = join(rhs, meet(x, y));
    if (lhs != rhs)
      fail(ErrorKind::NotAFrame,
           "distributivity fails at x=" + ids_[static_cast<std::size_t>(x)] + " Y=" + detail::id_list(*this, ys) +
               ": meet(x, join Y)=" + ids_[static_cast<std::size_t>(lhs)] +
               " but join of meets=" + ids_[static_cast<std::size_t>(rhs)]);
  };

  if (n <= opts.exhaustive_law_bound) {
    std::vector<Elem> ys;
    for (Elem x = 0; x < n; ++x) {
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        ys.clear();
        for (int i = 0; i < n; ++i)
          if (mask & (1u << i)) ys.push_back(i);
        check(x, ys);
      }
    }
    return;
  }

  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      for (Elem z = y + 1; z < n; ++z) check(x, {y, z});

  std::mt19937_64 rng(opts.law_seed);
  std::vector<Elem> ys;
  for (int s = 0; s < opts.random_law_samples; ++s) {
    Elem x = static_cast<Elem>(rng() % static_cast<std::uint64_t>(n));
    ys.clear();
    for (int i = 0; i < n; ++i)
      if (rng() & 1) ys.push_back(i);
    check(x, ys);
  }
}

inline constexpr int kStandardFrameSizeCap = 64;

// Linear order 0 < 1 < ... < n-1.
inline FiniteFrame chain_frame(int n, int size_cap = kStandardFrameSizeCap) {
  if (n < 1) fail(ErrorKind::BadInput, "a chain needs at least one element");
  if (n > size_cap)
    fail(ErrorKind::SizeLimit, "chain(" + std::to_string(n) + ") exceeds the cap of " + std::to_string(size_cap));
  std::vector<std::string> ids;
  std::vector<std::pair<std::string, std::string>> pairs;
  ids.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(i) + 1]);
  return FiniteFrame::build(ids, pairs);
}

// All subsets of {1..atoms} ordered by inclusion; ids like "{1,3}".
inline FiniteFrame powerset_frame(int atoms, int size_cap = kStandardFrameSizeCap) {
  if (atoms < 0) fail(ErrorKind::BadInput, "atom count must be nonnegative");
  if (atoms > 30 || (1 << atoms) > size_cap)
    fail(ErrorKind::SizeLimit,
         "powerset(" + std::to_string(atoms) + ") exceeds the cap of " + std::to_string(size_cap));
  const std::uint32_t count = 1u << atoms;
  auto set_id = [&](std::uint32_t mask) {
    std::string id = "{";
    bool first = true;
    for (int i = 0; i < atoms; ++i) {
      if (mask & (1u << i)) {
        if (!first) id += ",";
        id += std::to_string(i + 1);
        first = false;
      }
    }
    id += "}";
    return id;
  };
  std::vector<std::string> ids;
  for (std::uint32_t m = 0; m < count; ++m) ids.push_back(set_id(m));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::uint32_t a = 0; a < count; ++a)
    for (std::uint32_t b = 0; b < count; ++b)
      if (a != b && (a & ~b) == 0) pairs.emplace_back(ids[a], ids[b]);
  return FiniteFrame::build(ids, pairs);
}

// Componentwise order on pairs; ids like "(a,b)".
inline FiniteFrame product_frame(const FiniteFrame& lhs, const FiniteFrame& rhs,
                                 int size_cap = kStandardFrameSizeCap) {
  if (lhs.size() * rhs.size() > size_cap)
    fail(ErrorKind::SizeLimit, "product of " + std::to_string(lhs.size()) + "x" + std::to_string(rhs.size()) +
                                   " elements exceeds the cap of " + std::to_string(size_cap));
  std::vector<std::string> ids;
  for (int a = 0; a < lhs.size(); ++a)
    for (int b = 0; b < rhs.size(); ++b) ids.push_back("(" + lhs.id_of(a) + "," + rhs.id_of(b) + ")");
  std::vector<std::pair<std::string, std::string>> pairs;
  const int m = rhs.size();
  for (int a1 = 0; a1 < lhs.size(); ++a1)
    for (int b1 = 0; b1 < m; ++b1)
      for (int a2 = 0; a2 < lhs.size(); ++a2)
        for (int b2 = 0; b2 < m; ++b2)
          if (lhs.leq(a1, a2) && rhs.leq(b1, b2) && !(a1 == a2 && b1 == b2))
            pairs.emplace_back(ids[static_cast<std::size_t>(a1) * static_cast<std::size_t>(m) + static_cast<std::size_t>(b1)],
                               ids[static_cast<std::size_t>(a2) * static_cast<std::size_t>(m) + static_cast<std::size_t>(b2)]);
  return FiniteFrame::build(ids, pairs);
}

}  // namespace geolog
