#pragma once

#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "etale/group.hpp"

namespace etale {

/// A submonoid N of the ambient group, given by a membership oracle plus a
/// monoid generating set (the generating set drives congruence saturation
/// and generator decompositions of actions).
struct SubmonoidSpec {
  enum class Oracle { positive_letters, componentwise_nonneg, generated };

  GroupDescriptor desc;
  Oracle oracle = Oracle::componentwise_nonneg;
  std::vector<GroupElem> generators;  // monoid generating set

  // `generated` oracle only: membership = products of at most `depth`
  // generators, precomputed once. Sound and complete up to that depth.
  int generated_depth = 0;
  std::vector<GroupElem> generated_universe;

  bool is_generated() const { return oracle == Oracle::generated; }
};

inline bool contains(const SubmonoidSpec& spec, const GroupElem& g) {
  if (!(g.desc == spec.desc))
    throw usage_error("element descriptor does not match the submonoid's group");
  switch (spec.oracle) {
    case SubmonoidSpec::Oracle::positive_letters:
      for (int letter : g.word)
        if (letter < 0) return false;
      return true;
    case SubmonoidSpec::Oracle::componentwise_nonneg:
      for (auto c : g.vec)
        if (c < 0) return false;
      return true;  // the cyclic residue is unconstrained
    case SubmonoidSpec::Oracle::generated:
      return std::find(spec.generated_universe.begin(), spec.generated_universe.end(), g) !=
             spec.generated_universe.end();
  }
  return false;
}

/// Builds a submonoid spec; closure of the generating set under products
/// is precomputed for the `generated` oracle.
inline SubmonoidSpec make_submonoid(const GroupDescriptor& desc, SubmonoidSpec::Oracle oracle,
                                    std::vector<GroupElem> generators, int generated_depth = 0,
                                    std::size_t cap = 1000000) {
  SubmonoidSpec spec;
  spec.desc = desc;
  spec.oracle = oracle;
  spec.generators = std::move(generators);
  for (const auto& g : spec.generators)
    if (!(g.desc == desc)) throw usage_error("generator descriptor mismatch");
  if (oracle == SubmonoidSpec::Oracle::generated) {
    if (generated_depth < 0) throw usage_error("generated oracle needs depth >= 0");
    spec.generated_depth = generated_depth;
    std::unordered_set<GroupElem, GroupElemHash> seen{identity(desc)};
    std::vector<GroupElem> frontier{identity(desc)};
    for (int d = 0; d < generated_depth; ++d) {
      std::vector<GroupElem> next;
      for (const auto& w : frontier)
        for (const auto& g : spec.generators) {
          GroupElem p = compose(w, g);
          if (seen.insert(p).second) {
            next.push_back(p);
            if (seen.size() > cap)
              throw resource_error("generated submonoid exceeds the element cap of " +
                                   std::to_string(cap));
          }
        }
      frontier = std::move(next);
    }
    spec.generated_universe.assign(seen.begin(), seen.end());
    std::sort(spec.generated_universe.begin(), spec.generated_universe.end(), canonical_less);
  }
  return spec;
}

/// {u in N ∩ ball(r) : u^{-1} in N}, verified closed under composition.
/// Infinite unit groups are unsupported; closure escaping the window is a
/// hard error asking for a larger radius.
inline std::vector<GroupElem> unit_group(const SubmonoidSpec& spec, int r) {
  std::vector<GroupElem> units;
  for (const auto& g : ball(spec.desc, r))
    if (contains(spec, g) && contains(spec, inverse(g))) units.push_back(g);
  std::unordered_set<GroupElem, GroupElemHash> set(units.begin(), units.end());
  for (const auto& u : units)
    for (const auto& v : units)
      if (!set.count(compose(u, v)))
        throw window_error("unit group not closed within ball(" + std::to_string(r) +
                           "); retry with a larger radius (infinite unit groups are unsupported)");
  return units;  // canonical order, inherited from ball()
}

/// A congruence on N, saturated over the window N ∩ ball(r+margin).
/// `stable` records that shrinking the margin by one does not change the
/// partition on N ∩ ball(r).
struct Congruence {
  std::vector<std::pair<GroupElem, GroupElem>> generating_pairs;
  int window_radius = 0;
  int margin = 1;
  bool trivial = false;             // no generating pairs: blocks are singletons
  std::vector<GroupElem> universe;  // N ∩ ball(r+margin), canonical order
  std::vector<int> block_of;       // universe index -> normalized block id
  std::unordered_map<GroupElem, int, GroupElemHash> index;
  bool stable = false;

  bool in_universe(const GroupElem& g) const { return trivial || index.count(g) > 0; }
  bool in_core(const GroupElem& g) const {
    if (trivial) return g.length() <= window_radius;
    auto it = index.find(g);
    return it != index.end() && universe[it->second].length() <= window_radius;
  }
  int block(const GroupElem& g) const {
    if (trivial)
      throw usage_error("trivial congruences have no materialized blocks; use same_block()");
    auto it = index.find(g);
    if (it == index.end())
      throw window_error("element " + print_element(g) + " is outside the congruence window");
    return block_of[it->second];
  }
  bool same_block(const GroupElem& a, const GroupElem& b) const {
    if (trivial) return a == b;
    return block(a) == block(b);
  }
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

inline std::vector<int> saturate_partition(
    const std::vector<std::pair<GroupElem, GroupElem>>& pairs, const SubmonoidSpec& spec,
    const std::vector<GroupElem>& universe,
    const std::unordered_map<GroupElem, int, GroupElemHash>& index) {
  UnionFind uf(universe.size());
  std::deque<std::pair<int, int>> work;
  auto try_unite = [&](const GroupElem& a, const GroupElem& b) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end()) return;
    if (uf.unite(ia->second, ib->second)) work.emplace_back(ia->second, ib->second);
  };
  for (const auto& [a, b] : pairs) try_unite(a, b);
  // Work-list closure under left and right composition by the monoid
  // generators; transitivity and symmetry come from the union-find.
  while (!work.empty()) {
    auto [ia, ib] = work.front();
    work.pop_front();
    const GroupElem& a = universe[ia];
    const GroupElem& b = universe[ib];
    for (const auto& g : spec.generators) {
      try_unite(compose(g, a), compose(g, b));
      try_unite(compose(a, g), compose(b, g));
    }
  }
  // Normalize block ids to first-occurrence order over the sorted universe.
  std::vector<int> block(universe.size(), -1);
  std::unordered_map<int, int> remap;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    int root = uf.find(static_cast<int>(i));
    auto it = remap.find(root);
    if (it == remap.end()) it = remap.emplace(root, static_cast<int>(remap.size())).first;
    block[i] = it->second;
  }
  return block;
}

inline std::vector<GroupElem> monoid_window(const SubmonoidSpec& spec, int radius,
                                            std::size_t cap = 1000000) {
  std::vector<GroupElem> universe;
  for (const auto& g : ball(spec.desc, radius, cap))
    if (contains(spec, g)) universe.push_back(g);
  return universe;
}

}  // namespace detail

/// Least congruence window containing the generating pairs: the partition of
/// N ∩ ball(r+margin) closed under left/right composition by the monoid
/// generators. Universally quantified families like "2+k ~ 5+k" are entered
/// by their single generating pair (2,5); the closure regenerates them.
inline Congruence saturate_congruence(const std::vector<std::pair<GroupElem, GroupElem>>& pairs,
                                      const SubmonoidSpec& spec, int r, int margin) {
  if (r < 0 || margin < 1) throw usage_error("congruence saturation needs r >= 0, margin >= 1");
  for (const auto& [a, b] : pairs)
    if (!contains(spec, a) || !contains(spec, b))
      throw usage_error("congruence pair (" + print_element(a) + ", " + print_element(b) +
                        ") has a member outside the submonoid");
  Congruence c;
  c.generating_pairs = pairs;
  c.window_radius = r;
  c.margin = margin;
  if (pairs.empty()) {
    c.trivial = true;
    c.stable = true;
    return c;
  }
  c.universe = detail::monoid_window(spec, r + margin);
  for (std::size_t i = 0; i < c.universe.size(); ++i) c.index.emplace(c.universe[i], i);
  c.block_of = detail::saturate_partition(pairs, spec, c.universe, c.index);

  // Stability: the partition restricted to ball(r) must agree with the one
  // computed at margin-1.
  auto smaller = detail::monoid_window(spec, r + margin - 1);
  std::unordered_map<GroupElem, int, GroupElemHash> small_index;
  for (std::size_t i = 0; i < smaller.size(); ++i) small_index.emplace(smaller[i], i);
  auto small_block = detail::saturate_partition(pairs, spec, smaller, small_index);
  auto same_partition_on_core = [&]() {
    std::map<int, int> pairing;  // small block -> big block
    for (std::size_t i = 0; i < smaller.size(); ++i) {
      if (smaller[i].length() > r) continue;
      int bb = c.block_of[c.index.at(smaller[i])];
      auto [it, fresh] = pairing.emplace(small_block[i], bb);
      (void)fresh;
      if (it->second != bb) return false;
    }
    // Injectivity of the block pairing: no two small blocks map to one.
    std::set<int> images;
    for (auto& [k, v] : pairing)
      if (!images.insert(v).second) return false;
    return true;
  };
  c.stable = same_partition_on_core();
  return c;
}

/// The quotient monoid M = N/~ with its unit group and the congruent unit
/// pairs (u, v), u ~ v, that enter the groupoid relation R1.
struct QuotientMonoid {
  SubmonoidSpec submonoid;
  Congruence congruence;
  std::vector<GroupElem> units;
  std::vector<std::pair<GroupElem, GroupElem>> unit_pairs;

  const GroupDescriptor& descriptor() const { return submonoid.desc; }
};

inline bool related(const QuotientMonoid& m, const GroupElem& a, const GroupElem& b) {
  if (!m.congruence.stable)
    throw window_error("congruence is not stable at this margin; enlarge the margin");
  if (!m.congruence.in_core(a) || !m.congruence.in_core(b))
    throw window_error("window too small: related() asked outside the stable core");
  return m.congruence.block(a) == m.congruence.block(b);
}

inline QuotientMonoid make_quotient_monoid(const SubmonoidSpec& spec,
                                           const std::vector<std::pair<GroupElem, GroupElem>>& pairs,
                                           int r, int margin, int unit_radius = -1) {
  QuotientMonoid m;
  m.submonoid = spec;
  m.congruence = saturate_congruence(pairs, spec, r, margin);
  m.units = unit_group(spec, unit_radius < 0 ? std::min(r, 4) : unit_radius);
  for (const auto& u : m.units)
    for (const auto& v : m.units)
      if (m.congruence.in_core(u) && m.congruence.in_core(v) &&
          m.congruence.block(u) == m.congruence.block(v))
        m.unit_pairs.emplace_back(u, v);
  return m;
}

/// Classes c in the stable core with c*c = c. The `complete` flag drops when
/// some product escapes the saturated window, making the answer partial.
struct IdempotentReport {
  std::vector<int> blocks;                 // block ids, ascending
  std::vector<GroupElem> representatives;  // canonical-minimal member per block
  bool complete = true;
};

inline IdempotentReport idempotent_classes(const QuotientMonoid& m) {
  if (!m.congruence.stable)
    throw window_error("congruence is not stable at this margin; enlarge the margin");
  IdempotentReport rep;
  std::map<int, GroupElem> first_rep;
  for (std::size_t i = 0; i < m.congruence.universe.size(); ++i) {
    const GroupElem& g = m.congruence.universe[i];
    if (g.length() > m.congruence.window_radius) continue;
    first_rep.emplace(m.congruence.block_of[i], g);  // universe is in canonical order
  }
  for (const auto& [block, g] : first_rep) {
    GroupElem sq = compose(g, g);
    if (!m.congruence.in_universe(sq)) {
      rep.complete = false;
      continue;
    }
    if (m.congruence.block(sq) == block) {
      rep.blocks.push_back(block);
      rep.representatives.push_back(g);
    }
  }
  return rep;
}

/// A finite set with a left action of the monoid, stored on generators only.
/// General elements act through generator decompositions (see ActionEval).
struct MSet {
  std::vector<std::string> elements;
  std::vector<std::vector<int>> action;  // action[generator][element] -> element
  bool additive_notation = false;

  int size() const { return static_cast<int>(elements.size()); }
  int element_index(const std::string& name) const {
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (elements[i] == name) return static_cast<int>(i);
    throw usage_error("unknown M-set element '" + name + "'");
  }
};

inline MSet make_mset(std::vector<std::string> elements, std::vector<std::vector<int>> action,
                      bool additive = false) {
  MSet s;
  s.elements = std::move(elements);
  s.action = std::move(action);
  s.additive_notation = additive;
  for (const auto& row : s.action) {
    if (row.size() != s.elements.size()) throw usage_error("M-set action table is not total");
    for (int v : row)
      if (v < 0 || v >= s.size()) throw usage_error("M-set action table maps outside the carrier");
  }
  return s;
}

/// Evaluates the action of arbitrary submonoid elements on an MSet by
/// decomposing them into generator words; decompositions are cached.
class ActionEval {
 public:
  ActionEval(const SubmonoidSpec& spec, const MSet& mset, int max_depth = 256)
      : spec_(&spec), mset_(&mset), max_depth_(max_depth) {
    if (spec.generators.size() != mset.action.size())
      throw config_error("M-set action table has " + std::to_string(mset.action.size()) +
                         " generator rows but the submonoid has " +
                         std::to_string(spec.generators.size()) + " generators");
  }

  /// Left-to-right generator word with product n.
  const std::vector<int>& decompose(const GroupElem& n) {
    auto it = cache_.find(n);
    if (it != cache_.end()) return it->second;
    // Breadth-first search over right multiplication by generators.
    std::unordered_map<GroupElem, std::pair<GroupElem, int>, GroupElemHash> parent;
    std::deque<GroupElem> queue{identity(spec_->desc)};
    parent.emplace(identity(spec_->desc), std::make_pair(identity(spec_->desc), -1));
    int found = n.is_identity() ? 0 : -1;
    for (int depth = 0; depth < max_depth_ && found < 0 && !queue.empty(); ++depth) {
      std::deque<GroupElem> next;
      while (!queue.empty() && found < 0) {
        GroupElem w = queue.front();
        queue.pop_front();
        for (std::size_t gi = 0; gi < spec_->generators.size(); ++gi) {
          GroupElem p = compose(w, spec_->generators[gi]);
          if (parent.count(p)) continue;
          // Prune anything that cannot be a prefix of n in the shipped
          // oracles: keep within a generous length bound.
          if (p.length() > n.length() + prefix_slack()) continue;
          parent.emplace(p, std::make_pair(w, static_cast<int>(gi)));
          if (p == n) {
            found = 1;
            break;
          }
          next.push_back(p);
        }
      }
      if (found < 0) queue = std::move(next);
    }
    if (found < 0 && !n.is_identity())
      throw config_error("element " + print_element(n) +
                         " is not expressible in the monoid generators up to depth " +
                         std::to_string(max_depth_));
    std::vector<int> word;
    if (!n.is_identity()) {
      GroupElem cur = n;
      while (!(cur.is_identity())) {
        auto& [prev, gi] = parent.at(cur);
        word.push_back(gi);
        cur = prev;
      }
      std::reverse(word.begin(), word.end());
    }
    return cache_.emplace(n, std::move(word)).first->second;
  }

  /// n . s with the left action: the last generator in the word acts first.
  int act(const GroupElem& n, int s) {
    const auto& word = decompose(n);
    for (auto it = word.rbegin(); it != word.rend(); ++it) s = mset_->action[*it][s];
    return s;
  }

 private:
  int prefix_slack() const {
    int slack = 0;
    for (const auto& g : spec_->generators) slack = std::max(slack, g.length());
    return slack + 1;
  }

  const SubmonoidSpec* spec_;
  const MSet* mset_;
  int max_depth_;
  std::unordered_map<GroupElem, std::vector<int>, GroupElemHash> cache_;
};

/// Violations of the congruence-compatibility condition on an N-set:
/// a ~ b must imply a.s = b.s. An empty report means S is a genuine M-set.
struct MSetReport {
  struct Violation {
    GroupElem a, b;
    int element;
  };
  std::vector<Violation> violations;
  bool empty() const { return violations.empty(); }
};

inline MSetReport validate_mset(const QuotientMonoid& m, const MSet& s) {
  if (!m.congruence.stable)
    throw window_error("congruence is not stable at this margin; enlarge the margin");
  MSetReport report;
  ActionEval eval(m.submonoid, s);
  const auto& universe = m.congruence.universe;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (universe[i].length() > m.congruence.window_radius) continue;
    for (std::size_t j = i + 1; j < universe.size(); ++j) {
      if (universe[j].length() > m.congruence.window_radius) continue;
      if (m.congruence.block_of[i] != m.congruence.block_of[j]) continue;
      for (int e = 0; e < s.size(); ++e)
        if (eval.act(universe[i], e) != eval.act(universe[j], e))
          report.violations.push_back({universe[i], universe[j], e});
    }
  }
  return report;
}

/// Checks that the generator table really defines an N-action on sampled
/// window pairs: act(n1 n2, s) = act(n1, act(n2, s)).
inline std::optional<std::string> validate_nset(const SubmonoidSpec& spec, const MSet& s,
                                                int depth) {
  ActionEval eval(spec, s);
  auto window = detail::monoid_window(spec, depth);
  for (const auto& a : window)
    for (const auto& b : window) {
      GroupElem p = compose(a, b);
      for (int e = 0; e < s.size(); ++e)
        if (eval.act(p, e) != eval.act(a, eval.act(b, e)))
          return "action of " + print_element(a) + "*" + print_element(b) +
                 " differs from the composite on element " + s.elements[e];
    }
  return std::nullopt;
}

}  // namespace etale
