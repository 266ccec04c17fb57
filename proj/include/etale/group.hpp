#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "etale/errors.hpp"

namespace etale {

/// The ambient groups Z that submonoids embed into: free groups F_k,
/// integer vector groups Z^n, and products Z^n x Z/m.
struct GroupDescriptor {
  enum class Kind { free_group, int_vector, int_vector_times_cyclic };

  Kind kind = Kind::int_vector;
  int rank = 1;            // k generators (free) or n coordinates (vector)
  std::int64_t modulus = 0;  // m >= 2 in the cyclic case, 0 otherwise

  static GroupDescriptor free_group_of_rank(int k) {
    if (k < 1) throw usage_error("free group rank must be >= 1");
    return {Kind::free_group, k, 0};
  }
  static GroupDescriptor int_vector_of_dim(int n) {
    if (n < 1) throw usage_error("vector dimension must be >= 1");
    return {Kind::int_vector, n, 0};
  }
  static GroupDescriptor int_vector_cyclic(int n, std::int64_t m) {
    if (n < 1) throw usage_error("vector dimension must be >= 1");
    if (m < 2) throw usage_error("cyclic modulus must be >= 2");
    return {Kind::int_vector_times_cyclic, n, m};
  }

  bool operator==(const GroupDescriptor&) const = default;

  std::string to_string() const {
    std::ostringstream os;
    switch (kind) {
      case Kind::free_group: os << "free:" << rank; break;
      case Kind::int_vector: os << "int:" << rank; break;
      case Kind::int_vector_times_cyclic: os << "int:" << rank << "xZ" << modulus; break;
    }
    return os.str();
  }

  /// Parses "free:k", "int:n" or "int:nxZm".
  static GroupDescriptor parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw usage_error("bad group descriptor: " + text);
    std::string head = text.substr(0, colon);
    std::string tail = text.substr(colon + 1);
    try {
      if (head == "free") return free_group_of_rank(std::stoi(tail));
      if (head == "int") {
        auto xz = tail.find("xZ");
        if (xz == std::string::npos) return int_vector_of_dim(std::stoi(tail));
        return int_vector_cyclic(std::stoi(tail.substr(0, xz)),
                                 std::stoll(tail.substr(xz + 2)));
      }
    } catch (const std::logic_error&) {
      throw usage_error("bad group descriptor: " + text);
    }
    throw usage_error("bad group descriptor: " + text);
  }
};

/// An exact group element in canonical form.
///
/// Free case: a fully reduced word stored as signed letters, +i for x_i and
/// -i for x_i^{-1} (1-based). Vector case: integer coordinates, plus a
/// residue in [0, m) when the descriptor has a cyclic factor.
struct GroupElem {
  GroupDescriptor desc;
  std::vector<int> word;           // free case only
  std::vector<std::int64_t> vec;   // vector cases
  std::int64_t res = 0;            // cyclic residue

  bool operator==(const GroupElem&) const = default;

  bool is_identity() const {
    if (desc.kind == GroupDescriptor::Kind::free_group) return word.empty();
    for (auto c : vec)
      if (c != 0) return false;
    return res == 0;
  }

  int length() const {
    if (desc.kind == GroupDescriptor::Kind::free_group) return static_cast<int>(word.size());
    std::int64_t m = 0;
    for (auto c : vec) m = std::max(m, c < 0 ? -c : c);
    return static_cast<int>(m);
  }
};

inline GroupElem identity(const GroupDescriptor& d) {
  GroupElem e;
  e.desc = d;
  if (d.kind != GroupDescriptor::Kind::free_group) e.vec.assign(d.rank, 0);
  return e;
}

namespace detail {

inline void require_same_descriptor(const GroupElem& a, const GroupElem& b) {
  if (!(a.desc == b.desc))
    throw usage_error("group elements have mismatched descriptors: " +
                      a.desc.to_string() + " vs " + b.desc.to_string());
}

/// Appends one letter to a word kept in reduced form.
inline void push_reduced(std::vector<int>& w, int letter) {
  if (!w.empty() && w.back() == -letter)
    w.pop_back();
  else
    w.push_back(letter);
}

inline std::int64_t mod_nonneg(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

/// Rank used by the canonical letter order x1 < x1^-1 < x2 < x2^-1 < ...
inline int letter_rank(int letter) {
  int i = letter > 0 ? letter : -letter;
  return 2 * (i - 1) + (letter < 0 ? 1 : 0);
}

}  // namespace detail

inline GroupElem compose(const GroupElem& a, const GroupElem& b) {
  detail::require_same_descriptor(a, b);
  GroupElem r = a;
  if (a.desc.kind == GroupDescriptor::Kind::free_group) {
    for (int letter : b.word) detail::push_reduced(r.word, letter);
  } else {
    for (std::size_t i = 0; i < r.vec.size(); ++i) r.vec[i] += b.vec[i];
    if (a.desc.kind == GroupDescriptor::Kind::int_vector_times_cyclic)
      r.res = detail::mod_nonneg(r.res + b.res, a.desc.modulus);
  }
  return r;
}

inline GroupElem inverse(const GroupElem& a) {
  GroupElem r = a;
  if (a.desc.kind == GroupDescriptor::Kind::free_group) {
    std::reverse(r.word.begin(), r.word.end());
    for (int& letter : r.word) letter = -letter;
  } else {
    for (auto& c : r.vec) c = -c;
    if (a.desc.kind == GroupDescriptor::Kind::int_vector_times_cyclic)
      r.res = detail::mod_nonneg(-r.res, a.desc.modulus);
  }
  return r;
}

/// Canonical total order per descriptor: shortlex in the free case
/// (length first, then letter ranks), lexicographic on (coordinates,
/// residue) otherwise. Used everywhere a representative must be picked.
inline int canonical_compare(const GroupElem& a, const GroupElem& b) {
  detail::require_same_descriptor(a, b);
  if (a.desc.kind == GroupDescriptor::Kind::free_group) {
    if (a.word.size() != b.word.size()) return a.word.size() < b.word.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.word.size(); ++i) {
      int ra = detail::letter_rank(a.word[i]), rb = detail::letter_rank(b.word[i]);
      if (ra != rb) return ra < rb ? -1 : 1;
    }
    return 0;
  }
  for (std::size_t i = 0; i < a.vec.size(); ++i)
    if (a.vec[i] != b.vec[i]) return a.vec[i] < b.vec[i] ? -1 : 1;
  if (a.res != b.res) return a.res < b.res ? -1 : 1;
  return 0;
}

inline bool canonical_less(const GroupElem& a, const GroupElem& b) {
  return canonical_compare(a, b) < 0;
}

struct GroupElemHash {
  std::size_t operator()(const GroupElem& g) const {
    std::size_t h = static_cast<std::size_t>(g.desc.kind) * 31 + g.desc.rank;
    auto mix = [&h](std::size_t v) { h = h * 1000003u + v + 0x9e3779b97f4a7c15ull; };
    for (int letter : g.word) mix(static_cast<std::size_t>(letter + (1 << 20)));
    for (auto c : g.vec) mix(static_cast<std::size_t>(c + (1ll << 40)));
    mix(static_cast<std::size_t>(g.res));
    return h;
  }
};

/// All elements of length (max-norm) at most r, in canonical order.
/// Closed under inverse; ball(r) x ball(s) composes into ball(r+s).
/// Throws resource_error when the enumeration would exceed `cap`.
inline std::vector<GroupElem> ball(const GroupDescriptor& d, int r,
                                   std::size_t cap = 1000000) {
  if (r < 0) throw usage_error("ball radius must be >= 0");
  std::vector<GroupElem> out;
  auto guard = [&out, cap, r]() {
    if (out.size() > cap)
      throw resource_error("ball(" + std::to_string(r) + ") exceeds the element cap of " +
                           std::to_string(cap) + " elements");
  };
  if (d.kind == GroupDescriptor::Kind::free_group) {
    // Breadth-first by length; within one length the order is lexicographic
    // on letter ranks, which together give shortlex.
    std::vector<GroupElem> layer{identity(d)};
    out.push_back(identity(d));
    for (int len = 1; len <= r; ++len) {
      std::vector<GroupElem> next;
      for (const auto& w : layer) {
        for (int i = 1; i <= d.rank; ++i) {
          for (int letter : {i, -i}) {
            if (!w.word.empty() && w.word.back() == -letter) continue;
            GroupElem e = w;
            e.word.push_back(letter);
            next.push_back(std::move(e));
            if (out.size() + next.size() > cap)
              throw resource_error("ball(" + std::to_string(r) +
                                   ") exceeds the element cap of " + std::to_string(cap) +
                                   " elements");
          }
        }
      }
      // Stable by construction: parents are in shortlex order and children
      // are emitted in letter-rank order.
      for (auto& e : next) out.push_back(e);
      layer = std::move(next);
    }
    return out;
  }
  // Vector cases: odometer over [-r, r]^n (x full residue range).
  std::int64_t residues = d.kind == GroupDescriptor::Kind::int_vector_times_cyclic ? d.modulus : 1;
  std::vector<std::int64_t> coord(d.rank, -r);
  while (true) {
    for (std::int64_t q = 0; q < residues; ++q) {
      GroupElem e = identity(d);
      e.vec.assign(coord.begin(), coord.end());
      e.res = q;
      out.push_back(std::move(e));
      guard();
    }
    int i = d.rank - 1;
    while (i >= 0 && coord[i] == r) coord[i--] = -r;
    if (i < 0) break;
    ++coord[i];
  }
  return out;
}

/// Canonical textual form: free words as `x1*x2^-1`, identity as `e`;
/// vectors as `(3,-1)`; product elements as `(3,-1);2`.
inline std::string print_element(const GroupElem& g) {
  std::ostringstream os;
  if (g.desc.kind == GroupDescriptor::Kind::free_group) {
    if (g.word.empty()) return "e";
    for (std::size_t i = 0; i < g.word.size(); ++i) {
      if (i) os << "*";
      os << "x" << (g.word[i] > 0 ? g.word[i] : -g.word[i]);
      if (g.word[i] < 0) os << "^-1";
    }
    return os.str();
  }
  os << "(";
  for (int i = 0; i < g.desc.rank; ++i) {
    if (i) os << ",";
    os << g.vec[i];
  }
  os << ")";
  if (g.desc.kind == GroupDescriptor::Kind::int_vector_times_cyclic) os << ";" << g.res;
  return os.str();
}

namespace detail {

/// Parses the free-word syntax into raw letters, without reducing.
inline std::vector<int> parse_letters(const GroupDescriptor& d, const std::string& text) {
  std::vector<int> letters;
  if (text == "e") return letters;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t star = text.find('*', pos);
    std::string tok = text.substr(pos, star == std::string::npos ? star : star - pos);
    pos = star == std::string::npos ? text.size() : star + 1;
    bool inv = false;
    if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
      inv = true;
      tok = tok.substr(0, tok.size() - 3);
    }
    if (tok.size() < 2 || tok[0] != 'x')
      throw usage_error("bad free-word token: '" + tok + "'");
    int i = 0;
    try {
      i = std::stoi(tok.substr(1));
    } catch (const std::logic_error&) {
      throw usage_error("bad free-word token: '" + tok + "'");
    }
    if (i < 1 || i > d.rank)
      throw usage_error("generator x" + std::to_string(i) + " out of range for " + d.to_string());
    letters.push_back(inv ? -i : i);
  }
  return letters;
}

}  // namespace detail

/// Parses the canonical textual form; free words are reduced on input.
/// For one-dimensional vector groups a bare integer is also accepted.
inline GroupElem parse_element(const GroupDescriptor& d, const std::string& text) {
  GroupElem g = identity(d);
  if (d.kind == GroupDescriptor::Kind::free_group) {
    for (int letter : detail::parse_letters(d, text)) detail::push_reduced(g.word, letter);
    return g;
  }
  std::string body = text;
  if (d.kind == GroupDescriptor::Kind::int_vector_times_cyclic) {
    auto semi = text.rfind(';');
    if (semi == std::string::npos) throw usage_error("missing residue in element: " + text);
    try {
      g.res = detail::mod_nonneg(std::stoll(text.substr(semi + 1)), d.modulus);
    } catch (const std::logic_error&) {
      throw usage_error("bad residue in element: " + text);
    }
    body = text.substr(0, semi);
  }
  if (!body.empty() && body.front() == '(') {
    if (body.back() != ')') throw usage_error("unbalanced parentheses in element: " + text);
    body = body.substr(1, body.size() - 2);
  }
  std::vector<std::int64_t> coords;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string tok = body.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      coords.push_back(std::stoll(tok));
    } catch (const std::logic_error&) {
      throw usage_error("bad coordinate '" + tok + "' in element: " + text);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (static_cast<int>(coords.size()) != d.rank)
    throw usage_error("element " + text + " has " + std::to_string(coords.size()) +
                      " coordinates, expected " + std::to_string(d.rank));
  g.vec = std::move(coords);
  return g;
}

/// g^n for n >= 0.
inline GroupElem power(const GroupElem& g, int n) {
  GroupElem r = identity(g.desc);
  for (int i = 0; i < n; ++i) r = compose(r, g);
  return r;
}

}  // namespace etale
