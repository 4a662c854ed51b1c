#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <set>
#include <vector>

#include "gdms/errors.hpp"

namespace gdms {

// A finite admissible word; symbols are 0-based.
using Word = std::vector<int>;

inline constexpr std::uint64_t kDefaultCylinderCap = 10'000'000;

// Transitive subshift of finite type. Transitivity (strong connectivity of
// the transition graph) is checked eagerly; non-transitive matrices are
// rejected at construction.
class Subshift {
 public:
  Subshift(int q, std::vector<std::vector<bool>> A) : q_(q), A_(std::move(A)) {
    if (q_ < 1) throw invalid_input("subshift: alphabet size must be >= 1");
    if (static_cast<int>(A_.size()) != q_)
      throw invalid_input("subshift: transition matrix must be q x q");
    for (const auto& row : A_)
      if (static_cast<int>(row.size()) != q_)
        throw invalid_input("subshift: transition matrix must be q x q");
    for (int i = 0; i < q_; ++i) {
      bool row_ok = false, col_ok = false;
      for (int j = 0; j < q_; ++j) {
        row_ok |= A_[i][j];
        col_ok |= A_[j][i];
      }
      if (!row_ok || !col_ok)
        throw invalid_input("subshift: every row and column of A needs a true entry");
    }
    if (!strongly_connected())
      throw invalid_input("subshift: transition graph is not strongly connected");
  }

  static Subshift full_shift(int q) {
    return Subshift(q, std::vector<std::vector<bool>>(q, std::vector<bool>(q, true)));
  }

  static Subshift golden_mean() {
    return Subshift(2, {{true, true}, {true, false}});
  }

  int alphabet_size() const { return q_; }
  bool allows(int i, int j) const { return A_[i][j]; }
  const std::vector<std::vector<bool>>& matrix() const { return A_; }

 private:
  bool strongly_connected() const {
    auto reach_all = [&](bool transpose) {
      std::vector<bool> seen(q_, false);
      std::queue<int> bfs;
      bfs.push(0);
      seen[0] = true;
      int count = 1;
      while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        for (int v = 0; v < q_; ++v) {
          bool edge = transpose ? A_[v][u] : A_[u][v];
          if (edge && !seen[v]) {
            seen[v] = true;
            ++count;
            bfs.push(v);
          }
        }
      }
      return count == q_;
    };
    return reach_all(false) && reach_all(true);
  }

  int q_;
  std::vector<std::vector<bool>> A_;
};

inline void check_symbols(const Word& w, const Subshift& S) {
  for (int s : w)
    if (s < 0 || s >= S.alphabet_size())
      throw invalid_input("word contains out-of-range symbol");
}

inline bool is_admissible(const Word& w, const Subshift& S) {
  check_symbols(w, S);
  for (std::size_t k = 0; k + 1 < w.size(); ++k)
    if (!S.allows(w[k], w[k + 1])) return false;
  return true;
}

// Admissible one-symbol extensions, in symbol order.
inline std::vector<Word> children(const Word& w, const Subshift& S) {
  if (w.empty()) {
    std::vector<Word> out;
    for (int j = 0; j < S.alphabet_size(); ++j) out.push_back({j});
    return out;
  }
  std::vector<Word> out;
  for (int j = 0; j < S.alphabet_size(); ++j) {
    if (S.allows(w.back(), j)) {
      Word c = w;
      c.push_back(j);
      out.push_back(std::move(c));
    }
  }
  return out;
}

// All admissible words of length n, lexicographic order.
inline std::vector<Word> enumerate_cylinders(int n, const Subshift& S,
                                             std::uint64_t cap = kDefaultCylinderCap) {
  if (n < 1) throw invalid_input("enumerate_cylinders: generation must be >= 1");
  std::vector<Word> frontier;
  for (int i = 0; i < S.alphabet_size(); ++i) frontier.push_back({i});
  for (int level = 1; level < n; ++level) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (Word& c : children(w, S)) next.push_back(std::move(c));
      if (next.size() > cap)
        throw resource_limit("enumerate_cylinders: cylinder cap exceeded");
    }
    frontier = std::move(next);
  }
  if (frontier.size() > cap)
    throw resource_limit("enumerate_cylinders: cylinder cap exceeded");
  return frontier;
}

// Shortest admissible word of the form a . w . b (w possibly empty).
// Transitivity guarantees existence; BFS over end states.
inline Word connecting_word(const Word& a, const Word& b, const Subshift& S) {
  if (a.empty() || b.empty()) throw invalid_input("connecting_word: empty endpoint");
  if (!is_admissible(a, S) || !is_admissible(b, S))
    throw invalid_input("connecting_word: endpoints must be admissible");
  // BFS from last(a) to first(b), at least one edge.
  int src = a.back(), dst = b.front();
  int q = S.alphabet_size();
  std::vector<int> parent(q, -2);
  std::queue<int> bfs;
  for (int j = 0; j < q; ++j) {
    if (S.allows(src, j) && parent[j] == -2) {
      parent[j] = -1;
      bfs.push(j);
    }
  }
  while (parent[dst] == -2 && !bfs.empty()) {
    int u = bfs.front();
    bfs.pop();
    for (int v = 0; v < q; ++v) {
      if (S.allows(u, v) && parent[v] == -2) {
        parent[v] = u;
        bfs.push(v);
      }
    }
  }
  if (parent[dst] == -2) throw internal_error("connecting_word: no path (non-transitive?)");
  Word middle;  // states strictly between last(a) and first(b)
  for (int v = parent[dst]; v >= 0; v = parent[v]) middle.push_back(v);
  std::reverse(middle.begin(), middle.end());
  Word out = a;
  out.insert(out.end(), middle.begin(), middle.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline bool is_prefix(const Word& p, const Word& w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

// Finite union of cylinders as a canonical antichain: deduplicated, no word
// a prefix of another, sorted lexicographically (prefixes sort first).
class CylinderSet {
 public:
  CylinderSet() = default;

  static CylinderSet canonical(std::vector<Word> words) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    std::set<Word> kept_set;
    std::vector<Word> kept;
    for (const Word& w : words) {
      bool shadowed = false;
      Word prefix;
      for (std::size_t i = 0; i + 1 <= w.size() && !shadowed; ++i) {
        prefix.push_back(w[i]);
        if (prefix.size() < w.size() && kept_set.count(prefix)) shadowed = true;
      }
      if (!shadowed) {
        kept.push_back(w);
        kept_set.insert(w);
      }
    }
    CylinderSet out;
    out.words_ = std::move(kept);
    return out;
  }

  static CylinderSet single(Word w) { return canonical({std::move(w)}); }

  const std::vector<Word>& words() const { return words_; }
  bool empty() const { return words_.empty(); }
  std::size_t size() const { return words_.size(); }

  int max_generation() const {
    std::size_t g = 0;
    for (const Word& w : words_) g = std::max(g, w.size());
    return static_cast<int>(g);
  }

  // True iff the cylinder of w is contained in this set.
  bool contains_cylinder(const Word& w) const {
    for (const Word& v : words_)
      if (is_prefix(v, w)) return true;
    return false;
  }

  // True iff the cylinder of w meets this set.
  bool meets_cylinder(const Word& w) const {
    for (const Word& v : words_)
      if (is_prefix(v, w) || is_prefix(w, v)) return true;
    return false;
  }

  bool operator==(const CylinderSet& other) const = default;

 private:
  std::vector<Word> words_;
};

// Set intersection of two finite cylinder unions. By the net property two
// cylinders are nested or disjoint, so each pair contributes the longer word
// when one prefixes the other and nothing otherwise.
inline CylinderSet antichain_intersect(const CylinderSet& X, const CylinderSet& Y) {
  std::vector<Word> out;
  for (const Word& w : X.words()) {
    for (const Word& v : Y.words()) {
      if (is_prefix(w, v))
        out.push_back(v);
      else if (is_prefix(v, w))
        out.push_back(w);
    }
  }
  return CylinderSet::canonical(std::move(out));
}

inline CylinderSet antichain_union(const CylinderSet& X, const CylinderSet& Y) {
  std::vector<Word> out = X.words();
  out.insert(out.end(), Y.words().begin(), Y.words().end());
  return CylinderSet::canonical(std::move(out));
}

}  // namespace gdms
