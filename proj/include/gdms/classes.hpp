#pragma once

#include <tuple>
#include <unordered_map>

#include "gdms/thermo.hpp"

namespace gdms {

// g(i) depending only on the first k symbols, given by a value table over
// admissible k-words. Covers cylinder indicators and all finite averages
// used by the level-set machinery.
struct LocallyConstantFunction {
  int k = 1;
  std::map<Word, Rat> table;

  static LocallyConstantFunction indicator(const Word& w, const Subshift& S) {
    if (w.empty()) throw invalid_input("indicator: empty word");
    LocallyConstantFunction g;
    g.k = static_cast<int>(w.size());
    for (const Word& u : enumerate_cylinders(g.k, S)) g.table[u] = Rat(u == w ? 1 : 0);
    return g;
  }

  void validate(const Subshift& S) const {
    if (k < 1) throw invalid_input("locally constant function: window k >= 1 required");
    auto words = enumerate_cylinders(k, S);
    if (table.size() != words.size())
      throw invalid_input("locally constant function: table must cover exactly the "
                          "admissible k-words");
    for (const Word& w : words)
      if (!table.count(w))
        throw invalid_input("locally constant function: missing admissible k-word");
  }

  const Rat& value(const Word& window) const {
    auto it = table.find(window);
    if (it == table.end())
      throw invalid_input("locally constant function: window not in table");
    return it->second;
  }

  Rat min_value() const {
    Rat m = table.begin()->second;
    for (const auto& [w, v] : table) m = std::min(m, v);
    return m;
  }
  Rat max_value() const {
    Rat m = table.begin()->second;
    for (const auto& [w, v] : table) m = std::max(m, v);
    return m;
  }
  bool constant() const { return min_value() == max_value(); }
};

struct BirkhoffLevelSpec {
  LocallyConstantFunction g;
  Rat p;
  Rat eps;
  int M = 1;

  // generation of the cylinders the level set is a union of
  int level_generation() const { return M + g.k - 1; }

  void validate(const Subshift& S) const {
    g.validate(S);
    if (M < 1) throw invalid_input("birkhoff spec: M >= 1 required");
    if (eps <= 0) throw invalid_input("birkhoff spec: eps > 0 required");
  }
};

// The M-step Birkhoff average of g over the cylinder of w (|w| = M+k-1),
// where every average position is determined.
inline Rat birkhoff_average(const LocallyConstantFunction& g, const Word& w, int M) {
  if (static_cast<int>(w.size()) < M + g.k - 1)
    throw invalid_input("birkhoff_average: word too short for M averages");
  Rat sum(0);
  for (int j = 0; j < M; ++j)
    sum += g.value(Word(w.begin() + j, w.begin() + j + g.k));
  return sum / M;
}

// G_g(p,M,eps) as the exact antichain of (M+k-1)-cylinders whose average
// lies in the open interval (p-eps, p+eps).
inline CylinderSet birkhoff_set(const BirkhoffLevelSpec& spec, const Subshift& S,
                                std::uint64_t cap = kDefaultCylinderCap) {
  spec.validate(S);
  std::vector<Word> kept;
  for (const Word& w : enumerate_cylinders(spec.level_generation(), S, cap)) {
    Rat avg = birkhoff_average(spec.g, w, spec.M);
    if (spec.p - spec.eps < avg && avg < spec.p + spec.eps) kept.push_back(w);
  }
  return CylinderSet::canonical(std::move(kept));
}

namespace detail {

// Grid-cover DP for N^{m,t}(C cap G) normalized by d(C)^t, where G is an
// intersection of Birkhoff level sets. The normalized value of a node
// depends only on (level, last window symbols, exact partial sums of the
// still-undetermined specs), which keeps the state space polynomial in M
// where the explicit antichain would be exponential. Partial sums are held
// as integer count vectors over each g's distinct values; exact rational
// arithmetic only enters at the determination level.
class ClassDp {
 public:
  // concatenated value-count blocks of the still-undetermined specs
  using Counts = std::vector<int>;

  ClassDp(const GdmsSystem& G, std::vector<BirkhoffLevelSpec> specs, Quad t, int m)
      : G_(G), specs_(std::move(specs)), t_(t), m_(m) {
    if (!G.affine())
      throw unsupported_method("class scans require an affine system");
    if (m_ < 1) throw invalid_input("class scan: m >= 1 required");
    suffix_len_ = 1;
    for (const auto& sp : specs_) {
      sp.validate(G.shift());
      suffix_len_ = std::max(suffix_len_, std::max(1, sp.g.k - 1));
    }
    if (pressure_spectral(G_, t_).mid() <= 0)
      throw invalid_input("class scan: t must lie below the Bowen dimension");
    for (const auto& sp : specs_) {
      SpecMeta meta;
      for (const auto& [w, v] : sp.g.table) meta.vals.push_back(v);
      std::sort(meta.vals.begin(), meta.vals.end());
      meta.vals.erase(std::unique(meta.vals.begin(), meta.vals.end()), meta.vals.end());
      for (const auto& [w, v] : sp.g.table)
        meta.window_idx[w] = static_cast<int>(
            std::lower_bound(meta.vals.begin(), meta.vals.end(), v) - meta.vals.begin());
      meta_.push_back(std::move(meta));
    }
    compute_full_values();
  }

  // Normalized grid value of the whole cylinder (denominator of the ratio).
  Quad full_value(int last_symbol) const { return full_w_[last_symbol]; }

  // Normalized grid value of C cap G for the cylinder of `root`.
  Quad set_value(const Word& root) {
    if (root.empty() || !is_admissible(root, G_.shift()))
      throw invalid_input("class scan: root must be a nonempty admissible word");
    if (static_cast<int>(root.size()) % m_ != 0)
      throw invalid_input("class scan: root generation must be divisible by m");
    int level = static_cast<int>(root.size());
    Counts counts;
    bool failed = false;
    root_state(root, counts, failed);
    if (failed) return Quad(0);
    return eval(level, suffix_of(root), counts);
  }

  Quad ratio(const Word& root) {
    Quad den = full_value(root.back());
    if (den == 0) return Quad(0);
    return set_value(root) / den;
  }

  // Extends `root` to a word witnessing nonemptiness of C cap G, or returns
  // nullopt when the set misses the cylinder.
  std::optional<Word> witness(const Word& root) {
    if (set_value(root) == 0) return std::nullopt;
    Word w = root;
    Counts counts;
    bool failed = false;
    root_state(root, counts, failed);
    if (failed) return std::nullopt;
    int deepest = 0;
    for (const auto& sp : specs_) deepest = std::max(deepest, sp.level_generation());
    while (static_cast<int>(w.size()) < deepest) {
      bool advanced = false;
      for (const Word& c : children(w, G_.shift())) {
        Counts ccounts = counts;
        bool cfail = false;
        Word cw = w;
        append_symbol(cw, c.back(), ccounts, cfail);
        if (cfail) continue;
        if (viable(cw, ccounts)) {
          w = std::move(cw);
          counts = std::move(ccounts);
          advanced = true;
          break;
        }
      }
      if (!advanced) return std::nullopt;
    }
    return w;
  }

 private:
  struct SpecMeta {
    std::vector<Rat> vals;           // distinct g values, sorted
    std::map<Word, int> window_idx;  // k-word -> index into vals
  };

  const GdmsSystem& G_;
  std::vector<BirkhoffLevelSpec> specs_;
  Quad t_;
  int m_;
  int suffix_len_ = 1;
  struct KeyHash {
    std::size_t operator()(const std::tuple<int, Word, Counts>& k) const {
      std::size_t h = 1469598103934665603ull;
      auto mix = [&h](std::size_t v) {
        h ^= v;
        h *= 1099511628211ull;
      };
      mix(static_cast<std::size_t>(std::get<0>(k)));
      for (int s : std::get<1>(k)) mix(static_cast<std::size_t>(s) + 0x9e37);
      for (int c : std::get<2>(k)) mix(static_cast<std::size_t>(c) + 0x85eb);
      return h;
    }
  };

  std::vector<SpecMeta> meta_;
  std::vector<Quad> full_w_;
  std::map<Rat, Quad> pow_cache_;
  std::unordered_map<std::tuple<int, Word, Counts>, Quad, KeyHash> memo_;

  Quad powt(const Rat& r) {
    auto it = pow_cache_.find(r);
    if (it != pow_cache_.end()) return it->second;
    Quad v = pow_qt(r, t_);
    pow_cache_.emplace(r, v);
    return v;
  }

  Word suffix_of(const Word& w) const {
    int h = std::min<int>(suffix_len_, static_cast<int>(w.size()));
    return Word(w.end() - h, w.end());
  }

  // Some extension of the full word `w` (with undetermined counts) reaches a
  // positive-value grid node.
  bool viable(const Word& w, const Counts& counts) {
    int level = static_cast<int>(w.size());
    if (level % m_ == 0)
      return active_count(level) == 0 || eval(level, suffix_of(w), counts) > 0;
    for (const Word& c : children(w, G_.shift())) {
      Word cw = w;
      Counts cc = counts;
      bool cfail = false;
      append_symbol(cw, c.back(), cc, cfail);
      if (!cfail && viable(cw, cc)) return true;
    }
    return false;
  }

  // Number of specs still undetermined at `level`.
  int active_count(int level) const {
    int n = 0;
    for (const auto& sp : specs_)
      if (sp.level_generation() > level) ++n;
    return n;
  }

  // Core bookkeeping step shared by the full-word and suffix variants:
  // `window` must end with the freshly appended symbol and hold at least
  // max_k symbols of context (or the whole word when shorter). Sets `failed`
  // when a spec becomes determined with average outside the band; drops the
  // count block of a spec that determines as a pass.
  void step_counts(const Word& window, int old_level, Counts& counts,
                   bool& failed) const {
    int level = old_level + 1;
    std::size_t offset = 0;
    Counts next;
    for (std::size_t si = 0; si < specs_.size(); ++si) {
      const auto& sp = specs_[si];
      int L = sp.level_generation();
      if (L <= old_level) continue;  // already determined (and passed)
      std::size_t r = meta_[si].vals.size();
      std::size_t my = offset;
      offset += r;
      int pos = level - sp.g.k;  // average position completed by this symbol
      std::size_t base = next.size();
      next.insert(next.end(), counts.begin() + my, counts.begin() + my + r);
      if (pos >= 0 && pos <= sp.M - 1)
        ++next[base + meta_[si].window_idx.at(
                         Word(window.end() - sp.g.k, window.end()))];
      if (L == level) {
        Rat sum(0);
        for (std::size_t i = 0; i < r; ++i)
          sum += meta_[si].vals[i] * next[base + i];
        Rat avg = sum / sp.M;
        if (!(sp.p - sp.eps < avg && avg < sp.p + sp.eps)) failed = true;
        next.resize(base);  // determined: drop the block
      }
    }
    counts = std::move(next);
  }

  void append_symbol(Word& w, int sym, Counts& counts, bool& failed) const {
    int old_level = static_cast<int>(w.size());
    w.push_back(sym);
    step_counts(w, old_level, counts, failed);
  }

  void root_state(const Word& root, Counts& counts, bool& failed) const {
    counts.clear();
    for (const auto& m : meta_) counts.insert(counts.end(), m.vals.size(), 0);
    failed = false;
    Word w;
    for (int sym : root) {
      append_symbol(w, sym, counts, failed);
      if (failed) return;
    }
  }

  // Greatest fixpoint <= 1 of W_a = min(1, sum over m-step extensions of
  // ratio^t * W_end): the normalized grid value of a whole cylinder ending
  // in symbol a, with unbounded cover depth.
  void compute_full_values() {
    int q = G_.shift().alphabet_size();
    // m-step extension weights per start symbol
    std::vector<std::vector<std::pair<int, Quad>>> ext(q);
    for (int a = 0; a < q; ++a) {
      auto rec = [&](auto&& self, int last, int steps, const Rat& ratio) -> void {
        if (steps == m_) {
          ext[a].push_back({last, powt(ratio)});
          return;
        }
        for (int j = 0; j < q; ++j)
          if (G_.shift().allows(last, j))
            self(self, j, steps + 1, ratio * G_.edge_map(last, j).abs_scale());
      };
      rec(rec, a, 0, Rat(1));
    }
    full_w_.assign(q, Quad(1));
    for (int it = 0; it < 600; ++it) {
      Quad change(0);
      std::vector<Quad> next(q);
      for (int a = 0; a < q; ++a) {
        Quad sum(0);
        for (const auto& [end, wgt] : ext[a]) sum += wgt * full_w_[end];
        next[a] = std::min(Quad(1), sum);
        change = std::max(change, full_w_[a] - next[a]);
      }
      full_w_ = std::move(next);
      if (change == 0) break;
    }
  }

  Quad eval(int level, const Word& suffix, const Counts& counts) {
    if (active_count(level) == 0) return full_w_[suffix.back()];
    auto key = std::make_tuple(level, suffix, counts);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Quad total(0);
    auto rec = [&](auto&& self, const Word& sfx, const Counts& c, int steps,
                   const Rat& ratio) -> void {
      if (steps == m_) {
        Quad sub = eval(level + m_, suffix_of(sfx), c);
        if (sub != 0) total += powt(ratio) * sub;
        return;
      }
      for (int j = 0; j < G_.shift().alphabet_size(); ++j) {
        if (!G_.shift().allows(sfx.back(), j)) continue;
        Word nsfx = sfx;
        Counts nc = c;
        bool failed = false;
        nsfx.push_back(j);
        step_counts(nsfx, level + steps, nc, failed);
        if (failed) continue;
        // trim after the window lookups so the last k symbols stay available
        while (static_cast<int>(nsfx.size()) > suffix_len_ + 1)
          nsfx.erase(nsfx.begin());
        self(self, nsfx, nc, steps + 1, ratio * G_.edge_map(sfx.back(), j).abs_scale());
      }
    };
    rec(rec, suffix, counts, 0, Rat(1));
    Quad w = std::min(Quad(1), total);
    memo_.emplace(std::move(key), w);
    return w;
  }
};

}  // namespace detail

struct ClassTestReport {
  struct Entry {
    Word cylinder;
    int M = 0;
    Quad ratio{0};
  };
  std::vector<Entry> entries;
  Quad c_min{0};        // min ratio at the final M of the schedule
  bool trend_ok = true; // per cylinder, ratios non-decreasing in M up to 5% dips
  Quad floor{0};
  bool pass = false;
};

// Grid-measure ratio N^{m,t}(C cap G_g(p,M,eps)) / N^{m,t}(C) for every
// cylinder C of generation jm <= gen_max and every M in the schedule.
inline ClassTestReport class_inequality_scan(const GdmsSystem& G,
                                             const LocallyConstantFunction& g,
                                             const Rat& p, const Rat& eps, const Quad& t,
                                             int m, const std::vector<int>& M_schedule,
                                             int gen_max, const Quad& floor = Quad(0),
                                             std::uint64_t cap = kDefaultCylinderCap) {
  if (M_schedule.empty()) throw invalid_input("class scan: empty M schedule");
  for (std::size_t i = 0; i + 1 < M_schedule.size(); ++i)
    if (M_schedule[i] >= M_schedule[i + 1])
      throw invalid_input("class scan: M schedule must be increasing");
  if (G.affine()) {
    PressureEstimate ps = pressure_spectral(G, t);
    if (ps.mid() <= 0)
      throw invalid_input("class scan: t must lie below the Bowen dimension");
  }
  ClassTestReport rep;
  rep.floor = floor;
  std::vector<Word> roots;
  for (int gen = m; gen <= gen_max; gen += m)
    for (const Word& w : enumerate_cylinders(gen, G.shift(), cap)) roots.push_back(w);
  bool first_min = true;
  for (int M : M_schedule) {
    BirkhoffLevelSpec spec{g, p, eps, M};
    detail::ClassDp dp(G, {spec}, t, m);
    for (const Word& C : roots) {
      Quad r = dp.ratio(C);
      rep.entries.push_back({C, M, r});
      if (M == M_schedule.back() && (first_min || r < rep.c_min)) {
        rep.c_min = r;
        first_min = false;
      }
    }
  }
  // trend per cylinder across the schedule
  for (const Word& C : roots) {
    Quad prev{-1};
    for (int M : M_schedule) {
      for (const auto& e : rep.entries)
        if (e.cylinder == C && e.M == M) {
          if (prev >= 0 && e.ratio < prev * Quad("0.95")) rep.trend_ok = false;
          prev = e.ratio;
        }
    }
  }
  rep.pass = rep.c_min >= floor && rep.c_min > 0;
  return rep;
}

struct MembershipVerdict {
  bool hypothesis_holds = false;
  Quad c_achieved{0};  // min over cylinders of (max over the schedule of the ratio)
  std::string note;
};

// Finite hypothesis of the nested-union class-membership lemma: along the
// schedule, limsup_M M^t(G_g(p,M,eps) cap C) >= c * M^t(C) for every scanned
// cylinder C. Asymptotic class membership of the full level set follows from
// the lemma and is not verified here.
inline MembershipVerdict nested_union_membership(const GdmsSystem& G,
                                                 const LocallyConstantFunction& g,
                                                 const Rat& p, const Rat& eps, const Quad& t,
                                                 const std::vector<int>& M_schedule,
                                                 int gen_max, const Quad& floor = Quad(0)) {
  ClassTestReport scan =
      class_inequality_scan(G, g, p, eps, t, 1, M_schedule, gen_max, floor);
  MembershipVerdict v;
  bool first = true;
  std::map<Word, Quad> best;
  for (const auto& e : scan.entries) {
    auto it = best.find(e.cylinder);
    if (it == best.end() || e.ratio > it->second) best[e.cylinder] = e.ratio;
  }
  for (const auto& [C, r] : best) {
    if (first || r < v.c_achieved) v.c_achieved = r;
    first = false;
  }
  v.hypothesis_holds = !first && v.c_achieved > floor;
  v.note = "finite-stage hypothesis only; class membership of the asymptotic level "
           "set follows from the nested-union lemma";
  return v;
}

struct IntersectionReport {
  struct Entry {
    Word cylinder;
    Quad intersection_ratio{0};
    Quad min_single_ratio{0};
  };
  bool nonempty = false;
  Word witness;
  std::vector<Entry> entries;
  Quad worst_factor{1};  // max over entries of min_single / intersection
};

// Finite-stage surrogate for countable intersections of the class: level
// specs at strictly separated scales, intersected exactly.
inline IntersectionReport intersection_surrogate(const GdmsSystem& G,
                                                 std::vector<BirkhoffLevelSpec> specs,
                                                 const Quad& t, int m, int gen_max,
                                                 std::uint64_t cap = kDefaultCylinderCap) {
  if (specs.size() < 2) throw invalid_input("intersection surrogate: need >= 2 specs");
  std::sort(specs.begin(), specs.end(),
            [](const auto& a, const auto& b) { return a.M < b.M; });
  for (std::size_t i = 0; i + 1 < specs.size(); ++i) {
    if (specs[i].M == specs[i + 1].M && specs[i].p != specs[i + 1].p)
      throw invalid_input("intersection surrogate: same-scale specs with distinct "
                          "targets are disjoint by construction");
    if (specs[i + 1].M < 10 * specs[i].M)
      throw invalid_input("intersection surrogate: scales must be separated "
                          "(M_{i+1} >= 10 M_i)");
  }
  IntersectionReport rep;
  detail::ClassDp joint(G, specs, t, m);
  std::vector<detail::ClassDp> singles;
  for (const auto& sp : specs) singles.emplace_back(G, std::vector{sp}, t, m);
  bool first = true;
  for (int gen = m; gen <= gen_max; gen += m) {
    for (const Word& C : enumerate_cylinders(gen, G.shift(), cap)) {
      IntersectionReport::Entry e;
      e.cylinder = C;
      e.intersection_ratio = joint.ratio(C);
      bool sfirst = true;
      for (auto& s : singles) {
        Quad r = s.ratio(C);
        if (sfirst || r < e.min_single_ratio) e.min_single_ratio = r;
        sfirst = false;
      }
      if (e.intersection_ratio > 0) {
        Quad f = e.min_single_ratio / e.intersection_ratio;
        if (first || f > rep.worst_factor) rep.worst_factor = f;
        first = false;
      }
      rep.entries.push_back(std::move(e));
    }
  }
  Word root = enumerate_cylinders(m, G.shift(), cap).front();
  if (auto w = joint.witness(root)) {
    rep.nonempty = true;
    rep.witness = *w;
  } else {
    for (int gen = m; gen <= gen_max && !rep.nonempty; gen += m)
      for (const Word& C : enumerate_cylinders(gen, G.shift(), cap))
        if (auto w2 = joint.witness(C)) {
          rep.nonempty = true;
          rep.witness = *w2;
          break;
        }
  }
  return rep;
}

// Exact attainable range of asymptotic Birkhoff averages of g (window <= 2)
// via min/max mean cycles of the transition graph (Karp).
inline std::pair<Rat, Rat> attainable_average_range(const Subshift& S,
                                                    const LocallyConstantFunction& g) {
  if (g.k > 2)
    throw unsupported_method("attainable range: window <= 2 required");
  int q = S.alphabet_size();
  auto edge_value = [&](int i, int j) {
    return g.k == 1 ? g.value({j}) : g.value({i, j});
  };
  auto mean_cycle = [&](bool maximize) {
    // Karp: D[n][v] = best weight of an n-edge path ending at v
    const Rat none(-1000000007);
    std::vector<std::vector<Rat>> D(q + 1, std::vector<Rat>(q, none));
    for (int v = 0; v < q; ++v) D[0][v] = Rat(0);
    for (int n = 1; n <= q; ++n)
      for (int i = 0; i < q; ++i) {
        if (D[n - 1][i] == none) continue;
        for (int j = 0; j < q; ++j) {
          if (!S.allows(i, j)) continue;
          Rat w = edge_value(i, j);
          if (!maximize) w = -w;
          Rat cand = D[n - 1][i] + w;
          if (D[n][j] == none || cand > D[n][j]) D[n][j] = cand;
        }
      }
    bool first = true;
    Rat best(0);
    for (int v = 0; v < q; ++v) {
      if (D[q][v] == none) continue;
      bool ffirst = true;
      Rat inner(0);
      for (int n = 0; n < q; ++n) {
        if (D[n][v] == none) continue;
        Rat ratio = (D[q][v] - D[n][v]) / (q - n);
        if (ffirst || ratio < inner) inner = ratio;
        ffirst = false;
      }
      if (ffirst) continue;
      if (first || inner > best) best = inner;
      first = false;
    }
    if (first) throw internal_error("mean cycle: no cycle found");
    return maximize ? best : -best;
  };
  return {mean_cycle(false), mean_cycle(true)};
}

struct LevelSetDimension {
  Quad value{0};
  Quad lo{0}, hi{0};
  Quad q_star{0};  // minimizing Gibbs parameter
};

// dim of the Birkhoff level set {average of g = p}: inf over q of s(q,p)
// where s(q,p) solves log rho(B(q,s)) = q*p with
// B(q,s)[i][j] = A_ij exp(q*g(ij)) r_ij^s. The map q -> s(q,p) is convex
// with the level-set dimension as its minimum.
inline LevelSetDimension level_set_dimension(const GdmsSystem& G,
                                             const LocallyConstantFunction& g,
                                             const Rat& p) {
  if (!G.affine())
    throw unsupported_method("level_set_dimension: affine systems only");
  if (g.k > 2)
    throw unsupported_method("level_set_dimension: window <= 2 required");
  g.validate(G.shift());
  auto [pmin, pmax] = attainable_average_range(G.shift(), g);
  if (p < pmin || p > pmax)
    throw invalid_input("level_set_dimension: p outside the attainable range");
  if (p == pmin || p == pmax) return {Quad(0), Quad(0), Quad(0), Quad(0)};

  int q_sym = G.shift().alphabet_size();
  Quad pq = to_quad(p);
  auto s_of_q = [&](const Quad& qpar) {
    auto F = [&](const Quad& s) {
      std::vector<std::vector<Quad>> B(q_sym, std::vector<Quad>(q_sym, Quad(0)));
      for (int i = 0; i < q_sym; ++i)
        for (int j = 0; j < q_sym; ++j) {
          if (!G.shift().allows(i, j)) continue;
          Rat gv = g.k == 1 ? g.value({j}) : g.value({i, j});
          B[i][j] = exp(qpar * to_quad(gv)) *
                    pow_qt(G.edge_map(i, j).abs_scale(), s);
        }
      auto [lo, hi] = detail::log_spectral_radius(std::move(B), Quad("1e-15"));
      return (lo + hi) / 2 - qpar * pq;
    };
    Quad lo(0), hi(4);
    if (F(lo) <= 0) return Quad(0);
    while (F(hi) > 0) {
      lo = hi;
      hi *= 2;
      if (hi > Quad(1000000))
        throw internal_error("level_set_dimension: root bracket ran away");
    }
    for (int it = 0; it < 60; ++it) {
      Quad mid = (lo + hi) / 2;
      (F(mid) > 0 ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
  };
  // convex minimization over the Gibbs parameter (golden section)
  Rat range = g.max_value() - g.min_value();
  Quad span = Quad(80) / std::max(to_quad(range), Quad("0.01"));
  Quad qa = -span, qb = span;
  const Quad inv_phi = (sqrt(Quad(5)) - 1) / 2;
  Quad q1 = qb - inv_phi * (qb - qa), q2 = qa + inv_phi * (qb - qa);
  Quad f1 = s_of_q(q1), f2 = s_of_q(q2);
  for (int it = 0; it < 75; ++it) {
    if (f1 <= f2) {
      qb = q2;
      q2 = q1;
      f2 = f1;
      q1 = qb - inv_phi * (qb - qa);
      f1 = s_of_q(q1);
    } else {
      qa = q1;
      q1 = q2;
      f1 = f2;
      q2 = qa + inv_phi * (qb - qa);
      f2 = s_of_q(q2);
    }
  }
  LevelSetDimension out;
  out.q_star = (qa + qb) / 2;
  out.value = s_of_q(out.q_star);
  out.lo = out.value - Quad("1e-8");
  out.hi = out.value + Quad("1e-8");
  return out;
}

// Two distinct averages whose level sets have dimension above s* - delta,
// straddling the full-dimension average.
inline std::pair<Rat, Rat> full_dimension_pair(const GdmsSystem& G,
                                               const LocallyConstantFunction& g,
                                               const Quad& delta) {
  if (g.constant())
    throw invalid_input("full_dimension_pair: g must be non-constant");
  Quad s_star = bowen_dimension(G).value;
  auto [pmin, pmax] = attainable_average_range(G.shift(), g);
  Quad cut = s_star - delta;
  // scan a grid strictly inside the attainable interval
  const int grid = 40;
  Rat step = (pmax - pmin) / grid;
  std::vector<std::pair<Rat, Quad>> vals;
  for (int i = 1; i < grid; ++i) {
    Rat p = pmin + step * i;
    vals.push_back({p, level_set_dimension(G, g, p).value});
  }
  // peak position, then the farthest straddling grid points above the cut
  std::size_t peak = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i].second > vals[peak].second) peak = i;
  std::optional<Rat> p1, p2;
  for (std::size_t i = 0; i <= peak; ++i)
    if (vals[i].second > cut) {
      p1 = vals[i].first;
      break;
    }
  for (std::size_t i = vals.size(); i-- > peak;)
    if (vals[i].second > cut) {
      p2 = vals[i].first;
      break;
    }
  if (!p1 || !p2 || *p1 == *p2)
    throw invalid_input("full_dimension_pair: delta too small for the scan grid");
  return {*p1, *p2};
}

}  // namespace gdms
