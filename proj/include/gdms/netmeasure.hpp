#pragma once

#include <random>

#include "gdms/geometry.hpp"

namespace gdms {

// Cover target: WHOLE cylinder of the root, or a finite union of cylinders
// (all descending from the root).
struct Target {
  bool whole = false;
  CylinderSet set;

  static Target all() {
    Target t;
    t.whole = true;
    return t;
  }
  static Target of(CylinderSet s) {
    Target t;
    t.set = std::move(s);
    return t;
  }
};

struct NetMeasureResult {
  Quad t{0};
  Quad v_lo{0}, v_hi{0};  // equal for affine systems
  CylinderSet cover;      // arg-min cover (from the upper-value run)
  int budget = 0;
  int frontier = 0;  // generation at which the recursion is cut
  bool budget_stable = true;
  bool certified = true;

  Quad value() const { return v_hi; }
};

namespace detail {

enum class Relation { disjoint, covered, partial };

inline Relation classify(const Word& w, const Target& target) {
  if (target.whole) return Relation::covered;
  bool meets = false;
  for (const Word& tw : target.set.words()) {
    if (is_prefix(tw, w)) return Relation::covered;
    if (is_prefix(w, tw)) meets = true;
  }
  return meets ? Relation::partial : Relation::disjoint;
}

struct NetDp {
  const GdmsSystem& G;
  Quad t;
  const Target& target;
  int frontier;
  int step;
  bool upper;  // d_hi (upper value) vs d_lo; identical for affine systems
  // affine 1D: diameter = |scale| * |X|, carried down the recursion exactly
  bool fast = false;
  Rat width{0};
  mutable std::map<Rat, Quad> pow_cache;

  void init_fast() {
    fast = G.affine() && !G.space().planar;
    if (fast) width = G.space().interval.hi - G.space().interval.lo;
  }

  Rat root_scale(const Word& w) const {
    return w.empty() ? Rat(1) : compose_along(w, G).abs_scale();
  }

  Quad dval(const Word& w, const Rat& scale) const {
    if (fast) {
      Rat d = scale * width;
      auto it = pow_cache.find(d);
      if (it != pow_cache.end()) return it->second;
      Quad v = pow_qt(to_quad(d), t);
      pow_cache.emplace(d, v);
      return v;
    }
    CylinderGeometry g = cylinder_diameter(w, G);
    return pow_qt(upper ? g.d_hi : g.d_lo, t);
  }

  Rat edge_abs_scale(const Word& w, int sym) const {
    const ContractionMap& m = w.empty() ? G.vertex_map(sym) : G.edge_map(w.back(), sym);
    return m.scale < 0 ? Rat(-m.scale) : m.scale;
  }

  void descendants(const Word& w, const Rat& scale, int depth,
                   std::vector<std::pair<Word, Rat>>& out) const {
    if (depth == 0) {
      out.emplace_back(w, scale);
      return;
    }
    for (const Word& c : children(w, G.shift())) {
      Rat cs = fast ? scale * edge_abs_scale(w, c.back()) : scale;
      descendants(c, cs, depth - 1, out);
    }
  }

  // V(C) = 0 if C disjoint from target; else min(d(C)^t, sum over children),
  // cut at the frontier where V = d(C)^t. Ties resolve to the self-cover.
  // `live` holds the target words strictly below w (only used when partial).
  Quad run(const Word& w, const Rat& scale, Relation rel,
           const std::vector<const Word*>& live, std::vector<Word>* cover) const {
    if (rel == Relation::disjoint) return Quad(0);
    int gen = static_cast<int>(w.size());
    bool self_allowed = !w.empty();
    if (gen >= frontier) {
      if (rel == Relation::partial || !self_allowed)
        throw internal_error("net measure: frontier reached on a partial node");
      if (cover) cover->push_back(w);
      return dval(w, scale);
    }
    std::vector<std::pair<Word, Rat>> kids;
    descendants(w, scale, step, kids);
    Quad sum(0);
    std::vector<Word> sub_cover;
    static const std::vector<const Word*> kNone;
    for (const auto& [c, cs] : kids) {
      Relation crel = Relation::covered;
      std::vector<const Word*> clive;
      if (rel == Relation::partial) {
        crel = Relation::disjoint;
        for (const Word* tw : live) {
          if (is_prefix(*tw, c)) {
            crel = Relation::covered;
            clive.clear();
            break;
          }
          if (is_prefix(c, *tw)) {
            crel = Relation::partial;
            clive.push_back(tw);
          }
        }
      }
      sum += run(c, cs, crel, crel == Relation::partial ? clive : kNone,
                 cover ? &sub_cover : nullptr);
    }
    if (self_allowed) {
      Quad self = dval(w, scale);
      if (self <= sum) {
        if (cover) cover->push_back(w);
        return self;
      }
    }
    if (cover) cover->insert(cover->end(), sub_cover.begin(), sub_cover.end());
    return sum;
  }
};

inline NetMeasureResult net_measure_impl(const GdmsSystem& G, const Quad& t,
                                         const Word& root, const Target& target,
                                         int budget, int step, bool check_stability) {
  if (budget < 0) throw invalid_budget("net measure: negative budget");
  if (!root.empty() && !is_admissible(root, G.shift()))
    throw invalid_input("net measure: inadmissible root");
  int root_gen = static_cast<int>(root.size());
  if (step > 1 && root_gen % step != 0)
    throw invalid_input("grid net measure: root generation must be divisible by m");
  int deepest = root_gen;
  if (!target.whole) {
    for (const Word& tw : target.set.words()) {
      if (!is_admissible(tw, G.shift()))
        throw invalid_input("net measure: inadmissible target word");
      if (!is_prefix(root, tw))
        throw invalid_input("net measure: target word does not descend from root");
      deepest = std::max(deepest, static_cast<int>(tw.size()));
    }
  }
  int frontier = deepest + budget * step;
  if (step > 1 && frontier % step != 0) frontier += step - frontier % step;
  if (frontier < deepest)
    throw invalid_budget("net measure: frontier above deepest target word");

  NetMeasureResult res;
  res.t = t;
  res.budget = budget;
  res.frontier = frontier;
  res.certified = G.certified();

  Relation rel = root.empty() && target.whole ? Relation::covered
                                              : classify(root, target);
  if (!target.whole && target.set.empty()) rel = Relation::disjoint;
  std::vector<const Word*> live;
  if (rel == Relation::partial)
    for (const Word& tw : target.set.words())
      if (is_prefix(root, tw) && tw.size() > root.size()) live.push_back(&tw);

  std::vector<Word> cover_words;
  detail::NetDp hi{G, t, target, frontier, step, /*upper=*/true};
  hi.init_fast();
  Rat rscale = hi.root_scale(root);
  res.v_hi = hi.run(root, rscale, rel, live, &cover_words);
  res.cover = CylinderSet::canonical(std::move(cover_words));
  if (G.affine()) {
    res.v_lo = res.v_hi;
  } else {
    detail::NetDp lo{G, t, target, frontier, step, /*upper=*/false};
    lo.init_fast();
    res.v_lo = lo.run(root, rscale, rel, live, nullptr);
  }

  if (check_stability) {
    detail::NetDp deeper{G, t, target, frontier + step, step, /*upper=*/true};
    deeper.init_fast();
    res.budget_stable = (deeper.run(root, rscale, rel, live, nullptr) == res.v_hi);
  }
  return res;
}

}  // namespace detail

// M_infty^t of `target` inside the cylinder of `root`, by minimizing tree DP
// over covers of all generations up to the budget frontier. Equals the true
// infimum when the budget is at least m(t) (refining past the frontier is
// non-improving once generation-n partition sums exceed 1).
inline NetMeasureResult net_measure(const GdmsSystem& G, const Quad& t, const Word& root,
                                    const Target& target, int budget,
                                    bool check_stability = false) {
  return detail::net_measure_impl(G, t, root, target, budget, 1, check_stability);
}

// Root = whole symbol space; covers by cylinders of generation >= 1.
inline NetMeasureResult net_measure_global(const GdmsSystem& G, const Quad& t,
                                           const Target& target, int budget,
                                           bool check_stability = false) {
  return detail::net_measure_impl(G, t, Word{}, target, budget, 1, check_stability);
}

// N_infty^{m,t}: covers restricted to cylinders of generation k*m.
inline NetMeasureResult grid_net_measure(const GdmsSystem& G, const Quad& t, int m,
                                         const Word& root, const Target& target,
                                         int budget_steps, bool check_stability = false) {
  if (m < 1) throw invalid_input("grid net measure: m >= 1 required");
  return detail::net_measure_impl(G, t, root, target, budget_steps, m, check_stability);
}

inline NetMeasureResult grid_net_measure_global(const GdmsSystem& G, const Quad& t, int m,
                                                const Target& target, int budget_steps) {
  return detail::net_measure_impl(G, t, Word{}, target, budget_steps, m, false);
}

struct EquivalenceReport {
  Quad c1{1};           // empirical max of N / M
  std::size_t samples = 0;
  bool all_ordered = true;  // M <= N held on every sample
};

// Empirical equivalence constant between M_infty^t and N_infty^{m,t} over
// random antichain targets.
inline EquivalenceReport equivalence_constant(const GdmsSystem& G, const Quad& t, int m,
                                              int sample_depth, int budget,
                                              int n_samples = 50,
                                              std::uint64_t seed = 2024) {
  std::mt19937_64 rng(seed);
  EquivalenceReport rep;
  auto random_target = [&]() {
    std::vector<Word> words;
    auto rec = [&](auto&& self, const Word& w) -> void {
      if (static_cast<int>(w.size()) >= sample_depth) {
        words.push_back(w);
        return;
      }
      switch (rng() % 3) {
        case 0:
          if (!w.empty()) {
            words.push_back(w);
            break;
          }
          [[fallthrough]];
        case 1:
          for (const Word& c : children(w, G.shift()))
            if (rng() % 2 == 0) self(self, c);
          break;
        default:
          break;
      }
    };
    rec(rec, Word{});
    return CylinderSet::canonical(std::move(words));
  };
  for (int k = 0; k < n_samples; ++k) {
    CylinderSet cs = random_target();
    if (cs.empty()) continue;
    Target target = Target::of(cs);
    Quad M = net_measure_global(G, t, target, budget * m).value();
    Quad N = grid_net_measure_global(G, t, m, target, budget).value();
    if (M == 0) continue;
    ++rep.samples;
    if (N < M) rep.all_ordered = false;
    rep.c1 = std::max(rep.c1, N / M);
  }
  return rep;
}

struct OpenSetInequalityReport {
  bool hypothesis_holds = true;  // per-cylinder inequality on U's antichain
  bool conclusion_holds = true;  // the same inequality for the union
  Quad min_cylinder_ratio{1};
};

// Checks that M(F cap C) >= c * M(C) on every C in the antichain of U implies
// M(F cap U) >= c * M(U).
inline OpenSetInequalityReport open_set_inequality_check(const GdmsSystem& G,
                                                         const CylinderSet& F,
                                                         const CylinderSet& U, const Quad& t,
                                                         const Quad& c, int budget) {
  OpenSetInequalityReport rep;
  bool first = true;
  for (const Word& C : U.words()) {
    CylinderSet cap = antichain_intersect(F, CylinderSet::single(C));
    Quad num = net_measure(G, t, C, Target::of(cap), budget).value();
    Quad den = net_measure(G, t, C, Target::all(), budget).value();
    if (den == 0) continue;
    Quad ratio = num / den;
    if (first || ratio < rep.min_cylinder_ratio) rep.min_cylinder_ratio = ratio;
    first = false;
    if (num < c * den) rep.hypothesis_holds = false;
  }
  CylinderSet inter = antichain_intersect(F, U);
  Quad num = net_measure_global(G, t, Target::of(inter), budget).value();
  Quad den = net_measure_global(G, t, Target::of(U), budget).value();
  rep.conclusion_holds = (num >= c * den);
  return rep;
}

}  // namespace gdms
