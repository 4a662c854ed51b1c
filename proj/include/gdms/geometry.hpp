#pragma once

#include <complex>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "gdms/numeric.hpp"
#include "gdms/subshift.hpp"

namespace gdms {

struct Interval {
  Rat lo, hi;
  Rat length() const { return hi - lo; }
};

struct Box {
  double re_lo, re_hi, im_lo, im_hi;
};

// The ambient compact set X: a real interval (certified, exact arithmetic)
// or a finite union of planar boxes (numeric, for Julia systems).
struct BaseSpace {
  bool planar = false;
  Interval interval{Rat(0), Rat(1)};
  std::vector<Box> boxes;
  bool certified = true;

  Rat diameter_rat() const {
    if (planar) throw unsupported_method("diameter_rat: planar base space");
    return interval.length();
  }

  Quad diameter() const {
    if (!planar) return to_quad(interval.length());
    double re_lo = 1e300, re_hi = -1e300, im_lo = 1e300, im_hi = -1e300;
    for (const Box& b : boxes) {
      re_lo = std::min(re_lo, b.re_lo);
      re_hi = std::max(re_hi, b.re_hi);
      im_lo = std::min(im_lo, b.im_lo);
      im_hi = std::max(im_hi, b.im_hi);
    }
    double dre = re_hi - re_lo, dim = im_hi - im_lo;
    return Quad(std::sqrt(dre * dre + dim * dim));
  }
};

struct ContractionMap {
  enum class Kind { affine1d, complex_affine, julia_branch };
  Kind kind = Kind::affine1d;

  // affine1d: x -> scale*x + offset
  Rat scale{0}, offset{0};
  // complex_affine: z -> cscale*z + coffset
  std::complex<double> cscale{0, 0}, coffset{0, 0};
  // julia_branch: z -> sign * sqrt(z - c), principal square root
  std::complex<double> julia_c{0, 0};
  int branch_sign = 1;

  // derivative-norm bracket over X
  Quad rho_lo{0}, rho_hi{0};

  bool affine() const { return kind == Kind::affine1d; }

  static ContractionMap make_affine(Rat s, Rat o) {
    ContractionMap m;
    m.kind = Kind::affine1d;
    m.scale = std::move(s);
    m.offset = std::move(o);
    Rat a = m.scale < 0 ? Rat(-m.scale) : m.scale;
    m.rho_lo = m.rho_hi = to_quad(a);
    return m;
  }

  static ContractionMap make_julia(std::complex<double> c, int sign, Quad rho_lo,
                                   Quad rho_hi) {
    ContractionMap m;
    m.kind = Kind::julia_branch;
    m.julia_c = c;
    m.branch_sign = sign;
    m.rho_lo = rho_lo;
    m.rho_hi = rho_hi;
    return m;
  }

  Rat abs_scale() const { return scale < 0 ? Rat(-scale) : scale; }

  std::complex<double> apply(std::complex<double> z) const {
    switch (kind) {
      case Kind::affine1d:
        return std::complex<double>(static_cast<double>(scale) * z.real() +
                                        static_cast<double>(offset),
                                    0.0);
      case Kind::complex_affine:
        return cscale * z + coffset;
      case Kind::julia_branch: {
        std::complex<double> w = std::sqrt(z - julia_c);
        return branch_sign >= 0 ? w : -w;
      }
    }
    return z;
  }

  // |g'| at the preimage point for julia branches: g'(z) = 1/(2 g(z)).
  double derivative_norm_at(std::complex<double> z) const {
    switch (kind) {
      case Kind::affine1d:
        return std::abs(static_cast<double>(scale));
      case Kind::complex_affine:
        return std::abs(cscale);
      case Kind::julia_branch:
        return 1.0 / (2.0 * std::abs(apply(z)));
    }
    return 0.0;
  }
};

// Conformal graph directed Markov system: subshift + one contraction per
// symbol + one per admissible edge, composed along admissible words as
// f_{i1} o f_{i1,i2} o ... o f_{i_{n-1},i_n}. Immutable after construction.
class GdmsSystem {
 public:
  GdmsSystem(Subshift shift, BaseSpace space, std::vector<ContractionMap> vertex_maps,
             std::map<std::pair<int, int>, ContractionMap> edge_maps, Rat lambda1,
             Rat lambda2, double holder_alpha, Quad kappa,
             std::vector<std::complex<double>> samples = {})
      : shift_(std::move(shift)),
        space_(std::move(space)),
        vertex_maps_(std::move(vertex_maps)),
        edge_maps_(std::move(edge_maps)),
        lambda1_(std::move(lambda1)),
        lambda2_(std::move(lambda2)),
        holder_alpha_(holder_alpha),
        kappa_(std::move(kappa)),
        samples_(std::move(samples)) {
    validate();
  }

  const Subshift& shift() const { return shift_; }
  const BaseSpace& space() const { return space_; }
  const Rat& lambda1() const { return lambda1_; }
  const Rat& lambda2() const { return lambda2_; }
  double holder_alpha() const { return holder_alpha_; }
  const Quad& kappa() const { return kappa_; }
  bool certified() const { return space_.certified; }
  const std::vector<std::complex<double>>& samples() const { return samples_; }

  const ContractionMap& vertex_map(int i) const { return vertex_maps_.at(i); }

  // Edge maps default to f_j when omitted.
  const ContractionMap& edge_map(int i, int j) const {
    auto it = edge_maps_.find({i, j});
    return it != edge_maps_.end() ? it->second : vertex_maps_.at(j);
  }

  bool affine() const {
    for (const auto& m : vertex_maps_)
      if (!m.affine()) return false;
    for (const auto& [k, m] : edge_maps_)
      if (!m.affine()) return false;
    return true;
  }

 private:
  void validate() const {
    if (static_cast<int>(vertex_maps_.size()) != shift_.alphabet_size())
      throw invalid_input("gdms: need one vertex map per symbol");
    if (!(Rat(0) < lambda1_ && lambda1_ < lambda2_ && lambda2_ < Rat(1)))
      throw invalid_input("gdms: assumption 'contraction' needs 0 < lambda1 < lambda2 < 1");
    Quad l1 = to_quad(lambda1_), l2 = to_quad(lambda2_);
    auto check_bracket = [&](const ContractionMap& m, const std::string& which) {
      if (!(l1 < m.rho_lo && m.rho_lo <= m.rho_hi && m.rho_hi < l2))
        throw invalid_input("gdms: assumption 'contraction' violated for " + which +
                            " (derivative bracket must lie strictly in (lambda1, lambda2))");
    };
    for (std::size_t i = 0; i < vertex_maps_.size(); ++i)
      check_bracket(vertex_maps_[i], "f_" + std::to_string(i));
    for (const auto& [e, m] : edge_maps_) {
      if (!shift_.allows(e.first, e.second))
        throw invalid_input("gdms: edge map on inadmissible edge");
      check_bracket(m, "f_" + std::to_string(e.first) + "," + std::to_string(e.second));
    }
    if (kappa_ < 1) throw invalid_input("gdms: distortion constant kappa must be >= 1");
    if (affine() && kappa_ != 1)
      throw invalid_input("gdms: affine systems have kappa = 1 exactly");
    if (!space_.planar && space_.interval.length() <= 0)
      throw invalid_input("gdms: degenerate base interval");
  }

  Subshift shift_;
  BaseSpace space_;
  std::vector<ContractionMap> vertex_maps_;
  std::map<std::pair<int, int>, ContractionMap> edge_maps_;
  Rat lambda1_, lambda2_;
  double holder_alpha_;
  Quad kappa_;
  std::vector<std::complex<double>> samples_;
};

// Handle for f_{i1} o f_{i1,i2} o ... o f_{i_{n-1},i_n}.
struct ComposedMap {
  Word word;
  bool affine = true;
  Rat scale{1}, offset{0};  // affine composition, exact
  Quad rho_lo{1}, rho_hi{1};
  const GdmsSystem* system = nullptr;

  Rat abs_scale() const { return scale < 0 ? Rat(-scale) : scale; }

  Rat apply_exact(const Rat& x) const {
    if (!affine) throw unsupported_method("apply_exact: numeric composition");
    return scale * x + offset;
  }

  std::complex<double> apply(std::complex<double> z) const {
    // innermost map first
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      std::size_t pos = word.size() - 1 - (it - word.rbegin());
      const ContractionMap& m =
          pos == 0 ? system->vertex_map(word[0]) : system->edge_map(word[pos - 1], word[pos]);
      z = m.apply(z);
    }
    return z;
  }

  // Derivative-norm product along the composition at a sample point.
  double derivative_norm_at(std::complex<double> z) const {
    double prod = 1.0;
    for (std::size_t k = word.size(); k-- > 0;) {
      const ContractionMap& m =
          k == 0 ? system->vertex_map(word[0]) : system->edge_map(word[k - 1], word[k]);
      prod *= m.derivative_norm_at(z);
      z = m.apply(z);
    }
    return prod;
  }
};

inline ComposedMap compose_along(const Word& w, const GdmsSystem& G) {
  if (w.empty()) throw invalid_input("compose_along: empty word");
  if (!is_admissible(w, G.shift())) throw invalid_input("compose_along: inadmissible word");
  ComposedMap h;
  h.word = w;
  h.system = &G;
  h.affine = true;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const ContractionMap& m = k == 0 ? G.vertex_map(w[0]) : G.edge_map(w[k - 1], w[k]);
    if (!m.affine()) h.affine = false;
  }
  if (h.affine) {
    // left-to-right: acc := acc o next
    Rat s(1), o(0);
    for (std::size_t k = 0; k < w.size(); ++k) {
      const ContractionMap& m = k == 0 ? G.vertex_map(w[0]) : G.edge_map(w[k - 1], w[k]);
      o = s * m.offset + o;
      s = s * m.scale;
    }
    h.scale = s;
    h.offset = o;
    Rat a = s < 0 ? Rat(-s) : s;
    h.rho_lo = h.rho_hi = to_quad(a);
  } else {
    // sampled derivative extremes, widened by the distortion constant
    const auto& samples = G.samples();
    if (samples.empty()) throw internal_error("compose_along: numeric system without samples");
    double lo = 1e300, hi = 0.0;
    for (const auto& z : samples) {
      double d = h.derivative_norm_at(z);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    Quad qlo(lo), qhi(hi);
    h.rho_lo = std::min(qlo, qhi / G.kappa());
    h.rho_hi = std::max(qhi, qlo * G.kappa());
  }
  return h;
}

struct CylinderGeometry {
  Word word;
  Quad d_lo{0}, d_hi{0};
  std::optional<Rat> d_exact;     // affine 1D only
  std::optional<Interval> image;  // 1D only
  bool certified = true;
};

inline CylinderGeometry cylinder_diameter(const Word& w, const GdmsSystem& G) {
  ComposedMap h = compose_along(w, G);
  CylinderGeometry geo;
  geo.word = w;
  if (h.affine && !G.space().planar) {
    const Interval& X = G.space().interval;
    Rat a = h.apply_exact(X.lo), b = h.apply_exact(X.hi);
    if (a > b) std::swap(a, b);
    geo.image = Interval{a, b};
    geo.d_exact = b - a;
    geo.d_lo = geo.d_hi = to_quad(*geo.d_exact);
    geo.certified = G.certified();
    return geo;
  }
  // numeric: diameter of the mapped sample cloud is a lower bound; widen by
  // kappa, clamped to the contraction envelope lambda2^n * |X|
  const auto& samples = G.samples();
  std::vector<std::complex<double>> img;
  img.reserve(samples.size());
  for (const auto& z : samples) img.push_back(h.apply(z));
  double diam2 = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i)
    for (std::size_t j = i + 1; j < img.size(); ++j)
      diam2 = std::max(diam2, std::norm(img[i] - img[j]));
  Quad d_sample(std::sqrt(diam2));
  Quad envelope = pow_qt(to_quad(G.lambda2()), Quad(static_cast<long>(w.size()))) *
                  G.space().diameter();
  geo.d_hi = std::min(envelope, d_sample * G.kappa());
  // branch-seam splits can push the sampled diameter past the envelope;
  // the envelope stays authoritative and the bracket stays ordered
  geo.d_lo = std::min(d_sample, geo.d_hi);
  geo.certified = false;
  return geo;
}

struct OpenSetReport {
  bool pass = true;
  int generation = 1;
  Quad max_overlap{0};
  std::vector<std::pair<Word, Word>> violations;
  bool inherited_from_generation_one = false;
  // opposite-sign square-root branches land in opposite closed half-planes,
  // so image interiors are disjoint structurally (clouds may touch the seam)
  bool half_plane_separation = false;
};

inline OpenSetReport verify_open_set_condition(const GdmsSystem& G, int n,
                                               std::uint64_t cap = kDefaultCylinderCap) {
  OpenSetReport rep;
  rep.generation = n;
  if (!G.space().planar) {
    auto words = enumerate_cylinders(n, G.shift(), cap);
    std::vector<std::pair<Interval, Word>> imgs;
    for (const Word& w : words) {
      CylinderGeometry g = cylinder_diameter(w, G);
      imgs.push_back({*g.image, w});
    }
    std::sort(imgs.begin(), imgs.end(),
              [](const auto& a, const auto& b) { return a.first.lo < b.first.lo; });
    for (std::size_t i = 0; i + 1 < imgs.size(); ++i) {
      Rat overlap = imgs[i].first.hi - imgs[i + 1].first.lo;
      if (overlap > 0) {
        rep.pass = false;
        rep.max_overlap = std::max(rep.max_overlap, to_quad(overlap));
        if (rep.violations.size() < 8)
          rep.violations.push_back({imgs[i].second, imgs[i + 1].second});
      }
    }
    return rep;
  }
  // numeric planar: separate generation-1 sample clouds by a hyperplane;
  // deeper generations inherit (the branch maps are injective on X)
  rep.inherited_from_generation_one = n > 1;
  const auto& samples = G.samples();
  int q = G.shift().alphabet_size();
  if (q == 2 && G.vertex_map(0).kind == ContractionMap::Kind::julia_branch &&
      G.vertex_map(1).kind == ContractionMap::Kind::julia_branch &&
      G.vertex_map(0).julia_c == G.vertex_map(1).julia_c &&
      G.vertex_map(0).branch_sign * G.vertex_map(1).branch_sign == -1) {
    rep.half_plane_separation = true;
    return rep;
  }
  std::vector<std::vector<std::complex<double>>> clouds(q);
  for (int i = 0; i < q; ++i)
    for (const auto& z : samples) clouds[i].push_back(G.vertex_map(i).apply(z));
  const double tol = 1e-12;
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      std::complex<double> ca(0, 0), cb(0, 0);
      for (const auto& z : clouds[i]) ca += z;
      for (const auto& z : clouds[j]) cb += z;
      ca /= static_cast<double>(clouds[i].size());
      cb /= static_cast<double>(clouds[j].size());
      double best = 1e300;
      std::vector<std::complex<double>> dirs = {{1, 0}, {0, 1}, cb - ca};
      for (auto dir : dirs) {
        double len = std::abs(dir);
        if (len == 0) continue;
        dir /= len;
        double max_a = -1e300, min_b = 1e300;
        for (const auto& z : clouds[i])
          max_a = std::max(max_a, z.real() * dir.real() + z.imag() * dir.imag());
        for (const auto& z : clouds[j])
          min_b = std::min(min_b, z.real() * dir.real() + z.imag() * dir.imag());
        best = std::min(best, max_a - min_b);
      }
      if (best > tol) {
        rep.pass = false;
        rep.max_overlap = std::max(rep.max_overlap, Quad(best));
        if (rep.violations.size() < 8) rep.violations.push_back({{i}, {j}});
      }
    }
  }
  return rep;
}

struct KappaReport {
  Quad kappa{1};
  std::size_t sample_count = 0;
  bool certified = true;
};

inline KappaReport distortion_kappa(const GdmsSystem& G, int max_generation = 6,
                                    std::size_t words_per_generation = 16) {
  KappaReport rep;
  if (G.affine()) return rep;  // constant derivative per map
  rep.certified = false;
  const auto& samples = G.samples();
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  double worst = 1.0;
  for (int n = 1; n <= max_generation; ++n) {
    for (std::size_t k = 0; k < words_per_generation; ++k) {
      Word w;
      for (int step = 0; step < n; ++step) {
        std::vector<int> options;
        for (int j = 0; j < G.shift().alphabet_size(); ++j)
          if (w.empty() || G.shift().allows(w.back(), j)) options.push_back(j);
        w.push_back(options[rng() % options.size()]);
      }
      ComposedMap h = compose_along(w, G);
      double lo = 1e300, hi = 0.0;
      for (const auto& z : samples) {
        double d = h.derivative_norm_at(z);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        ++rep.sample_count;
      }
      if (lo > 0) worst = std::max(worst, hi / lo);
    }
  }
  rep.kappa = Quad(worst);
  return rep;
}

struct ProjectedPoint {
  bool planar = false;
  Rat x{0};
  std::complex<double> z{0, 0};
  Quad error_bound{0};
};

// A point of the generation-`depth` image cylinder extending `prefix`; within
// lambda2^depth * |X| of pi(i) for every extension i of the prefix.
inline ProjectedPoint project_point(const Word& prefix, int depth, const GdmsSystem& G) {
  if (prefix.empty() || depth < static_cast<int>(prefix.size()))
    throw invalid_input("project_point: need 1 <= |prefix| <= depth");
  Word w = prefix;
  while (static_cast<int>(w.size()) < depth) {
    int next = -1;
    for (int j = 0; j < G.shift().alphabet_size(); ++j)
      if (G.shift().allows(w.back(), j)) {
        next = j;
        break;
      }
    w.push_back(next);
  }
  ComposedMap h = compose_along(w, G);
  ProjectedPoint p;
  p.planar = G.space().planar;
  p.error_bound =
      pow_qt(to_quad(G.lambda2()), Quad(static_cast<long>(depth))) * G.space().diameter();
  if (!p.planar && h.affine) {
    Rat mid = (G.space().interval.lo + G.space().interval.hi) / 2;
    p.x = h.apply_exact(mid);
    p.z = {static_cast<double>(p.x), 0.0};
  } else {
    p.z = h.apply(G.samples().empty() ? std::complex<double>(0, 0) : G.samples().front());
  }
  return p;
}

// ---------------------------------------------------------------------------
// builders

inline GdmsSystem cantor_system() {
  std::vector<ContractionMap> maps = {
      ContractionMap::make_affine(Rat(1, 3), Rat(0)),
      ContractionMap::make_affine(Rat(1, 3), Rat(2, 3)),
  };
  return GdmsSystem(Subshift::full_shift(2), BaseSpace{}, std::move(maps), {}, Rat(1, 4),
                    Rat(1, 2), 1.0, Quad(1));
}

inline GdmsSystem golden_mean_system(Rat r0, Rat r1, Rat off0 = Rat(0),
                                     std::optional<Rat> off1 = std::nullopt) {
  if (r0 <= 0 || r1 <= 0 || r0 >= 1 || r1 >= 1)
    throw invalid_input("golden_mean_system: ratios must lie in (0,1)");
  Rat o1 = off1.value_or(Rat(1) - r1);
  std::vector<ContractionMap> maps = {
      ContractionMap::make_affine(r0, off0),
      ContractionMap::make_affine(r1, o1),
  };
  Rat lo = std::min(r0, r1), hi = std::max(r0, r1);
  GdmsSystem G(Subshift::golden_mean(), BaseSpace{}, std::move(maps), {}, lo / 2,
               (hi + 1) / 2, 1.0, Quad(1));
  OpenSetReport osc = verify_open_set_condition(G, 1);
  if (!osc.pass)
    throw invalid_input("golden_mean_system: assumption 'X' violated (overlapping images)");
  return G;
}

struct AffineMarkovConfig {
  int q = 2;
  std::vector<std::vector<bool>> A;
  std::vector<std::pair<Rat, Rat>> maps;  // (scale, offset) per symbol
  std::map<std::pair<int, int>, std::pair<Rat, Rat>> edge_maps;
  Interval space{Rat(0), Rat(1)};
  std::optional<Rat> lambda1, lambda2;
};

inline GdmsSystem affine_markov_system(const AffineMarkovConfig& cfg) {
  if (static_cast<int>(cfg.maps.size()) != cfg.q)
    throw invalid_input("affine_markov_system: need one map per symbol");
  std::vector<ContractionMap> maps;
  Rat lo(1), hi(0);
  for (const auto& [s, o] : cfg.maps) {
    Rat a = s < 0 ? Rat(-s) : s;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
    maps.push_back(ContractionMap::make_affine(s, o));
  }
  std::map<std::pair<int, int>, ContractionMap> edges;
  for (const auto& [e, so] : cfg.edge_maps) {
    Rat a = so.first < 0 ? Rat(-so.first) : so.first;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
    edges.emplace(e, ContractionMap::make_affine(so.first, so.second));
  }
  Rat l1 = cfg.lambda1.value_or(lo / 2);
  Rat l2 = cfg.lambda2.value_or((hi + 1) / 2);
  BaseSpace space;
  space.interval = cfg.space;
  GdmsSystem G(Subshift(cfg.q, cfg.A), space, std::move(maps), std::move(edges), l1, l2,
               1.0, Quad(1));
  OpenSetReport osc = verify_open_set_condition(G, 1);
  if (!osc.pass)
    throw invalid_input("affine_markov_system: assumption 'X' violated (overlapping images)");
  return G;
}

// Random transitive aperiodic affine Markov system; images land in disjoint
// slots [i/q, (i+1)/q) so the open set condition holds by construction.
inline GdmsSystem random_affine_markov(std::uint64_t seed, int q = 3) {
  if (q < 2) throw invalid_input("random_affine_markov: q >= 2 required");
  std::mt19937_64 rng(seed);
  AffineMarkovConfig cfg;
  cfg.q = q;
  cfg.A.assign(q, std::vector<bool>(q, false));
  for (int i = 0; i < q; ++i) cfg.A[i][(i + 1) % q] = true;  // cycle: transitivity
  cfg.A[0][0] = true;                                        // self-loop: aperiodicity
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (rng() % 2 == 0) cfg.A[i][j] = true;
  for (int i = 0; i < q; ++i) {
    long denom = 2 * q + static_cast<long>(rng() % static_cast<std::uint64_t>(2 * q));
    cfg.maps.push_back({Rat(1, denom), Rat(i, q)});
  }
  return affine_markov_system(cfg);
}

struct MarkovBranch {
  Rat dom_lo, dom_hi;  // branch domain
  Rat slope, intercept;  // expanding map t -> slope*t + intercept on the domain
};

// GDMS of inverse branches of a piecewise affine expanding Markov map.
inline GdmsSystem markov_interval_map_system(const std::vector<MarkovBranch>& branches) {
  if (branches.empty()) throw invalid_input("markov_interval_map_system: no branches");
  int q = static_cast<int>(branches.size());
  Rat x_lo(1), x_hi(0);
  std::vector<Interval> images;
  for (const auto& b : branches) {
    Rat a = b.slope < 0 ? Rat(-b.slope) : b.slope;
    if (a <= 1) throw invalid_input("markov_interval_map_system: branches must be expanding");
    Rat u = b.slope * b.dom_lo + b.intercept;
    Rat v = b.slope * b.dom_hi + b.intercept;
    if (u > v) std::swap(u, v);
    images.push_back({u, v});
    x_lo = std::min(x_lo, u);
    x_hi = std::max(x_hi, v);
  }
  std::vector<std::vector<bool>> A(q, std::vector<bool>(q, false));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      A[i][j] = images[i].lo <= branches[j].dom_lo && branches[j].dom_hi <= images[i].hi;
  AffineMarkovConfig cfg;
  cfg.q = q;
  cfg.A = A;
  cfg.space = {x_lo, x_hi};
  for (const auto& b : branches)
    cfg.maps.push_back({Rat(1) / b.slope, Rat(-b.intercept) / b.slope});
  return affine_markov_system(cfg);
}

// Inverse branches +-sqrt(z - c) of z^2 + c around a sampled Julia
// neighborhood. All quantities from this builder are non-certified.
inline GdmsSystem julia_system(std::complex<double> c, std::size_t sample_count = 1200,
                               std::uint64_t seed = 1234) {
  std::complex<double> beta = (1.0 + std::sqrt(std::complex<double>(1, 0) - 4.0 * c)) / 2.0;
  std::mt19937_64 rng(seed);
  std::vector<std::complex<double>> pts;
  std::complex<double> z = beta;
  for (std::size_t k = 0; k < sample_count + 200; ++k) {
    std::complex<double> w = std::sqrt(z - c);
    z = (rng() % 2 == 0) ? w : -w;
    if (k >= 200) pts.push_back(z);
  }
  double min_abs = 1e300, max_abs = 0.0;
  for (const auto& p : pts) {
    min_abs = std::min(min_abs, std::abs(p));
    max_abs = std::max(max_abs, std::abs(p));
  }
  if (2.0 * min_abs <= 1.05)
    throw invalid_input(
        "julia_system: assumption 'contraction' violated (|f'| not uniformly > 1 "
        "on the sampled Julia neighborhood)");
  // |g'| = 1/(2|w|) over sampled branch values, widened 10%
  Quad rho_lo = Quad(1.0 / (2.0 * max_abs) * 0.9);
  Quad rho_hi = Quad(1.0 / (2.0 * min_abs) * 1.1);
  Rat l1 = Rat(static_cast<long>(static_cast<double>(rho_lo) * 1e6 * 0.5), 1000000);
  Rat l2 = Rat(static_cast<long>(std::min(0.99, static_cast<double>(rho_hi) * 1.3) * 1e6),
               1000000);
  BaseSpace space;
  space.planar = true;
  space.certified = false;
  const double cell = 0.05, pad = 0.02;
  std::set<std::pair<long, long>> cells;
  for (const auto& p : pts)
    cells.insert({static_cast<long>(std::floor(p.real() / cell)),
                  static_cast<long>(std::floor(p.imag() / cell))});
  for (const auto& [cx, cy] : cells)
    space.boxes.push_back({cx * cell - pad, (cx + 1) * cell + pad, cy * cell - pad,
                           (cy + 1) * cell + pad});
  std::vector<ContractionMap> maps = {
      ContractionMap::make_julia(c, +1, rho_lo, rho_hi),
      ContractionMap::make_julia(c, -1, rho_lo, rho_hi),
  };
  GdmsSystem draft(Subshift::full_shift(2), space, maps, {}, l1, l2, 1.0, Quad(4), pts);
  KappaReport kr = distortion_kappa(draft);
  Quad kappa = kr.kappa * Quad("1.05");
  if (kappa < 1) kappa = Quad(1);
  return GdmsSystem(Subshift::full_shift(2), std::move(space), std::move(maps), {}, l1, l2,
                    1.0, kappa, std::move(pts));
}

}  // namespace gdms
