#pragma once

#include "gdms/classes.hpp"

namespace gdms {

// E_n: the 3^n + 1 closed intervals of radius 3^{-alpha n} around the
// triadic rationals p/3^n, clipped to [0,1].
struct ApproxIntervalSet {
  Rat alpha;  // exponent > 1
  int n = 1;

  ApproxIntervalSet(Rat a, int level) : alpha(std::move(a)), n(level) {
    if (alpha <= 1) throw invalid_input("approximation set: alpha > 1 required");
    if (n < 1) throw invalid_input("approximation set: n >= 1 required");
    v_ = boost::multiprecision::denominator(alpha);
    pow3_un_ = pow_int(3, static_cast<unsigned long>(boost::multiprecision::numerator(alpha) * n));
    pow3_nv_ = pow_int(3, static_cast<unsigned long>(Int(n) * v_));
    unit_exceeds_ = pow3_un_ > pow3_nv_;
  }

  Int interval_count() const { return pow_int(3, static_cast<unsigned long>(n)) + 1; }
  Rat center(const Int& p) const { return Rat(p, pow_int(3, static_cast<unsigned long>(n))); }

  // sign of x - 3^{-alpha n}, exact via integer powers (alpha = u/v):
  // x^v vs 3^{-un}, i.e. num^v * 3^{un} vs den^v
  int cmp_radius(const Rat& x) const {
    if (x <= 0) return -1;
    Int lhs = pow_int(boost::multiprecision::numerator(x), static_cast<unsigned long>(v_)) *
              pow3_un_;
    Int rhs = pow_int(boost::multiprecision::denominator(x), static_cast<unsigned long>(v_));
    return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
  }

  // sign of d/3^n - 3^{-alpha n} for integer d: d^v * 3^{un} vs 3^{nv}
  int cmp_radius_scaled(long long d) const {
    if (d <= 0) return -1;
    if (unit_exceeds_) return 1;  // d >= 1 and 3^{un} > 3^{nv} already
    Int lhs = pow_int(d, static_cast<unsigned long>(v_)) * pow3_un_;
    return lhs < pow3_nv_ ? -1 : lhs > pow3_nv_ ? 1 : 0;
  }

 private:
  Int v_, pow3_un_, pow3_nv_;
  bool unit_exceeds_ = false;
};

// F_n: the n-th construction stage of the middle-third Cantor set K, as
// generation-n words of the standard two-map system (symbol 1 <-> digit 2).
struct CantorStage {
  int n = 0;
  std::vector<Word> words;
};

inline CantorStage cantor_stage(int n) {
  if (n < 1) throw invalid_input("cantor_stage: n >= 1 required");
  if (n > 24) throw resource_limit("cantor_stage: n too large");
  CantorStage st;
  st.n = n;
  st.words = enumerate_cylinders(n, Subshift::full_shift(2));
  return st;
}

// Left endpoint of the interval of a Cantor word (digits 2*symbol).
inline Rat cantor_offset(const Word& w) {
  Rat o(0);
  Rat scale(1);
  for (int s : w) {
    scale /= 3;
    o += scale * (2 * s);
  }
  return o;
}

namespace detail {

// Exact distance from p/3^n to K, scaled by 3^n. Walk the base-3 digits to
// the first 1; the nearest Cantor points are the two gap endpoints there.
inline long long cantor_distance_scaled(long long p, int n,
                                        const std::vector<long long>& pow3) {
  if (p == pow3[n]) return 0;  // x = 1
  for (int i = 1; i <= n; ++i) {
    long long unit = pow3[n - i];
    int digit = static_cast<int>((p / unit) % 3);
    if (digit == 1) {
      long long rem = p % unit;
      return std::min(rem, unit - rem);
    }
  }
  return 0;
}

inline std::vector<long long> pow3_table(int n) {
  if (n > 16) throw resource_limit("triadic scan: n > 16 exceeds the center loop cap");
  std::vector<long long> pw(n + 1, 1);
  for (int i = 1; i <= n; ++i) pw[i] = 3 * pw[i - 1];
  return pw;
}

}  // namespace detail

// Exact count of E_n intervals meeting K. The radius 3^{-alpha n} is below
// the triadic grid for alpha > 1, so the count is the number of centers
// lying in K (the endpoints of F_n intervals); the comparison is still done
// exactly per center.
inline Int en_intersect_count(const Rat& alpha, int n) {
  ApproxIntervalSet E(alpha, n);
  auto pow3 = detail::pow3_table(n);
  Int count = 0;
  for (long long p = 0; p <= pow3[n]; ++p) {
    long long d = detail::cantor_distance_scaled(p, n, pow3);
    if (E.cmp_radius_scaled(d) <= 0) ++count;
  }
  return count;
}

// The finite-stage set K cap E_n as an antichain of Cantor cylinders of
// generation ceil(alpha n). Default semantics: cylinders contained in an E_n
// interval (an under-approximation keeping lower bounds honest); with
// `contained = false`, cylinders merely meeting one (outer envelope).
inline CylinderSet w_alpha_stage(const Rat& alpha, int n, bool contained = true,
                                 std::uint64_t cap = kDefaultCylinderCap) {
  ApproxIntervalSet E(alpha, n);
  Int u = boost::multiprecision::numerator(alpha) * n;
  Int v = boost::multiprecision::denominator(alpha);
  Int g_big = (u + v - 1) / v;
  if (g_big > 64) throw resource_limit("w_alpha_stage: stage generation above 64");
  int g = static_cast<int>(g_big);
  auto pow3 = detail::pow3_table(n);
  std::vector<Word> out;
  for (long long p = 0; p <= pow3[n]; ++p) {
    long long d = detail::cantor_distance_scaled(p, n, pow3);
    if (E.cmp_radius_scaled(d) > 0) continue;
    Rat c = Rat(p, pow3[n]);
    // descend the Cantor tree, pruning intervals missing [c - r, c + r]
    auto rec = [&](auto&& self, const Word& w, const Rat& o, const Rat& len) -> void {
      if (E.cmp_radius(o - c) > 0 || E.cmp_radius(c - o - len) > 0) return;  // disjoint
      if (static_cast<int>(w.size()) == g) {
        bool keep = contained
                        ? E.cmp_radius(c - o) <= 0 && E.cmp_radius(o + len - c) <= 0
                        : true;  // meets, by the prune above
        if (keep) {
          out.push_back(w);
          if (out.size() > cap) throw resource_limit("w_alpha_stage: cylinder cap");
        }
        return;
      }
      Rat clen = len / 3;
      Word w0 = w, w1 = w;
      w0.push_back(0);
      w1.push_back(1);
      self(self, w0, o, clen);
      self(self, w1, o + 2 * clen, clen);
    };
    rec(rec, {}, Rat(0), Rat(1));
  }
  return CylinderSet::canonical(std::move(out));
}

struct MassDistributionReport {
  // n_i <= n case: 3^{k t} <= 2^{k+1} for k = n_i - m, all n_i in [m, n];
  // guaranteed when t <= log2/log3.
  bool case1_holds = false;
  bool t_at_most_log23 = false;
  // n_i > n case: 3^{(alpha n - m) t} <= 2^{n - m + 1}, exactly
  bool case2_holds = false;
  std::optional<int> threshold_n;     // smallest n > m where case 2 holds
  bool holds_for_all_large_n = false; // exponent comparison 3^{alpha t} vs 2
  Int case2_lhs_exponent{0};          // exponents of the integer comparison
  Int case2_rhs_exponent{0};          // 3^lhs <= 2^rhs
};

// The two cover-element cases of the uniform-mass argument on C cap K cap
// E_n, evaluated in exact integer arithmetic. C is a Cantor cylinder of
// generation m < n, t = a/b, alpha = u/v.
inline MassDistributionReport mass_distribution_check(const Word& C, const Rat& alpha,
                                                      int n, const Rat& t) {
  if (alpha <= 1) throw invalid_input("mass distribution: alpha > 1 required");
  int m = static_cast<int>(C.size());
  if (m < 1 || m >= n) throw invalid_input("mass distribution: need 1 <= |C| < n");
  if (t <= 0) throw invalid_input("mass distribution: t > 0 required");
  Int a = boost::multiprecision::numerator(t);
  Int b = boost::multiprecision::denominator(t);
  Int u = boost::multiprecision::numerator(alpha);
  Int v = boost::multiprecision::denominator(alpha);

  MassDistributionReport rep;
  rep.t_at_most_log23 =
      pow_int(3, static_cast<unsigned long>(a)) <= pow_int(2, static_cast<unsigned long>(b));
  rep.case1_holds = true;
  for (int ni = m; ni <= n; ++ni) {
    Int k = ni - m;
    // 3^{k a} <= 2^{(k+1) b}
    if (pow_int(3, static_cast<unsigned long>(k * a)) >
        pow_int(2, static_cast<unsigned long>((k + 1) * b))) {
      rep.case1_holds = false;
      break;
    }
  }
  auto case2_at = [&](int nn) {
    // 3^{(alpha nn - m) t} <= 2^{nn - m + 1}: raise to the power v*b
    Int e3 = (u * nn - Int(m) * v) * a;
    Int e2 = Int(nn - m + 1) * v * b;
    if (e3 <= 0) return true;
    return pow_int(3, static_cast<unsigned long>(e3)) <=
           pow_int(2, static_cast<unsigned long>(e2));
  };
  rep.case2_holds = case2_at(n);
  rep.case2_lhs_exponent = (u * n - Int(m) * v) * a;
  rep.case2_rhs_exponent = Int(n - m + 1) * v * b;
  // per extra level the left side gains 3^{u a}, the right 2^{v b}
  rep.holds_for_all_large_n = pow_int(3, static_cast<unsigned long>(u * a)) <
                              pow_int(2, static_cast<unsigned long>(v * b));
  if (rep.holds_for_all_large_n) {
    for (int nn = m + 1; nn <= m + 4096; ++nn)
      if (case2_at(nn)) {
        rep.threshold_n = nn;
        break;
      }
  } else {
    // non-monotone direction: a finite prefix may still work
    for (int nn = m + 1; nn <= m + 64 && !rep.threshold_n; ++nn)
      if (case2_at(nn)) rep.threshold_n = nn;
    if (rep.threshold_n) {
      // report the first n only if it opens a contiguous run to the horizon
      for (int nn = *rep.threshold_n; nn <= m + 64; ++nn)
        if (!case2_at(nn)) {
          rep.threshold_n.reset();
          break;
        }
    }
  }
  return rep;
}

enum class BoundStatus { pass, fail, inconclusive };

struct DiophantineBound {
  NetMeasureResult measure;
  Quad bound{0};  // (1/2) |C|^t
  BoundStatus status = BoundStatus::inconclusive;
  std::optional<int> threshold_n;
  MassDistributionReport mass;
};

// M^t(C cap K cap E_n) >= (1/2)|C|^t via the cover DP on the finite stage
// w_alpha_stage(alpha, n). Below the threshold from the mass-distribution
// inequality a failed bound is inconclusive rather than a refutation.
inline DiophantineBound diophantine_measure_bound(const Word& C, const Rat& alpha, int n,
                                                  const Rat& t,
                                                  std::uint64_t cap = kDefaultCylinderCap) {
  GdmsSystem G = cantor_system();
  if (!is_admissible(C, G.shift()) || C.empty())
    throw invalid_input("diophantine bound: C must be a nonempty Cantor word");
  DiophantineBound out;
  out.mass = mass_distribution_check(C, alpha, n, t);
  out.threshold_n = out.mass.threshold_n;
  Quad tq = to_quad(t);
  CylinderSet F = w_alpha_stage(alpha, n, true, cap);
  CylinderSet target = antichain_intersect(F, CylinderSet::single(C));
  PositivityReport pos = positivity_generation(G, tq);
  int budget = pos.found ? pos.m + 2 : 3;
  NetMeasureResult nm = net_measure(G, tq, C, Target::of(target), budget);
  out.measure = nm;
  out.bound = pow_qt(Rat(1, pow_int(3, static_cast<unsigned long>(C.size()))), tq) / 2;
  bool met = nm.v_lo >= out.bound;
  bool threshold_ok = out.threshold_n && n >= *out.threshold_n;
  if (met)
    out.status = BoundStatus::pass;
  else
    out.status = threshold_ok ? BoundStatus::fail : BoundStatus::inconclusive;
  return out;
}

struct SweepRow {
  Rat alpha;
  int n = 0;
  Rat t;
  Word cylinder;
  Quad dp_value{0};
  Quad bound{0};
  bool pass = false;
};

// DP value against the (1/2)|C|^t bound over a (t, n) grid; the empirical
// pass/fail frontier locates the critical exponent (log2/log3)/alpha.
inline std::vector<SweepRow> critical_exponent_sweep(const Rat& alpha,
                                                     const std::vector<Rat>& t_grid,
                                                     const std::vector<int>& n_grid,
                                                     const Word& C,
                                                     std::uint64_t cap = kDefaultCylinderCap) {
  std::vector<SweepRow> rows;
  for (const Rat& t : t_grid) {
    for (int n : n_grid) {
      DiophantineBound b = diophantine_measure_bound(C, alpha, n, t, cap);
      SweepRow r;
      r.alpha = alpha;
      r.n = n;
      r.t = t;
      r.cylinder = C;
      r.dp_value = b.measure.v_lo;
      r.bound = b.bound;
      r.pass = b.status == BoundStatus::pass;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

}  // namespace gdms
