#pragma once

#include "gdms/netmeasure.hpp"

namespace gdms {

// Bracket for the Birkhoff sum of the geometric potential log|df| along the
// cylinder of w. Exact (zero width) for affine systems.
inline std::pair<Quad, Quad> birkhoff_sum_bracket(const Word& w, const GdmsSystem& G) {
  ComposedMap h = compose_along(w, G);
  return {log(h.rho_lo), log(h.rho_hi)};
}

// Z_n(s) with inf/sup weights: sum over generation-n cylinders of
// exp(s * inf S_n log|df|) and exp(s * sup S_n log|df|).
inline std::pair<Quad, Quad> partition_sum(const GdmsSystem& G, const Quad& s, int n,
                                           std::uint64_t cap = kDefaultCylinderCap) {
  if (s < 0) throw invalid_input("partition_sum: s >= 0 required");
  Quad z_inf(0), z_sup(0);
  for (const Word& w : enumerate_cylinders(n, G.shift(), cap)) {
    ComposedMap h = compose_along(w, G);
    z_inf += pow_qt(h.rho_lo, s);
    z_sup += pow_qt(h.rho_hi, s);
  }
  return {z_inf, z_sup};
}

enum class PressureMethod { partition_sum, spectral };

struct PressureEstimate {
  Quad s{0};
  int n = 0;
  Quad lower{0}, upper{0};
  PressureMethod method = PressureMethod::partition_sum;
  bool certified = true;

  Quad mid() const { return (lower + upper) / 2; }
};

namespace detail {

// s-weighted transfer matrix B[i][j] = A_ij * rho(f_{i,j})^s.
inline std::vector<std::vector<Quad>> transfer_matrix(const GdmsSystem& G, const Quad& s,
                                                      bool upper_rho) {
  int q = G.shift().alphabet_size();
  std::vector<std::vector<Quad>> B(q, std::vector<Quad>(q, Quad(0)));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (G.shift().allows(i, j)) {
        const ContractionMap& m = G.edge_map(i, j);
        B[i][j] = pow_qt(upper_rho ? m.rho_hi : m.rho_lo, s);
      }
  return B;
}

// log of the spectral radius of a nonnegative irreducible matrix, bracketed
// by eigenvalue-ratio bounds after repeated squaring: row sums of B^(2^k)
// bracket rho^(2^k), and the bracket width shrinks like 2^-k. Normalization
// uses powers of two so the accumulated scale stays an exact integer
// exponent; logs are taken only once at the end.
inline std::pair<Quad, Quad> log_spectral_radius(std::vector<std::vector<Quad>> M,
                                                 const Quad& tol = Quad("1e-13"),
                                                 int max_squarings = 240) {
  int q = static_cast<int>(M.size());
  Int E = 0;                // accumulated power-of-two exponent, doubles per squaring
  Quad tol_scaled = tol;    // tol * 2^k
  for (int k = 1; k <= max_squarings; ++k) {
    std::vector<std::vector<Quad>> N(q, std::vector<Quad>(q, Quad(0)));
    for (int i = 0; i < q; ++i)
      for (int l = 0; l < q; ++l) {
        if (M[i][l] == 0) continue;
        for (int j = 0; j < q; ++j) N[i][j] += M[i][l] * M[l][j];
      }
    Quad scale(0);
    for (const auto& row : N)
      for (const Quad& x : row) scale = std::max(scale, x);
    if (scale == 0)
      throw degenerate_system("spectral radius: matrix power vanished (reducible?)");
    int e = 0;
    boost::multiprecision::frexp(scale, &e);
    for (auto& row : N)
      for (Quad& x : row) x = boost::multiprecision::ldexp(x, -e);
    M = std::move(N);
    E = 2 * E + e;
    tol_scaled *= 2;
    Quad rs_min(0), rs_max(0);
    bool first = true;
    for (const auto& row : M) {
      Quad rs(0);
      for (const Quad& x : row) rs += x;
      if (rs == 0)
        throw degenerate_system("spectral radius: zero row sum (reducible matrix)");
      if (first || rs < rs_min) rs_min = rs;
      if (first || rs > rs_max) rs_max = rs;
      first = false;
    }
    // log(rs_max/rs_min) <= rs_max/rs_min - 1 < tol * 2^k closes the bracket
    if (rs_max / rs_min - 1 < tol_scaled) {
      Quad power = boost::multiprecision::ldexp(Quad(1), k);
      Quad ln2 = log(Quad(2));
      Quad lo = (Quad(E) * ln2 + log(rs_min)) / power;
      Quad hi = (Quad(E) * ln2 + log(rs_max)) / power;
      return {lo, hi};
    }
  }
  throw internal_error("spectral radius: ratio bounds did not converge");
}

}  // namespace detail

// Certified bracket for P(s * log|df|) from generation-n data. Affine systems
// use eigenvalue-ratio bounds from n transfer-matrix iterations; numeric
// systems use the super/sub-additive partition-sum bounds with distortion
// slack.
inline PressureEstimate pressure_bracket(const GdmsSystem& G, const Quad& s, int n,
                                         std::uint64_t cap = kDefaultCylinderCap) {
  if (n < 1) throw invalid_input("pressure_bracket: n >= 1 required");
  if (s < 0) throw invalid_input("pressure_bracket: s >= 0 required");
  PressureEstimate est;
  est.s = s;
  est.n = n;
  est.certified = G.certified();
  if (G.affine()) {
    auto B = detail::transfer_matrix(G, s, true);
    int q = G.shift().alphabet_size();
    std::vector<Quad> u(q, Quad(1)), v(q);
    for (int it = 0; it < n; ++it) {
      for (int j = 0; j < q; ++j) {
        Quad acc(0);
        for (int i = 0; i < q; ++i) acc += u[i] * B[i][j];
        v[j] = acc;
      }
      Quad norm(0);
      for (const Quad& x : v) norm = std::max(norm, x);
      if (it + 1 < n)
        for (int j = 0; j < q; ++j) u[j] = v[j] / norm;
    }
    bool first = true;
    Quad r_lo(0), r_hi(0);
    for (int j = 0; j < q; ++j) {
      Quad r = v[j] / u[j];
      if (first || r < r_lo) r_lo = r;
      if (first || r > r_hi) r_hi = r;
      first = false;
    }
    est.lower = log(r_lo);
    est.upper = log(r_hi);
    return est;
  }
  auto [z_inf, z_sup] = partition_sum(G, s, n, cap);
  Quad slack = s * log(G.kappa());
  est.lower = (log(z_inf) - slack) / n;
  est.upper = (log(z_sup) + slack) / n;
  est.certified = false;
  return est;
}

// P(s * log|df|) for affine systems: log of the spectral radius of the
// s-weighted transfer matrix, bracketed to relative tolerance ~1e-13.
inline PressureEstimate pressure_spectral(const GdmsSystem& G, const Quad& s) {
  if (!G.affine())
    throw unsupported_method("pressure_spectral: affine systems only");
  if (s < 0) throw invalid_input("pressure_spectral: s >= 0 required");
  auto [lo, hi] = detail::log_spectral_radius(detail::transfer_matrix(G, s, true));
  PressureEstimate est;
  est.s = s;
  est.lower = lo;
  est.upper = hi;
  est.method = PressureMethod::spectral;
  est.certified = G.certified();
  return est;
}

struct DimensionResult {
  Quad value{0};
  Quad lo{0}, hi{0};
  bool certified = true;
  int iterations = 0;
};

// Unique root of P(s * log|df|) = 0 in [0, ambient dimension], found by
// bisection on the strictly decreasing pressure function.
inline DimensionResult bowen_dimension(const GdmsSystem& G,
                                       std::optional<Quad> tol_opt = std::nullopt) {
  bool affine = G.affine();
  Quad tol = tol_opt.value_or(affine ? Quad("1e-9") : Quad("1e-3"));
  Quad lo(0);
  Quad hi(G.space().planar ? 2 : 1);
  int n_numeric = 6;
  auto pressure_mid = [&](const Quad& s) {
    if (affine) return pressure_spectral(G, s).mid();
    PressureEstimate est = pressure_bracket(G, s, n_numeric);
    // refine the generation while the bracket straddles zero
    while (est.lower < 0 && est.upper > 0 && n_numeric < 9) {
      ++n_numeric;
      est = pressure_bracket(G, s, n_numeric);
    }
    return est.mid();
  };
  if (pressure_mid(lo) <= 0)
    throw degenerate_system("bowen_dimension: P(0) <= 0, system has no branching");
  if (pressure_mid(hi) > 0)
    throw degenerate_system(
        "bowen_dimension: pressure still positive at the ambient dimension");
  DimensionResult res;
  res.certified = G.certified();
  while (hi - lo > tol) {
    Quad mid = (lo + hi) / 2;
    if (pressure_mid(mid) > 0)
      lo = mid;
    else
      hi = mid;
    ++res.iterations;
    if (res.iterations > 400) throw internal_error("bowen_dimension: bisection stalled");
  }
  res.lo = lo;
  res.hi = hi;
  res.value = (lo + hi) / 2;
  return res;
}

struct PositivityReport {
  bool found = false;
  int m = 0;          // smallest generation from which all partition sums exceed 1
  int window = 0;     // extra generations checked beyond m
  int worst_symbol = -1;
  int worst_n = 0;
  Quad worst_sum{0};  // largest deficient sum when not found
};

// Smallest m such that for every 1-cylinder C_a and every n in
// {m, ..., m + window}, the sum over the n-step subcylinders of C_a of the
// s-power of the relative contraction (inf weights) exceeds 1. This is the
// quantity that makes refining a cover past m non-improving. Requires s
// below the Bowen dimension.
inline PositivityReport positivity_generation(const GdmsSystem& G, const Quad& s,
                                              int max_m = 48, int window = 8) {
  Quad p = G.affine() ? pressure_spectral(G, s).mid()
                      : pressure_bracket(G, s, 8).mid();
  if (p <= 0)
    throw invalid_input("positivity_generation: s must lie below the Bowen dimension");
  int q = G.shift().alphabet_size();
  auto B = detail::transfer_matrix(G, s, false);
  int n_max = max_m + window;
  // sums[a][n-1] = sum of relative inf-weights over n-step extensions of [a]
  std::vector<std::vector<Quad>> sums(q);
  for (int a = 0; a < q; ++a) {
    std::vector<Quad> x(q, Quad(0));
    x[a] = 1;
    for (int n = 1; n <= n_max; ++n) {
      std::vector<Quad> y(q, Quad(0));
      for (int i = 0; i < q; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < q; ++j) y[j] += x[i] * B[i][j];
      }
      x = std::move(y);
      Quad total(0);
      for (const Quad& v : x) total += v;
      sums[a].push_back(total);
    }
  }
  PositivityReport rep;
  rep.window = window;
  for (int m = 1; m <= max_m; ++m) {
    bool ok = true;
    for (int a = 0; a < q && ok; ++a)
      for (int n = m; n <= m + window && ok; ++n)
        if (!(sums[a][n - 1] > 1)) ok = false;
    if (ok) {
      rep.found = true;
      rep.m = m;
      return rep;
    }
  }
  // report the deepest failure
  for (int a = 0; a < q; ++a)
    for (int n = 1; n <= n_max; ++n)
      if (!(sums[a][n - 1] > 1) && n >= rep.worst_n) {
        rep.worst_symbol = a;
        rep.worst_n = n;
        rep.worst_sum = sums[a][n - 1];
      }
  return rep;
}

struct CtConstant {
  Quad c_t{0};
  Word minimizer;
  int depth = 0;
  int budget = 0;
  int positivity_m = 0;
};

// Uniform lower bound on M_infty^t(C) / d(C)^t over cylinders up to `depth`.
inline CtConstant c_t_constant(const GdmsSystem& G, const Quad& t, int depth,
                               int budget = -1,
                               std::uint64_t cap = kDefaultCylinderCap) {
  if (depth < 1) throw invalid_input("c_t_constant: depth >= 1 required");
  PositivityReport pos = positivity_generation(G, t);
  if (!pos.found)
    throw invalid_input("c_t_constant: no positivity generation found for this t");
  if (budget < 0) budget = pos.m + 2;
  CtConstant out;
  out.depth = depth;
  out.budget = budget;
  out.positivity_m = pos.m;
  bool first = true;
  for (int n = 1; n <= depth; ++n) {
    for (const Word& w : enumerate_cylinders(n, G.shift(), cap)) {
      Quad v = net_measure(G, t, w, Target::all(), budget).v_lo;
      CylinderGeometry geo = cylinder_diameter(w, G);
      Quad ratio = v / pow_qt(geo.d_hi, t);
      if (first || ratio < out.c_t) {
        out.c_t = ratio;
        out.minimizer = w;
        first = false;
      }
    }
  }
  return out;
}

}  // namespace gdms
