#include <catch2/catch_amalgamated.hpp>

#include "gdms/thermo.hpp"

using namespace gdms;

namespace {
const Quad kLog2 = log(Quad(2));
const Quad kLog3 = log(Quad(3));
const Quad kCantorDim = kLog2 / kLog3;
const Quad kPhi = (1 + sqrt(Quad(5))) / 2;
}  // namespace

TEST_CASE("Birkhoff sums of the geometric potential") {
  GdmsSystem K = cantor_system();
  auto [lo, hi] = birkhoff_sum_bracket({0, 1}, K);
  CHECK(lo == hi);
  CHECK(lo == log(to_quad(Rat(1, 9))));
  GdmsSystem G = golden_mean_system(Rat(1, 3), Rat(1, 4));
  auto [glo, ghi] = birkhoff_sum_bracket({1, 0}, G);
  CHECK(glo == log(to_quad(Rat(1, 12))));
  CHECK(glo == ghi);
}

TEST_CASE("partition sums at landmark parameters") {
  GdmsSystem K = cantor_system();
  auto [z0, z0s] = partition_sum(K, Quad(0), 3);
  CHECK(z0 == 8);
  CHECK(z0s == 8);
  for (int n : {1, 4, 9}) {
    auto [zi, zs] = partition_sum(K, kCantorDim, n);
    CHECK(abs(zi - 1) < Quad("1e-30"));
    CHECK(zi == zs);
  }
  GdmsSystem G = golden_mean_system(Rat(1, 3), Rat(1, 3));
  CHECK(partition_sum(G, Quad(0), 4).first == 8);  // Fibonacci count
  CHECK_THROWS_AS(partition_sum(K, Quad(-1), 2), invalid_input);
}

TEST_CASE("pressure brackets for the Cantor system") {
  GdmsSystem K = cantor_system();
  PressureEstimate p = pressure_bracket(K, Quad("0.5"), 6);
  CHECK(p.lower == p.upper);  // rank-one iteration closes immediately
  CHECK(abs(p.mid() - (kLog2 - kLog3 / 2)) < Quad("1e-30"));
  PressureEstimate root = pressure_bracket(K, kCantorDim, 4);
  CHECK(abs(root.mid()) < Quad("1e-30"));
  CHECK(pressure_bracket(K, Quad(0), 3).mid() == kLog2);
  CHECK_THROWS_AS(pressure_bracket(K, Quad("0.5"), 0), invalid_input);
  CHECK_THROWS_AS(pressure_bracket(K, Quad(-1), 3), invalid_input);
}

TEST_CASE("spectral pressure matches closed forms") {
  GdmsSystem K = cantor_system();
  for (Quad s : {Quad(0), Quad("0.25"), Quad("0.5"), Quad("0.9")}) {
    PressureEstimate p = pressure_spectral(K, s);
    CHECK(abs(p.mid() - (kLog2 - s * kLog3)) < Quad("1e-25"));
    CHECK(p.upper - p.lower < Quad("1e-12"));
  }
  GdmsSystem G = golden_mean_system(Rat(1, 3), Rat(1, 3));
  for (Quad s : {Quad(0), Quad("0.3"), Quad("0.438"), Quad("0.7")}) {
    PressureEstimate p = pressure_spectral(G, s);
    // bracketed to the spectral tolerance, not to quad epsilon
    CHECK(abs(p.mid() - (log(kPhi) - s * kLog3)) < Quad("1e-13"));
  }
  GdmsSystem J = julia_system({0.1, 0.0}, 400, 1234);
  CHECK_THROWS_AS(pressure_spectral(J, Quad("0.5")), unsupported_method);
}

TEST_CASE("spectral value lies in the partition bracket") {
  GdmsSystem G = golden_mean_system(Rat(1, 3), Rat(1, 4));
  for (Quad s : {Quad("0.2"), Quad("0.4"), Quad("0.6")}) {
    Quad sp = pressure_spectral(G, s).mid();
    for (int n = 2; n <= 10; ++n) {
      PressureEstimate br = pressure_bracket(G, s, n);
      // two exact pipelines can round apart by an ulp at the ends
      CHECK(br.lower - Quad("1e-12") <= sp);
      CHECK(sp <= br.upper + Quad("1e-12"));
      CHECK(br.upper >= br.lower);
    }
  }
}

TEST_CASE("pressure is strictly decreasing in s") {
  GdmsSystem G = golden_mean_system(Rat(1, 3), Rat(1, 4));
  Quad prev;
  bool first = true;
  for (int i = 0; i <= 8; ++i) {
    Quad s = Quad(i) / 8;
    Quad p = pressure_spectral(G, s).mid();
    if (!first) CHECK(p < prev);
    prev = p;
    first = false;
  }
}

TEST_CASE("Bowen dimension of the standard systems") {
  DimensionResult dk = bowen_dimension(cantor_system());
  CHECK(abs(dk.value - kCantorDim) < Quad("1e-9"));
  CHECK(dk.certified);
  CHECK(dk.lo <= dk.value);
  CHECK(dk.value <= dk.hi);
  DimensionResult dg = bowen_dimension(golden_mean_system(Rat(1, 3), Rat(1, 3)));
  CHECK(abs(dg.value - log(kPhi) / kLog3) < Quad("1e-9"));
}

TEST_CASE("single-branch systems are rejected as degenerate") {
  std::vector<ContractionMap> maps = {ContractionMap::make_affine(Rat(1, 3), Rat(0))};
  GdmsSystem G(Subshift(1, {{true}}), BaseSpace{}, std::move(maps), {}, Rat(1, 4),
               Rat(1, 2), 1.0, Quad(1));
  CHECK_THROWS_AS(bowen_dimension(G), degenerate_system);
}

TEST_CASE("positivity generation below the dimension") {
  GdmsSystem K = cantor_system();
  PositivityReport m1 = positivity_generation(K, Quad("0.5"));
  CHECK(m1.found);
  CHECK(m1.m == 1);
  PositivityReport m2 = positivity_generation(K, Quad("0.63"));
  CHECK(m2.found);
  CHECK(m2.m == 1);
  CHECK_THROWS_AS(positivity_generation(K, Quad("0.64")), invalid_input);
}

TEST_CASE("uniform measure-to-diameter constant of the Cantor system") {
  CtConstant c = c_t_constant(cantor_system(), Quad("0.5"), 3);
  CHECK(c.c_t == 1);
  CHECK(c.positivity_m == 1);
}

TEST_CASE("sampled distortion stays within kappa") {
  GdmsSystem J = julia_system({0.1, 0.0}, 400, 1234);
  for (const Word& w : enumerate_cylinders(3, J.shift())) {
    ComposedMap h = compose_along(w, J);
    double lo = 1e300, hi = 0;
    for (const auto& z : J.samples()) {
      double d = h.derivative_norm_at(z);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    CHECK(Quad(hi) <= Quad(lo) * J.kappa());
    // the bracket reproduces the exact sampled extremes widened by kappa
    auto [blo, bhi] = birkhoff_sum_bracket(w, J);
    CHECK(blo <= log(Quad(lo)));
    CHECK(log(Quad(hi)) <= bhi);
  }
}
