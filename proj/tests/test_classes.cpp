#include <catch2/catch_amalgamated.hpp>

#include "gdms/classes.hpp"

using namespace gdms;

namespace {

const Quad kLog3 = log(Quad(3));

LocallyConstantFunction ind_symbol(int sym, const Subshift& S) {
  return LocallyConstantFunction::indicator({sym}, S);
}

Quad entropy_over_log3(const Quad& p) {
  if (p == 0 || p == 1) return Quad(0);
  return (-p * log(p) - (1 - p) * log(1 - p)) / kLog3;
}

}  // namespace

TEST_CASE("locally constant functions validate their table") {
  Subshift S = Subshift::golden_mean();
  LocallyConstantFunction g = LocallyConstantFunction::indicator({0, 1}, S);
  CHECK(g.k == 2);
  CHECK(g.value({0, 1}) == 1);
  CHECK(g.value({0, 0}) == 0);
  CHECK_THROWS_AS(g.value({1, 1}), invalid_input);
  CHECK(g.min_value() == 0);
  CHECK(g.max_value() == 1);
  CHECK_FALSE(g.constant());
  LocallyConstantFunction bad;
  bad.k = 1;
  bad.table[{0}] = Rat(1);  // missing symbol 1
  CHECK_THROWS_AS(bad.validate(S), invalid_input);
}

TEST_CASE("Birkhoff averages and level sets on the full shift") {
  Subshift S = Subshift::full_shift(2);
  LocallyConstantFunction g = ind_symbol(0, S);
  CHECK(birkhoff_average(g, {0, 1}, 2) == Rat(1, 2));
  CHECK_THROWS_AS(birkhoff_average(g, {0}, 2), invalid_input);

  BirkhoffLevelSpec spec{g, Rat(1, 2), Rat(1, 10), 4};
  CylinderSet set = birkhoff_set(spec, S);
  CHECK(set.size() == 6);  // exactly two zeros among four symbols
  for (const Word& w : set.words()) CHECK(birkhoff_average(g, w, 4) == Rat(1, 2));

  BirkhoffLevelSpec wide{g, Rat(1, 2), Rat(2), 4};
  CHECK(birkhoff_set(wide, S).size() == 16);

  BirkhoffLevelSpec unattainable{g, Rat(2), Rat(1, 10), 4};
  CHECK(birkhoff_set(unattainable, S).empty());

  BirkhoffLevelSpec bad{g, Rat(1, 2), Rat(0), 4};
  CHECK_THROWS_AS(birkhoff_set(bad, S), invalid_input);
}

TEST_CASE("epsilon-nesting of level sets") {
  Subshift S = Subshift::golden_mean();
  LocallyConstantFunction g = ind_symbol(1, S);
  for (int M : {3, 5, 8}) {
    BirkhoffLevelSpec tight{g, Rat(1, 4), Rat(1, 20), M};
    BirkhoffLevelSpec loose{g, Rat(1, 4), Rat(1, 5), M};
    CylinderSet a = birkhoff_set(tight, S), b = birkhoff_set(loose, S);
    for (const Word& w : a.words()) CHECK(b.contains_cylinder(w));
  }
}

TEST_CASE("cylinder-ratio scan on the Cantor frequency example") {
  GdmsSystem K = cantor_system();
  LocallyConstantFunction g = ind_symbol(0, K.shift());
  ClassTestReport rep = class_inequality_scan(K, g, Rat(1, 2), Rat(1, 10), Quad("0.5"),
                                              1, {20, 40, 80}, 2);
  CHECK(rep.pass);
  CHECK(rep.trend_ok);
  CHECK(rep.c_min > Quad("0.4"));
  CHECK(rep.entries.size() == 3 * 6);  // 3 schedule stops, 6 cylinders of gen <= 2
}

TEST_CASE("scan fails cleanly for unattainable averages") {
  GdmsSystem K = cantor_system();
  LocallyConstantFunction g = ind_symbol(0, K.shift());
  ClassTestReport rep =
      class_inequality_scan(K, g, Rat(3, 2), Rat(1, 10), Quad("0.5"), 1, {10, 20}, 1);
  CHECK_FALSE(rep.pass);
  CHECK(rep.c_min == 0);
  CHECK_THROWS_AS(
      class_inequality_scan(K, g, Rat(1, 2), Rat(1, 10), Quad("0.5"), 1, {20, 10}, 1),
      invalid_input);
  CHECK_THROWS_AS(
      class_inequality_scan(K, g, Rat(1, 2), Rat(1, 10), Quad("0.7"), 1, {10, 20}, 1),
      invalid_input);  // t above the dimension
}

TEST_CASE("small exponents push the ratios to one") {
  GdmsSystem K = cantor_system();
  LocallyConstantFunction g = ind_symbol(0, K.shift());
  ClassTestReport rep = class_inequality_scan(K, g, Rat(1, 2), Rat(1, 10), Quad("0.05"),
                                              1, {30, 60}, 1);
  CHECK(rep.c_min > Quad("0.95"));
}

TEST_CASE("translation property of the scan ratios") {
  GdmsSystem K = cantor_system();
  LocallyConstantFunction g = ind_symbol(0, K.shift());
  Rat p(1, 2);
  Quad t("0.5");
  int M = 60;
  auto ratio = [&](const Word& C, const Rat& eps) {
    detail::ClassDp dp(K, {BirkhoffLevelSpec{g, p, eps, M}}, t, 1);
    return dp.ratio(C);
  };
  for (const Word& w : {Word{0}, Word{1}}) {
    for (const Word& suffix : {Word{0}, Word{1}, Word{0, 1}}) {
      Word C = w;
      C.insert(C.end(), suffix.begin(), suffix.end());
      CHECK(ratio(C, Rat(1, 20)) <= ratio(suffix, Rat(1, 10)));
      CHECK(ratio(suffix, Rat(1, 10)) <= ratio(C, Rat(1, 5)));
    }
  }
}

TEST_CASE("ratios are invariant under symbol relabeling") {
  GdmsSystem K = cantor_system();
  AffineMarkovConfig cfg;
  cfg.q = 2;
  cfg.A = {{true, true}, {true, true}};
  cfg.maps = {{Rat(1, 3), Rat(2, 3)}, {Rat(1, 3), Rat(0)}};  // swapped offsets
  GdmsSystem K2 = affine_markov_system(cfg);
  LocallyConstantFunction g = ind_symbol(0, K.shift());
  LocallyConstantFunction g2 = ind_symbol(1, K2.shift());
  detail::ClassDp dp(K, {BirkhoffLevelSpec{g, Rat(1, 2), Rat(1, 10), 40}}, Quad("0.5"), 1);
  detail::ClassDp dp2(K2, {BirkhoffLevelSpec{g2, Rat(1, 2), Rat(1, 10), 40}}, Quad("0.5"), 1);
  for (const Word& C : enumerate_cylinders(2, K.shift())) {
    Word C2 = C;
    for (int& s : C2) s = 1 - s;
    CHECK(dp.ratio(C) == dp2.ratio(C2));
  }
}

TEST_CASE("nested-union hypothesis on the golden-mean word frequency") {
  GdmsSystem G = golden_mean_system(Rat(1, 3), Rat(1, 3));
  LocallyConstantFunction g = LocallyConstantFunction::indicator({0, 1}, G.shift());
  // stationary frequency of the word "01" under the Parry measure: 1/(1+phi^2)
  Rat p(2764, 10000);
  MembershipVerdict v =
      nested_union_membership(G, g, p, Rat(1, 20), Quad("0.35"), {10, 30}, 2);
  CHECK(v.hypothesis_holds);
  CHECK(v.c_achieved > 0);
}

TEST_CASE("intersection surrogate at separated scales") {
  GdmsSystem K = cantor_system();
  LocallyConstantFunction g = ind_symbol(0, K.shift());
  BirkhoffLevelSpec s1{g, Rat(3, 10), Rat(1, 10), 20};
  BirkhoffLevelSpec s2{g, Rat(7, 10), Rat(1, 10), 200};
  IntersectionReport rep = intersection_surrogate(K, {s1, s2}, Quad("0.5"), 1, 2);
  CHECK(rep.nonempty);
  CHECK(rep.witness.size() >= 200);
  CHECK(birkhoff_average(g, rep.witness, 20) > Rat(1, 5));
  CHECK(birkhoff_average(g, rep.witness, 200) > Rat(3, 5));
  for (const auto& e : rep.entries) {
    CHECK(e.intersection_ratio <= e.min_single_ratio);
    CHECK(e.intersection_ratio >= 0);
  }

  BirkhoffLevelSpec clash{g, Rat(7, 10), Rat(1, 10), 20};
  CHECK_THROWS_AS(intersection_surrogate(K, {s1, clash}, Quad("0.5"), 1, 1),
                  invalid_input);
  BirkhoffLevelSpec close{g, Rat(7, 10), Rat(1, 10), 30};
  CHECK_THROWS_AS(intersection_surrogate(K, {s1, close}, Quad("0.5"), 1, 1),
                  invalid_input);
  CHECK_THROWS_AS(intersection_surrogate(K, {s1}, Quad("0.5"), 1, 1), invalid_input);
}

TEST_CASE("level-set dimension matches the entropy formula") {
  GdmsSystem K = cantor_system();
  LocallyConstantFunction g = ind_symbol(0, K.shift());
  for (Rat p : {Rat(1, 2), Rat(1, 4), Rat(3, 10)}) {
    LevelSetDimension d = level_set_dimension(K, g, p);
    CHECK(abs(d.value - entropy_over_log3(to_quad(p))) < Quad("1e-6"));
  }
  CHECK(level_set_dimension(K, g, Rat(0)).value == 0);
  CHECK(level_set_dimension(K, g, Rat(1)).value == 0);
  CHECK_THROWS_AS(level_set_dimension(K, g, Rat(2)), invalid_input);
  CHECK_THROWS_AS(level_set_dimension(K, g, Rat(-1, 10)), invalid_input);
}

TEST_CASE("attainable average ranges") {
  Subshift full = Subshift::full_shift(2);
  auto [lo, hi] = attainable_average_range(full, ind_symbol(0, full));
  CHECK(lo == 0);
  CHECK(hi == 1);
  Subshift golden = Subshift::golden_mean();
  auto [glo, ghi] = attainable_average_range(golden, ind_symbol(1, golden));
  CHECK(glo == 0);
  CHECK(ghi == Rat(1, 2));  // alternating 0101... maximizes the frequency of 1
}

TEST_CASE("spectrum peak and concavity on a short grid") {
  GdmsSystem K = cantor_system();
  LocallyConstantFunction g = ind_symbol(0, K.shift());
  Quad s_star = bowen_dimension(K).value;
  std::vector<Quad> vals;
  for (int i = 1; i <= 11; ++i) {
    Rat p(i, 12);
    Quad v = level_set_dimension(K, g, p).value;
    CHECK(v <= s_star + Quad("1e-7"));
    vals.push_back(v);
  }
  CHECK(abs(vals[5] - s_star) < Quad("1e-6"));  // p = 1/2
  for (std::size_t i = 1; i + 1 < vals.size(); ++i)
    CHECK(vals[i] >= (vals[i - 1] + vals[i + 1]) / 2 - Quad("1e-6"));
}

TEST_CASE("full-dimension pairs straddle the peak") {
  GdmsSystem K = cantor_system();
  LocallyConstantFunction g = ind_symbol(0, K.shift());
  auto [p1, p2] = full_dimension_pair(K, g, Quad("0.01"));
  CHECK(p1 < Rat(1, 2));
  CHECK(p2 > Rat(1, 2));
  Quad cut = bowen_dimension(K).value - Quad("0.01");
  CHECK(level_set_dimension(K, g, p1).value > cut);
  CHECK(level_set_dimension(K, g, p2).value > cut);

  GdmsSystem G = golden_mean_system(Rat(1, 3), Rat(1, 3));
  LocallyConstantFunction g1 = ind_symbol(1, G.shift());
  auto [q1, q2] = full_dimension_pair(G, g1, Quad("0.05"));
  CHECK(q1 < q2);
  // the pair brackets the Parry frequency of symbol 1, about 0.2764
  CHECK(q1 < Rat(2764, 10000));
  CHECK(q2 > Rat(2764, 10000));

  LocallyConstantFunction c;
  c.k = 1;
  c.table[{0}] = c.table[{1}] = Rat(1);
  CHECK_THROWS_AS(full_dimension_pair(K, c, Quad("0.01")), invalid_input);
}
