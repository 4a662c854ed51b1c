#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "gdms/config.hpp"

namespace {

using namespace gdms;

std::string qstr(const Quad& v) {
  std::ostringstream os;
  os << std::setprecision(36) << v;
  return os.str();
}

std::string word_str(const Word& w, bool one_based) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ",";
    os << (w[i] + (one_based ? 1 : 0));
  }
  return os.str();
}

json word_json(const Word& w) {
  json a = json::array();
  for (int s : w) a.push_back(s);
  return a;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (...) {
      throw invalid_input(what + ": bad integer '" + tok + "'");
    }
  }
  if (out.empty()) throw invalid_input(what + ": empty list");
  return out;
}

void emit_manifest(const std::string& path, const std::string& command, json config,
                   json params, json results, double wall) {
  write_json_file(path, make_manifest(command, std::move(config), std::move(params),
                                      std::move(results), wall));
}

int run_dim(const std::string& config_path, const std::string& tol_str,
            const std::string& manifest_path) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedSystem sys = load_system_file(config_path);
  std::optional<Quad> tol;
  if (!tol_str.empty()) tol = Quad(tol_str.c_str());
  DimensionResult d = bowen_dimension(sys.system, tol);
  std::cout << qstr(d.value) << "\n";
  json results = {{"value", qstr(d.value)},
                  {"lo", qstr(d.lo)},
                  {"hi", qstr(d.hi)},
                  {"certified", d.certified},
                  {"iterations", d.iterations}};
  json params;
  if (!tol_str.empty()) params["tol"] = tol_str;
  emit_manifest(manifest_path, "dim", sys.resolved, params, results, elapsed(t0));
  return 0;
}

int run_pressure(const std::string& config_path, const std::string& s_str, int n,
                 const std::string& out_path, const std::string& manifest_path) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedSystem sys = load_system_file(config_path);
  Quad s = to_quad(parse_rational(s_str));
  std::vector<PressureEstimate> rows;
  rows.push_back(pressure_bracket(sys.system, s, n));
  if (sys.system.affine()) rows.push_back(pressure_spectral(sys.system, s));
  std::ostringstream csv;
  csv << "s,n,lower,upper,method\n";
  for (const auto& r : rows)
    csv << s_str << "," << r.n << "," << qstr(r.lower) << "," << qstr(r.upper) << ","
        << (r.method == PressureMethod::spectral ? "spectral" : "partition_sum") << "\n";
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw invalid_input("cannot write: " + out_path);
    out << csv.str();
  }
  json results = json::array();
  for (const auto& r : rows)
    results.push_back({{"lower", qstr(r.lower)},
                       {"upper", qstr(r.upper)},
                       {"method", r.method == PressureMethod::spectral ? "spectral"
                                                                       : "partition_sum"},
                       {"certified", r.certified}});
  emit_manifest(manifest_path, "pressure", sys.resolved,
                {{"s", s_str}, {"n", n}, {"out", out_path}}, results, elapsed(t0));
  return 0;
}

int run_netmeasure(const std::string& config_path, const std::string& t_str,
                   const std::string& root_str, const std::string& target_path,
                   const std::string& budget_str, int m, bool one_based,
                   const std::string& manifest_path) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedSystem sys = load_system_file(config_path);
  Quad t = to_quad(parse_rational(t_str));
  Word root;
  if (!root_str.empty() && root_str != "-") {
    std::vector<int> syms = parse_int_list(root_str, "--root");
    root.assign(syms.begin(), syms.end());
  }
  Target target = Target::all();
  if (!target_path.empty()) target = Target::of(load_target_file(target_path, sys.system.shift()));
  int budget;
  if (budget_str == "auto") {
    PositivityReport pos = positivity_generation(sys.system, t);
    if (!pos.found) throw invalid_input("netmeasure: no positivity generation below the cap");
    budget = pos.m + 2;
  } else {
    try {
      budget = std::stoi(budget_str);
    } catch (...) {
      throw invalid_input("--budget: expected an integer or 'auto'");
    }
  }
  NetMeasureResult res =
      m == 1 ? net_measure(sys.system, t, root, target, budget, true)
             : grid_net_measure(sys.system, t, m, root, target, budget, true);
  std::cout << qstr(res.value()) << "\n";
  json cover = json::array();
  for (const Word& w : res.cover.words()) cover.push_back(word_json(w));
  json results = {{"v_lo", qstr(res.v_lo)},       {"v_hi", qstr(res.v_hi)},
                  {"frontier", res.frontier},     {"budget_stable", res.budget_stable},
                  {"certified", res.certified},   {"cover", cover},
                  {"cover_size", res.cover.words().size()}};
  emit_manifest(manifest_path, "netmeasure", sys.resolved,
                {{"t", t_str},
                 {"root", word_str(root, one_based)},
                 {"target", target_path},
                 {"budget", budget_str},
                 {"m", m}},
                results, elapsed(t0));
  return 0;
}

int run_class_test(const std::string& config_path, const std::string& g_path,
                   const std::string& p_str, const std::string& eps_str,
                   const std::string& t_str, int m, const std::string& ms_str, int gen_max,
                   const std::string& out_path, bool one_based,
                   const std::string& manifest_path) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedSystem sys = load_system_file(config_path);
  LocallyConstantFunction g = load_locally_constant_file(g_path, sys.system.shift());
  Rat p = parse_rational(p_str), eps = parse_rational(eps_str);
  Quad t = to_quad(parse_rational(t_str));
  std::vector<int> Ms = parse_int_list(ms_str, "--Ms");
  ClassTestReport rep = class_inequality_scan(sys.system, g, p, eps, t, m, Ms, gen_max,
                                              Quad(0), sys.caps.cylinders);
  // commas inside words clash with the CSV separator; quote the word column
  std::ostringstream csv;
  csv << "cylinder,M,ratio\n";
  for (const auto& e : rep.entries)
    csv << "\"" << word_str(e.cylinder, one_based) << "\"," << e.M << ","
        << qstr(e.ratio) << "\n";
  std::string body = csv.str();
  if (out_path.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(out_path);
    if (!out) throw invalid_input("cannot write: " + out_path);
    out << body;
  }
  std::cout << "c_min=" << qstr(rep.c_min) << " trend_ok=" << (rep.trend_ok ? 1 : 0)
            << " pass=" << (rep.pass ? 1 : 0) << "\n";
  json results = {{"c_min", qstr(rep.c_min)},
                  {"trend_ok", rep.trend_ok},
                  {"pass", rep.pass},
                  {"entries", rep.entries.size()}};
  emit_manifest(manifest_path, "class-test", sys.resolved,
                {{"g", g_path},
                 {"p", p_str},
                 {"eps", eps_str},
                 {"t", t_str},
                 {"m", m},
                 {"Ms", ms_str},
                 {"gen_max", gen_max},
                 {"out", out_path}},
                results, elapsed(t0));
  return rep.pass ? 0 : 1;
}

int run_spectrum(const std::string& config_path, const std::string& g_path, int grid,
                 const std::string& out_path, const std::string& manifest_path) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedSystem sys = load_system_file(config_path);
  LocallyConstantFunction g = load_locally_constant_file(g_path, sys.system.shift());
  if (grid < 2) throw invalid_input("--grid: need at least 2 points");
  auto [pmin, pmax] = attainable_average_range(sys.system.shift(), g);
  std::ostringstream csv;
  csv << "p,dim\n";
  Rat step = (pmax - pmin) / (grid + 1);
  for (int i = 1; i <= grid; ++i) {
    Rat p = pmin + step * i;
    LevelSetDimension d = level_set_dimension(sys.system, g, p);
    csv << rational_to_string(p) << "," << qstr(d.value) << "\n";
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw invalid_input("cannot write: " + out_path);
    out << csv.str();
  }
  emit_manifest(manifest_path, "spectrum", sys.resolved,
                {{"g", g_path}, {"grid", grid}, {"out", out_path}},
                {{"p_min", rational_to_string(pmin)}, {"p_max", rational_to_string(pmax)}},
                elapsed(t0));
  return 0;
}

int run_diophantine(const std::string& alpha_str, const std::string& t_str, int n,
                    const std::string& cyl_str, const std::string& out_path,
                    const std::string& manifest_path) {
  auto t0 = std::chrono::steady_clock::now();
  Rat alpha = parse_rational(alpha_str);
  Rat t = parse_rational(t_str);
  // the cylinder arrives as triadic digits of the Cantor set (0 or 2)
  Word C;
  for (int d : parse_int_list(cyl_str, "--cyl")) {
    if (d != 0 && d != 2) throw invalid_input("--cyl: triadic digits must be 0 or 2");
    C.push_back(d / 2);
  }
  DiophantineBound b = diophantine_measure_bound(C, alpha, n, t);
  const char* status = b.status == BoundStatus::pass
                           ? "pass"
                           : b.status == BoundStatus::fail ? "fail" : "inconclusive";
  std::ostringstream csv;
  csv << "alpha,n,t,cylinder,dp_value,bound,pass\n";
  csv << alpha_str << "," << n << "," << t_str << ",\"" << cyl_str << "\","
      << qstr(b.measure.v_lo) << "," << qstr(b.bound) << ","
      << (b.status == BoundStatus::pass ? 1 : 0) << "\n";
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw invalid_input("cannot write: " + out_path);
    out << csv.str();
  }
  std::cout << "status=" << status
            << " threshold_n=" << (b.threshold_n ? std::to_string(*b.threshold_n) : "none")
            << "\n";
  json results = {{"dp_value", qstr(b.measure.v_lo)},
                  {"bound", qstr(b.bound)},
                  {"status", status}};
  if (b.threshold_n) results["threshold_n"] = *b.threshold_n;
  json config = {{"system", {{"kind", "cantor"}}}};
  emit_manifest(manifest_path, "diophantine", config,
                {{"alpha", alpha_str}, {"t", t_str}, {"n", n}, {"cyl", cyl_str}}, results,
                elapsed(t0));
  return 0;
}

int run_verify(const std::string& config_path, const std::string& manifest_path) {
  auto t0 = std::chrono::steady_clock::now();
  LoadedSystem sys = load_system_file(config_path);
  const GdmsSystem& G = sys.system;
  int failures = 0;
  json checks = json::array();
  auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "ok   " : "FAIL ") << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    checks.push_back({{"name", name}, {"ok", ok}, {"detail", detail}});
    if (!ok) ++failures;
  };

  int osc_max = G.space().planar ? 1 : 3;
  for (int gen = 1; gen <= osc_max; ++gen) {
    OpenSetReport r = verify_open_set_condition(G, gen);
    check("open set condition, generation " + std::to_string(gen), r.pass);
  }

  KappaReport kr = distortion_kappa(G);
  check("distortion constant finite", kr.kappa >= 1 && kr.kappa < Quad(1e6),
        "kappa=" + qstr(kr.kappa));

  // diameter bracket properties on all words of generation <= 3
  bool diam_ok = true;
  Quad xdiam = G.space().diameter();
  for (int gen = 1; gen <= 3 && diam_ok; ++gen)
    for (const Word& w : enumerate_cylinders(gen, G.shift())) {
      CylinderGeometry cg = cylinder_diameter(w, G);
      Quad envelope = pow_qt(to_quad(G.lambda2()), Quad(gen)) * xdiam;
      if (!(cg.d_lo > 0 && cg.d_lo <= cg.d_hi && cg.d_hi <= envelope * Quad(1.000001))) {
        diam_ok = false;
        break;
      }
      if (w.size() > 1) {
        Word parent(w.begin(), w.end() - 1);
        // numeric brackets are sample estimates; allow the distortion budget
        Quad slack = G.affine() ? Quad(1) : kr.kappa;
        if (cg.d_hi > cylinder_diameter(parent, G).d_hi * slack) {
          diam_ok = false;
          break;
        }
      }
    }
  check("cylinder diameter brackets nested and contractive", diam_ok);

  DimensionResult dim = bowen_dimension(G);
  Quad ambient = G.space().planar ? Quad(2) : Quad(1);
  check("Bowen dimension inside (0, ambient]",
        dim.value > 0 && dim.value <= ambient, "dim=" + qstr(dim.value));

  // pressure decreasing in s across the dimension
  Quad s_lo = dim.value / 2, s_hi = std::min(ambient, dim.value * Quad(1.5));
  int n_press = G.affine() ? 8 : 6;
  PressureEstimate p_lo = pressure_bracket(G, s_lo, n_press);
  PressureEstimate p_hi = pressure_bracket(G, s_hi, n_press);
  check("pressure decreasing in s", p_lo.mid() > p_hi.mid());
  check("pressure positive below the dimension", p_lo.upper > 0);

  if (G.affine()) {
    PressureEstimate sp = pressure_spectral(G, dim.value);
    check("spectral pressure vanishes at the dimension",
          abs(sp.mid()) < Quad(1e-7), "P(dim)=" + qstr(sp.mid()));
    PressureEstimate br = pressure_bracket(G, dim.value, 10);
    Quad slack("1e-12");  // two exact pipelines rounded differently
    check("partition bracket contains the spectral value",
          br.lower - slack <= sp.mid() && sp.mid() <= br.upper + slack);

    Quad t = dim.value * Quad(3) / Quad(4);
    PositivityReport pos = positivity_generation(G, t);
    check("positivity generation found below the dimension", pos.found,
          pos.found ? "m=" + std::to_string(pos.m) : "");
    if (pos.found) {
      // the identity needs the grid step at or above the positivity generation
      bool identity_ok = true;
      for (int m : {pos.m, 2 * pos.m}) {
        if (m > 8) continue;
        for (const Word& C : enumerate_cylinders(m, G.shift())) {
          NetMeasureResult r = grid_net_measure(G, t, m, C, Target::all(), 3);
          Quad d = pow_qt(cylinder_diameter(C, G).d_hi, t);
          if (r.value() != d) identity_ok = false;
        }
      }
      check("grid measure equals the diameter power on grid cylinders", identity_ok);

      EquivalenceReport eq = equivalence_constant(G, t, 1, 3, pos.m + 2, 20);
      check("generation-1 grid measure matches the unrestricted measure",
            eq.all_ordered && eq.c1 == 1, "samples=" + std::to_string(eq.samples));
    }
  } else {
    check("numeric system flagged non-certified", !dim.certified);
    Quad ratio_ok = kr.kappa;
    bool bracket_ok = true;
    for (const Word& w : enumerate_cylinders(2, G.shift())) {
      CylinderGeometry cg = cylinder_diameter(w, G);
      if (cg.d_hi / cg.d_lo > ratio_ok * Quad(1.5)) bracket_ok = false;
    }
    check("diameter bracket width within the distortion budget", bracket_ok);
  }

  double wall = elapsed(t0);
  std::cout << (failures == 0 ? "verify: all checks passed" : "verify: FAILURES") << " ("
            << checks.size() << " checks, " << std::fixed << std::setprecision(2) << wall
            << " s)\n";
  emit_manifest(manifest_path, "verify", sys.resolved, json::object(),
                {{"checks", checks}, {"failures", failures}}, wall);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gdms;
  CLI::App app{"computations on conformal graph-directed Markov systems"};
  app.require_subcommand(1);

  if (const char* threads = std::getenv("GDMS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(threads, &end, 10);
    if (end == threads || *end != '\0' || v < 1) {
      std::cerr << "GDMS_THREADS must be a positive integer\n";
      return 1;
    }
  }

  std::string config_path, manifest_path = "manifest.json", out_path;
  bool one_based = false;
  app.add_flag("--one-based", one_based, "print symbols 1-based");

  auto* dim = app.add_subcommand("dim", "Hausdorff dimension via the Bowen equation");
  std::string tol_str;
  dim->add_option("--config", config_path)->required();
  dim->add_option("--tol", tol_str);
  dim->add_option("--manifest", manifest_path);

  auto* pressure = app.add_subcommand("pressure", "pressure bracket at s");
  std::string s_str = "0.5";
  int n = 8;
  pressure->add_option("--config", config_path);
  pressure->add_option("--s", s_str)->required();
  pressure->add_option("--n", n);
  pressure->add_option("--out", out_path);
  pressure->add_option("--manifest", manifest_path);

  auto* netm = app.add_subcommand("netmeasure", "net outer measure of a cylinder target");
  std::string t_str, root_str, target_path, budget_str = "auto";
  int m = 1;
  netm->add_option("--config", config_path)->required();
  netm->add_option("--t", t_str)->required();
  netm->add_option("--root", root_str);
  netm->add_option("--target", target_path);
  netm->add_option("--budget", budget_str);
  netm->add_option("--m", m);
  netm->add_option("--manifest", manifest_path);

  auto* cls = app.add_subcommand("class-test", "cylinder-ratio scan for a Birkhoff level set");
  std::string g_path, p_str, eps_str, ms_str;
  int gen_max = 3;
  cls->add_option("--config", config_path)->required();
  cls->add_option("--g", g_path)->required();
  cls->add_option("--p", p_str)->required();
  cls->add_option("--eps", eps_str)->required();
  cls->add_option("--t", t_str)->required();
  cls->add_option("--m", m);
  cls->add_option("--Ms", ms_str)->required();
  cls->add_option("--gen-max", gen_max);
  cls->add_option("--out", out_path);
  cls->add_option("--manifest", manifest_path);

  auto* spec = app.add_subcommand("spectrum", "level-set dimension over an average grid");
  int grid = 50;
  spec->add_option("--config", config_path)->required();
  spec->add_option("--g", g_path)->required();
  spec->add_option("--grid", grid);
  spec->add_option("--out", out_path);
  spec->add_option("--manifest", manifest_path);

  auto* dio = app.add_subcommand("diophantine",
                                 "measure bound for Cantor-set approximation sets");
  std::string alpha_str, cyl_str;
  dio->add_option("--alpha", alpha_str)->required();
  dio->add_option("--t", t_str)->required();
  dio->add_option("--n", n)->required();
  dio->add_option("--cyl", cyl_str)->required();
  dio->add_option("--out", out_path);
  dio->add_option("--manifest", manifest_path);

  auto* verify = app.add_subcommand("verify", "run the invariant suite for a system");
  verify->add_option("--config", config_path)->required();
  verify->add_option("--manifest", manifest_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (dim->parsed()) return run_dim(config_path, tol_str, manifest_path);
    if (pressure->parsed()) {
      if (config_path.empty()) {
        // default system: the middle-third Cantor construction
        std::string tmp = "/tmp/gdms_default_cantor.json";
        write_json_file(tmp, json{{"system", {{"kind", "cantor"}}}});
        config_path = tmp;
      }
      return run_pressure(config_path, s_str, n, out_path, manifest_path);
    }
    if (netm->parsed())
      return run_netmeasure(config_path, t_str, root_str, target_path, budget_str, m,
                            one_based, manifest_path);
    if (cls->parsed())
      return run_class_test(config_path, g_path, p_str, eps_str, t_str, m, ms_str, gen_max,
                            out_path, one_based, manifest_path);
    if (spec->parsed()) return run_spectrum(config_path, g_path, grid, out_path, manifest_path);
    if (dio->parsed())
      return run_diophantine(alpha_str, t_str, n, cyl_str, out_path, manifest_path);
    if (verify->parsed()) return run_verify(config_path, manifest_path);
  } catch (const resource_limit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 2;
  } catch (const invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
