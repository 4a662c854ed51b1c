#pragma once

#include <fstream>
#include <json.hpp>

#include "gdms/diophantine.hpp"

namespace gdms {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "gdms 1.0.0";

namespace detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  if (!j.is_object()) throw invalid_input(where + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw invalid_input(where + ": unknown key '" + it.key() + "'");
  }
}

inline const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw invalid_input(where + ": missing key '" + std::string(key) + "'");
  return *it;
}

}  // namespace detail

// Rationals arrive as "p/q" strings, integers, or decimal literals.
inline Rat rat_from_json(const json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
    return parse_rational(buf);
  }
  throw invalid_input(where + ": expected a rational (\"p/q\" string or number)");
}

inline json rat_to_json(const Rat& r) { return rational_to_string(r); }

inline Word word_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw invalid_input(where + ": expected an array of symbols");
  Word w;
  for (const auto& s : j) {
    if (!s.is_number_integer() || s.get<long long>() < 0)
      throw invalid_input(where + ": symbols are non-negative integers");
    w.push_back(s.get<int>());
  }
  return w;
}

struct RunCaps {
  std::uint64_t cylinders = kDefaultCylinderCap;
  int depth = 12;
};

struct LoadedSystem {
  GdmsSystem system;
  json resolved;  // normalized config echoed into the manifest
  RunCaps caps;
};

namespace detail {

inline GdmsSystem system_from_json(const json& sys, json& resolved) {
  std::string kind = require(sys, "kind", "system").get<std::string>();
  resolved["kind"] = kind;
  if (kind == "cantor") {
    check_keys(sys, {"kind"}, "system(cantor)");
    return cantor_system();
  }
  if (kind == "golden") {
    check_keys(sys, {"kind", "r0", "r1", "off0", "off1"}, "system(golden)");
    Rat r0 = sys.contains("r0") ? rat_from_json(sys["r0"], "r0") : Rat(1, 3);
    Rat r1 = sys.contains("r1") ? rat_from_json(sys["r1"], "r1") : Rat(1, 3);
    Rat off0 = sys.contains("off0") ? rat_from_json(sys["off0"], "off0") : Rat(0);
    std::optional<Rat> off1;
    if (sys.contains("off1")) off1 = rat_from_json(sys["off1"], "off1");
    resolved["r0"] = rat_to_json(r0);
    resolved["r1"] = rat_to_json(r1);
    resolved["off0"] = rat_to_json(off0);
    GdmsSystem G = golden_mean_system(r0, r1, off0, off1);
    resolved["off1"] = rat_to_json(G.vertex_map(1).offset);
    return G;
  }
  if (kind == "affine") {
    check_keys(sys, {"kind", "q", "A", "maps", "edge_maps", "space", "lambda1", "lambda2"},
               "system(affine)");
    AffineMarkovConfig cfg;
    cfg.q = require(sys, "q", "system(affine)").get<int>();
    const json& A = require(sys, "A", "system(affine)");
    for (const auto& row : A) {
      std::vector<bool> r;
      for (const auto& e : row) r.push_back(e.get<int>() != 0);
      cfg.A.push_back(std::move(r));
    }
    for (const auto& m : require(sys, "maps", "system(affine)")) {
      check_keys(m, {"scale", "offset"}, "system(affine).maps");
      cfg.maps.push_back({rat_from_json(require(m, "scale", "maps"), "scale"),
                          rat_from_json(require(m, "offset", "maps"), "offset")});
    }
    if (sys.contains("edge_maps"))
      for (const auto& m : sys["edge_maps"]) {
        check_keys(m, {"from", "to", "scale", "offset"}, "system(affine).edge_maps");
        cfg.edge_maps[{m["from"].get<int>(), m["to"].get<int>()}] = {
            rat_from_json(require(m, "scale", "edge_maps"), "scale"),
            rat_from_json(require(m, "offset", "edge_maps"), "offset")};
      }
    if (sys.contains("space")) {
      const json& sp = sys["space"];
      if (!sp.is_array() || sp.size() != 2)
        throw invalid_input("system(affine).space: expected [lo, hi]");
      cfg.space = {rat_from_json(sp[0], "space"), rat_from_json(sp[1], "space")};
    }
    if (sys.contains("lambda1")) cfg.lambda1 = rat_from_json(sys["lambda1"], "lambda1");
    if (sys.contains("lambda2")) cfg.lambda2 = rat_from_json(sys["lambda2"], "lambda2");
    GdmsSystem G = affine_markov_system(cfg);
    resolved["q"] = cfg.q;
    json Aj = json::array();
    for (const auto& row : cfg.A) {
      json r = json::array();
      for (bool e : row) r.push_back(e ? 1 : 0);
      Aj.push_back(std::move(r));
    }
    resolved["A"] = std::move(Aj);
    json maps = json::array();
    for (const auto& [s, o] : cfg.maps)
      maps.push_back({{"scale", rat_to_json(s)}, {"offset", rat_to_json(o)}});
    resolved["maps"] = std::move(maps);
    if (!cfg.edge_maps.empty()) {
      json ems = json::array();
      for (const auto& [e, so] : cfg.edge_maps)
        ems.push_back({{"from", e.first},
                       {"to", e.second},
                       {"scale", rat_to_json(so.first)},
                       {"offset", rat_to_json(so.second)}});
      resolved["edge_maps"] = std::move(ems);
    }
    resolved["space"] = {rat_to_json(cfg.space.lo), rat_to_json(cfg.space.hi)};
    resolved["lambda1"] = rat_to_json(G.lambda1());
    resolved["lambda2"] = rat_to_json(G.lambda2());
    return G;
  }
  if (kind == "random_affine") {
    check_keys(sys, {"kind", "seed", "q"}, "system(random_affine)");
    std::uint64_t seed = require(sys, "seed", "system(random_affine)").get<std::uint64_t>();
    int q = sys.contains("q") ? sys["q"].get<int>() : 3;
    resolved["seed"] = seed;
    resolved["q"] = q;
    return random_affine_markov(seed, q);
  }
  if (kind == "interval_map") {
    check_keys(sys, {"kind", "branches"}, "system(interval_map)");
    std::vector<MarkovBranch> branches;
    for (const auto& b : require(sys, "branches", "system(interval_map)")) {
      check_keys(b, {"dom_lo", "dom_hi", "slope", "intercept"}, "branches");
      branches.push_back({rat_from_json(require(b, "dom_lo", "branches"), "dom_lo"),
                          rat_from_json(require(b, "dom_hi", "branches"), "dom_hi"),
                          rat_from_json(require(b, "slope", "branches"), "slope"),
                          rat_from_json(require(b, "intercept", "branches"), "intercept")});
    }
    json bj = json::array();
    for (const auto& b : branches)
      bj.push_back({{"dom_lo", rat_to_json(b.dom_lo)},
                    {"dom_hi", rat_to_json(b.dom_hi)},
                    {"slope", rat_to_json(b.slope)},
                    {"intercept", rat_to_json(b.intercept)}});
    resolved["branches"] = std::move(bj);
    return markov_interval_map_system(branches);
  }
  if (kind == "julia") {
    check_keys(sys, {"kind", "c", "samples", "seed"}, "system(julia)");
    const json& c = require(sys, "c", "system(julia)");
    if (!c.is_array() || c.size() != 2)
      throw invalid_input("system(julia).c: expected [re, im]");
    std::complex<double> cc(c[0].get<double>(), c[1].get<double>());
    std::size_t samples = sys.contains("samples") ? sys["samples"].get<std::size_t>() : 1200;
    std::uint64_t seed = sys.contains("seed") ? sys["seed"].get<std::uint64_t>() : 1234;
    resolved["c"] = {cc.real(), cc.imag()};
    resolved["samples"] = samples;
    resolved["seed"] = seed;
    return julia_system(cc, samples, seed);
  }
  throw invalid_input("system: unknown kind '" + kind + "'");
}

}  // namespace detail

// Accepts either a plain config {"system": ..., "caps": ...} or a previously
// emitted manifest (whose "config" object is used), so manifests round-trip.
inline LoadedSystem load_system(const json& doc) {
  const json* cfg = &doc;
  if (doc.is_object() && doc.contains("config") && doc.contains("version"))
    cfg = &doc["config"];
  detail::check_keys(*cfg, {"system", "caps"}, "config");
  json resolved_sys;
  GdmsSystem G = detail::system_from_json(detail::require(*cfg, "system", "config"),
                                          resolved_sys);
  RunCaps caps;
  if (cfg->contains("caps")) {
    detail::check_keys((*cfg)["caps"], {"cylinders", "depth"}, "caps");
    if ((*cfg)["caps"].contains("cylinders"))
      caps.cylinders = (*cfg)["caps"]["cylinders"].get<std::uint64_t>();
    if ((*cfg)["caps"].contains("depth")) caps.depth = (*cfg)["caps"]["depth"].get<int>();
  }
  json resolved;
  resolved["system"] = std::move(resolved_sys);
  resolved["caps"] = {{"cylinders", caps.cylinders}, {"depth", caps.depth}};
  return {std::move(G), std::move(resolved), caps};
}

inline LoadedSystem load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw invalid_input("config parse error in " + path + ": " + e.what());
  }
  return load_system(doc);
}

// g JSON: {"k": 1, "table": {"0": 1.0, "1": 0.0}}; table keys are words as
// digit strings ("01") or comma-separated symbols ("0,1").
inline LocallyConstantFunction load_locally_constant(const json& doc, const Subshift& S) {
  detail::check_keys(doc, {"k", "table"}, "g");
  LocallyConstantFunction g;
  g.k = detail::require(doc, "k", "g").get<int>();
  const json& table = detail::require(doc, "table", "g");
  if (!table.is_object()) throw invalid_input("g.table: expected an object");
  for (auto it = table.begin(); it != table.end(); ++it) {
    Word w;
    for (std::size_t i = 0; i < it.key().size(); ++i) {
      char ch = it.key()[i];
      if (ch == ',') continue;
      if (ch < '0' || ch > '9') throw invalid_input("g.table: bad word key '" + it.key() + "'");
      w.push_back(ch - '0');
    }
    g.table[w] = rat_from_json(it.value(), "g.table");
  }
  g.validate(S);
  return g;
}

inline LocallyConstantFunction load_locally_constant_file(const std::string& path,
                                                          const Subshift& S) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open g file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw invalid_input("g parse error in " + path + ": " + e.what());
  }
  return load_locally_constant(doc, S);
}

// Target JSON: {"words": [[0,2],[2,0,0], ...]}
inline CylinderSet load_target(const json& doc, const Subshift& S) {
  detail::check_keys(doc, {"words"}, "target");
  std::vector<Word> words;
  for (const auto& wj : detail::require(doc, "words", "target")) {
    Word w = word_from_json(wj, "target.words");
    if (!is_admissible(w, S)) throw invalid_input("target: inadmissible word");
    words.push_back(std::move(w));
  }
  return CylinderSet::canonical(std::move(words));
}

inline CylinderSet load_target_file(const std::string& path, const Subshift& S) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open target file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw invalid_input("target parse error in " + path + ": " + e.what());
  }
  return load_target(doc, S);
}

inline json make_manifest(const std::string& command, json resolved_config, json params,
                          json results, double wall_time_s) {
  json m;
  m["version"] = kToolVersion;
  m["command"] = command;
  m["config"] = std::move(resolved_config);
  m["params"] = std::move(params);
  m["results"] = std::move(results);
  m["wall_time_s"] = wall_time_s;
  return m;
}

inline void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot write file: " + path);
  out << doc.dump(2) << "\n";
}

}  // namespace gdms
