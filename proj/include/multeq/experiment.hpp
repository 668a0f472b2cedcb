#pragma once

// Configured experiments: config parsing, per-point computation, sweeps,
// the result cache and report emission. Drives the command-line tool.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "multeq/energy.hpp"
#include "multeq/error.hpp"
#include "multeq/ffield.hpp"
#include "multeq/latgeom.hpp"
#include "multeq/rational.hpp"
#include "multeq/siegel.hpp"
#include "multeq/structsets.hpp"
#include "multeq/verify.hpp"

namespace multeq::experiment {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "multeq-1.0.0";

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{
      "field-info",  "energy",       "minima",           "bohr",        "siegel",
      "verify-lemma5", "verify-lemma6", "verify-thm1",   "verify-thm2", "verify-reduction",
      "verify-shao", "verify-membership", "sweep"};
  return c;
}

/// Thrown for malformed configs; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config

struct FieldConfig {
  std::int64_t q = 0;
  int n = 1;
  std::optional<Poly> poly;
  std::optional<Matrix> basis;  // rows are w_j in power-basis coordinates
};

struct SweepConfig {
  std::string kind;  // thm1 | lattice | lemma5 | lemma6 | thm2 | membership
  std::vector<std::int64_t> q;
  std::vector<int> n{2};
  std::vector<int> d{1, 2};
  std::vector<std::int64_t> H_values{2, 3};
  std::optional<std::vector<std::vector<std::int64_t>>> H;
  std::int64_t max_order = 200;
  int alpha_samples = 8;
  int omega_samples = 2;
  std::string basis = "power";  // power | random
  double budget = 1e12;
};

struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::optional<FieldConfig> field;
  std::string set = "units";  // units | all | explicit | box | gap | bohr
  std::vector<Json> elements;
  std::optional<BoxSpec> box;
  std::optional<GapSpec> gap;
  std::optional<BohrSpec> bohr;
  std::optional<std::int64_t> shao_H;
  std::vector<std::int64_t> H;
  std::optional<std::vector<std::int64_t>> z;
  std::optional<std::int64_t> omega;
  std::vector<Rational> deltas;
  Matrix matrix;
  std::vector<std::vector<Rational>> eps_grid;
  std::optional<SweepConfig> sweep;
  Rational growth_factor{2};
  std::string out_dir = "out";
  std::optional<std::string> cache_file;
  int jobs = 1;
  bool use_cache = true;
};

namespace detail {

inline void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; });
    if (!ok) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

inline std::int64_t get_int(const Json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  return v.get<std::int64_t>();
}

inline std::vector<std::int64_t> get_ints(const Json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError(what + " must be an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& x : v) out.push_back(get_int(x, what));
  return out;
}

inline Matrix get_matrix(const Json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError(what + " must be an array of rows");
  Matrix m;
  for (const auto& row : v) m.push_back(get_ints(row, what));
  return m;
}

inline Rational get_rational(const Json& v, const std::string& what) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(what + " must be an integer or a \"num/den\" string");
}

inline std::vector<Rational> get_rationals(const Json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError(what + " must be an array");
  std::vector<Rational> out;
  for (const auto& x : v) out.push_back(get_rational(x, what));
  return out;
}

inline Json rationals_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(r.str());
  return a;
}

}  // namespace detail

inline ExperimentConfig parse_config(const Json& j) {
  using namespace detail;
  check_keys(j, {"command", "seed", "field", "set", "elements", "box", "gap", "bohr", "shao", "H", "z", "omega",
                 "deltas", "matrix", "eps_grid", "sweep", "thresholds", "output", "cache"},
             "config");
  ExperimentConfig c;
  if (j.contains("command")) {
    if (!j["command"].is_string()) throw ConfigError("command must be a string");
    c.command = j["command"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) throw ConfigError("seed must be an integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("field")) {
    const Json& f = j["field"];
    check_keys(f, {"q", "n", "poly", "basis"}, "field");
    if (!f.contains("q")) throw ConfigError("field.q is required");
    FieldConfig fc;
    fc.q = get_int(f["q"], "field.q");
    if (f.contains("n")) fc.n = static_cast<int>(get_int(f["n"], "field.n"));
    if (f.contains("poly")) fc.poly = get_ints(f["poly"], "field.poly");
    if (f.contains("basis")) fc.basis = get_matrix(f["basis"], "field.basis");
    c.field = fc;
  }
  if (j.contains("set")) {
    if (!j["set"].is_string()) throw ConfigError("set must be a string");
    c.set = j["set"].get<std::string>();
    static const std::set<std::string> kinds{"units", "all", "explicit", "box", "gap", "bohr"};
    if (!kinds.count(c.set)) throw ConfigError("unknown set kind '" + c.set + "'");
  }
  if (j.contains("elements")) {
    if (!j["elements"].is_array()) throw ConfigError("elements must be an array");
    for (const auto& e : j["elements"]) c.elements.push_back(e);
  }
  if (j.contains("box")) {
    check_keys(j["box"], {"M", "H"}, "box");
    BoxSpec b;
    if (!j["box"].contains("H")) throw ConfigError("box.H is required");
    b.H = get_ints(j["box"]["H"], "box.H");
    b.M = j["box"].contains("M") ? get_ints(j["box"]["M"], "box.M") : std::vector<std::int64_t>(b.H.size(), 0);
    c.box = b;
  }
  if (j.contains("gap")) {
    check_keys(j["gap"], {"alphas", "H", "beta"}, "gap");
    GapSpec g;
    if (!j["gap"].contains("alphas") || !j["gap"].contains("H")) throw ConfigError("gap.alphas and gap.H are required");
    g.alphas = get_ints(j["gap"]["alphas"], "gap.alphas");
    g.H = get_int(j["gap"]["H"], "gap.H");
    if (j["gap"].contains("beta")) g.beta = get_int(j["gap"]["beta"], "gap.beta");
    c.gap = g;
  }
  if (j.contains("bohr")) {
    check_keys(j["bohr"], {"alphas", "eps"}, "bohr");
    if (!j["bohr"].contains("alphas") || !j["bohr"].contains("eps")) throw ConfigError("bohr.alphas and bohr.eps are required");
    c.bohr = BohrSpec{get_ints(j["bohr"]["alphas"], "bohr.alphas"), get_rationals(j["bohr"]["eps"], "bohr.eps")};
  }
  if (j.contains("shao")) {
    check_keys(j["shao"], {"H"}, "shao");
    if (!j["shao"].contains("H")) throw ConfigError("shao.H is required");
    c.shao_H = get_int(j["shao"]["H"], "shao.H");
  }
  if (j.contains("H")) c.H = get_ints(j["H"], "H");
  if (j.contains("z")) c.z = get_ints(j["z"], "z");
  if (j.contains("omega")) c.omega = get_int(j["omega"], "omega");
  if (j.contains("deltas")) c.deltas = get_rationals(j["deltas"], "deltas");
  if (j.contains("matrix")) c.matrix = get_matrix(j["matrix"], "matrix");
  if (j.contains("eps_grid")) {
    if (!j["eps_grid"].is_array()) throw ConfigError("eps_grid must be an array");
    for (const auto& p : j["eps_grid"]) c.eps_grid.push_back(get_rationals(p, "eps_grid"));
  }
  if (j.contains("sweep")) {
    const Json& s = j["sweep"];
    check_keys(s, {"kind", "q", "n", "d", "H_values", "H", "max_order", "alpha_samples", "omega_samples", "basis", "budget"},
               "sweep");
    SweepConfig sc;
    if (!s.contains("kind") || !s["kind"].is_string()) throw ConfigError("sweep.kind is required");
    sc.kind = s["kind"].get<std::string>();
    static const std::set<std::string> kinds{"thm1", "lattice", "lemma5", "lemma6", "thm2", "membership"};
    if (!kinds.count(sc.kind)) throw ConfigError("unknown sweep kind '" + sc.kind + "'");
    if (s.contains("q")) sc.q = get_ints(s["q"], "sweep.q");
    if (s.contains("n")) {
      sc.n.clear();
      for (auto v : get_ints(s["n"], "sweep.n")) sc.n.push_back(static_cast<int>(v));
    }
    if (s.contains("d")) {
      sc.d.clear();
      for (auto v : get_ints(s["d"], "sweep.d")) sc.d.push_back(static_cast<int>(v));
    }
    if (s.contains("H_values")) sc.H_values = get_ints(s["H_values"], "sweep.H_values");
    if (s.contains("H")) sc.H = get_matrix(s["H"], "sweep.H");
    if (s.contains("max_order")) sc.max_order = get_int(s["max_order"], "sweep.max_order");
    if (s.contains("alpha_samples")) sc.alpha_samples = static_cast<int>(get_int(s["alpha_samples"], "sweep.alpha_samples"));
    if (s.contains("omega_samples")) sc.omega_samples = static_cast<int>(get_int(s["omega_samples"], "sweep.omega_samples"));
    if (s.contains("basis")) {
      if (!s["basis"].is_string()) throw ConfigError("sweep.basis must be a string");
      sc.basis = s["basis"].get<std::string>();
      if (sc.basis != "power" && sc.basis != "random") throw ConfigError("sweep.basis must be power or random");
    }
    if (s.contains("budget")) {
      if (!s["budget"].is_number()) throw ConfigError("sweep.budget must be a number");
      sc.budget = s["budget"].get<double>();
    }
    c.sweep = sc;
  }
  if (j.contains("thresholds")) {
    check_keys(j["thresholds"], {"growth_factor"}, "thresholds");
    if (j["thresholds"].contains("growth_factor"))
      c.growth_factor = get_rational(j["thresholds"]["growth_factor"], "thresholds.growth_factor");
    if (c.growth_factor <= Rational(0)) throw ConfigError("growth_factor must be positive");
  }
  if (j.contains("output")) {
    check_keys(j["output"], {"dir"}, "output");
    if (j["output"].contains("dir")) {
      if (!j["output"]["dir"].is_string()) throw ConfigError("output.dir must be a string");
      c.out_dir = j["output"]["dir"].get<std::string>();
    }
  }
  if (j.contains("cache")) {
    check_keys(j["cache"], {"file"}, "cache");
    if (j["cache"].contains("file")) {
      if (!j["cache"]["file"].is_string()) throw ConfigError("cache.file must be a string");
      c.cache_file = j["cache"]["file"].get<std::string>();
    }
  }
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

/// Canonical form of the experiment-defining fields (paths, jobs and cache
/// switches excluded), embedded in reports.
inline Json config_json(const ExperimentConfig& c) {
  Json j;
  j["command"] = c.command;
  j["seed"] = c.seed;
  if (c.field) {
    Json f;
    f["q"] = c.field->q;
    f["n"] = c.field->n;
    if (c.field->poly) f["poly"] = *c.field->poly;
    if (c.field->basis) f["basis"] = *c.field->basis;
    j["field"] = f;
  }
  j["set"] = c.set;
  if (!c.elements.empty()) j["elements"] = c.elements;
  if (c.box) j["box"] = {{"M", c.box->M}, {"H", c.box->H}};
  if (c.gap) j["gap"] = {{"alphas", c.gap->alphas}, {"H", c.gap->H}, {"beta", c.gap->beta}};
  if (c.bohr) j["bohr"] = {{"alphas", c.bohr->alphas}, {"eps", detail::rationals_json(c.bohr->eps)}};
  if (c.shao_H) j["shao"] = {{"H", *c.shao_H}};
  if (!c.H.empty()) j["H"] = c.H;
  if (c.z) j["z"] = *c.z;
  if (c.omega) j["omega"] = *c.omega;
  if (!c.deltas.empty()) j["deltas"] = detail::rationals_json(c.deltas);
  if (!c.matrix.empty()) j["matrix"] = c.matrix;
  if (!c.eps_grid.empty()) {
    Json g = Json::array();
    for (const auto& p : c.eps_grid) g.push_back(detail::rationals_json(p));
    j["eps_grid"] = g;
  }
  if (c.sweep) {
    const auto& s = *c.sweep;
    Json sj;
    sj["kind"] = s.kind;
    sj["q"] = s.q;
    sj["n"] = s.n;
    sj["d"] = s.d;
    sj["H_values"] = s.H_values;
    if (s.H) sj["H"] = *s.H;
    sj["max_order"] = s.max_order;
    sj["alpha_samples"] = s.alpha_samples;
    sj["omega_samples"] = s.omega_samples;
    sj["basis"] = s.basis;
    j["sweep"] = sj;
  }
  j["thresholds"] = {{"growth_factor", c.growth_factor.str()}};
  return j;
}

// ---------------------------------------------------------------------------
// Hashing and seeded sampling

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 15];
  return s;
}

/// Independent stream for a named choice under the run seed.
inline std::mt19937_64 stream(std::uint64_t seed, const std::string& tag) {
  std::uint64_t x = seed ^ fnv1a(tag);
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return std::mt19937_64(x ^ (x >> 31));
}

/// Uniform in [lo, hi]; modulo reduction keeps results identical across
/// standard libraries.
inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline Matrix random_basis(std::int64_t q, int n, std::mt19937_64& rng) {
  while (true) {
    Matrix m(n, std::vector<std::int64_t>(n));
    for (auto& row : m)
      for (auto& x : row) x = draw(rng, 0, q - 1);
    if (inverse_mod(m, q)) return m;
  }
}

// ---------------------------------------------------------------------------
// Result cache

struct ResultCacheEntry {
  std::string digest;
  std::string kind;
  Json payload;
  std::string version;
};

/// Append-only JSON-lines file of digest-keyed payloads. Unreadable lines and
/// entries from other versions are ignored.
class ResultCache {
 public:
  ResultCache() = default;
  explicit ResultCache(std::filesystem::path file) : file_(std::move(file)), enabled_(true) {
    std::ifstream in(file_);
    std::string line;
    while (std::getline(in, line)) {
      try {
        Json j = Json::parse(line);
        if (j.at("version").get<std::string>() != kVersion) continue;
        entries_[j.at("digest").get<std::string>()] = j.at("payload");
      } catch (const std::exception&) {
        continue;
      }
    }
  }

  bool enabled() const { return enabled_; }

  std::optional<Json> get(const std::string& digest) const {
    auto it = entries_.find(digest);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(const ResultCacheEntry& e) {
    if (!enabled_) return;
    entries_[e.digest] = e.payload;
    if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
    std::ofstream out(file_, std::ios::app);
    Json j;
    j["digest"] = e.digest;
    j["kind"] = e.kind;
    j["version"] = e.version;
    j["payload"] = e.payload;
    out << j.dump() << '\n';
  }

 private:
  std::filesystem::path file_;
  bool enabled_ = false;
  std::map<std::string, Json> entries_;
};

inline std::string point_digest(const std::string& kind, const Json& params) {
  return hex64(fnv1a(std::string(kVersion) + '\n' + kind + '\n' + params.dump()));
}

// ---------------------------------------------------------------------------
// Points

struct Point {
  std::string kind;
  Json params;
};

inline Json report_json(const VerifyReport& r) {
  Json j;
  j["kind"] = r.kind;
  Json p = Json::object();
  for (const auto& [k, v] : r.parameters) p[k] = v;
  j["parameters"] = p;
  j["observed_constant"] = r.observed.str();
  j["observed_real"] = fmt6(r.observed.value);
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  j["informational"] = r.informational;
  Json w = Json::object();
  for (const auto& [k, v] : r.witnesses) w[k] = v;
  j["witnesses"] = w;
  Json d = Json::object();
  for (const auto& [k, v] : r.details) d[k] = v;
  j["details"] = d;
  return j;
}

inline Json field_json(const FieldParams& f) {
  Json j;
  j["q"] = f.q;
  j["n"] = f.n;
  j["poly"] = f.modulus;
  j["basis"] = transpose(f.basis);
  return j;
}

inline FieldParams field_from_json(const Json& j) {
  return make_field(j.at("q").get<std::int64_t>(), j.at("n").get<int>(), j.at("poly").get<Poly>(),
                    transpose(j.at("basis").get<Matrix>()));
}

inline FieldParams field_from_config(const FieldConfig& c) {
  std::optional<Matrix> cols;
  if (c.basis) cols = transpose(*c.basis);
  return make_field(c.q, c.n, c.poly, cols);
}

inline std::vector<Rational> rationals_from(const Json& j) {
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(Rational::parse(x.get<std::string>()));
  return out;
}

inline Json grid_json(const std::vector<std::vector<Rational>>& grid) {
  Json g = Json::array();
  for (const auto& p : grid) g.push_back(detail::rationals_json(p));
  return g;
}

inline std::vector<std::vector<Rational>> grid_from(const Json& j) {
  std::vector<std::vector<Rational>> g;
  for (const auto& p : j) g.push_back(rationals_from(p));
  return g;
}

inline GapSpec gap_from(const Json& p) {
  GapSpec g;
  g.alphas = p.at("alphas").get<std::vector<std::int64_t>>();
  g.H = p.at("H").get<std::int64_t>();
  g.beta = p.contains("beta") ? p["beta"].get<std::int64_t>() : 0;
  return g;
}

/// Table cells shared by all point kinds.
struct RowValues {
  std::string primary, primary_real, secondary, secondary_real;
};

inline Json row_json(const RowValues& r) {
  return {{"primary", r.primary}, {"primary_real", r.primary_real}, {"secondary", r.secondary},
          {"secondary_real", r.secondary_real}};
}

inline Json outcome(Json result, bool pass, bool asserted, const RowValues& row, std::vector<std::string> failures = {}) {
  Json j;
  j["result"] = std::move(result);
  j["pass"] = pass;
  j["asserted"] = asserted;
  j["failures"] = failures;
  j["row"] = row_json(row);
  return j;
}

inline Json minima_json(const MinimaReport& r) {
  Json j;
  j["minima"] = detail::rationals_json(r.minima);
  j["witnesses"] = r.witnesses;
  j["denom"] = r.denom;
  j["s_index"] = r.s_index;
  return j;
}

/// Minima of a lattice/body pair and its dual with both certificates; the
/// certificate violations are recorded instead of thrown.
inline Json lattice_pair_json(const IntLattice& L, const BodySpec& B, std::vector<std::string>& failures) {
  MinimaReport rp = successive_minima(L, B);
  IntLattice Ld = dual_lattice(L);
  BodySpec Bd = dual_body(B);
  MinimaReport rd = successive_minima(Ld, Bd);
  Json j;
  j["primal"] = minima_json(rp);
  j["dual"] = minima_json(rd);
  j["det"] = L.det_abs.str();
  j["volume"] = B.volume.str();
  using Side = std::tuple<const char*, const MinimaReport*, const BodySpec*, const IntLattice*>;
  for (const auto& [name, rep, body, lat] : {Side{"minkowski_primal", &rp, &B, &L}, Side{"minkowski_dual", &rd, &Bd, &Ld}}) {
    try {
      MinkowskiCertificate c = minkowski_certificate(*rep, *body, *lat);
      j[name] = {{"product", c.product.str()}, {"lower_margin", c.lower_margin.str()},
                 {"upper_margin", c.upper_margin.str()}, {"holds", true}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CertificateViolation) throw;
      j[name] = {{"holds", false}, {"message", e.what()}};
      failures.push_back(e.what());
    }
  }
  try {
    TransferenceCertificate t = transference_certificate(rp, rd);
    j["transference"] = {{"products", detail::rationals_json(t.products)}, {"max_product", t.max_product.str()},
                         {"holds", true}};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::CertificateViolation) throw;
    j["transference"] = {{"holds", false}, {"message", e.what()}};
    failures.push_back(e.what());
  }
  return j;
}

inline std::string detail_value(const VerifyReport& r, const std::string& key) {
  for (const auto& [k, v] : r.details)
    if (k == key) return v;
  return "";
}

inline RowValues report_row(const VerifyReport& r) { return {r.observed.str(), fmt6(r.observed.value), "", ""}; }

inline ElementSet energy_set(const FieldParams& f, const Json& p) {
  const std::string kind = p.at("set").get<std::string>();
  if (kind == "units" || kind == "all") {
    std::vector<std::int64_t> codes;
    for (std::int64_t c = kind == "units" ? 1 : 0; c < f.order; ++c) codes.push_back(c);
    return ElementSet::from_codes(std::move(codes));
  }
  if (kind == "explicit") return ElementSet::from_codes(p.at("elements").get<std::vector<std::int64_t>>());
  if (kind == "box") return enumerate_box(f, BoxSpec{p.at("M").get<std::vector<std::int64_t>>(),
                                                     p.at("H").get<std::vector<std::int64_t>>()});
  if (f.n != 1) fail(ErrorKind::InvalidArgument, "progressions and Bohr sets live in F_q (n = 1)");
  if (kind == "gap") return enumerate_gap(f.q, gap_from(p.at("gap")));
  if (kind == "bohr")
    return enumerate_bohr(f.q, BohrSpec{p.at("alphas").get<std::vector<std::int64_t>>(), rationals_from(p.at("eps"))});
  fail(ErrorKind::InvalidArgument, "unknown set kind " + kind);
}

inline Json histogram_json(const Histogram& h) {
  Json a = Json::array();
  for (const auto& [k, v] : h) a.push_back({k, v});
  return a;
}

/// Full diagnostic bundle for one progression of the progression sweep.
inline Json thm2_bundle(const Json& p, std::vector<std::string>& failures, RowValues& row, bool& pass) {
  const std::int64_t q = p.at("q").get<std::int64_t>();
  GapSpec spec = gap_from(p);
  Json out;

  VerifyReport t2 = verify_theorem2(q, spec);
  out["theorem2"] = report_json(t2);
  bool cs = detail_value(t2, "cauchy_schwarz_holds") == "true";
  if (!cs) failures.push_back("Cauchy-Schwarz certificate failed");

  TranslateReport tr = energy_translate(q, spec, p.at("translate_beta").get<std::int64_t>());
  out["translate"] = {{"beta", p["translate_beta"]}, {"E_translated", tr.E_translated},
                      {"E_symmetric", tr.E_symmetric}, {"set_size", tr.set_size},
                      {"inequality_holds", tr.inequality_holds}};
  if (!tr.inequality_holds) failures.push_back("translate inequality failed");

  // Parseval and the Fourier certificate.
  ElementSet A = enumerate_gap(q, spec);
  double sum_sq = 0, max_cert = 0;
  for (std::int64_t y = 0; y < q; ++y) {
    FourierValue fv = gap_fourier(q, spec, y);
    sum_sq += fv.magnitude * fv.magnitude;
    if (y != 0) max_cert = std::max(max_cert, fv.certificate);
  }
  double expected = static_cast<double>(A.size()) / static_cast<double>(q);
  bool parseval_ok = std::abs(sum_sq - expected) <= 1e-9;
  bool cert_ok = max_cert <= 1 + 1e-9;
  out["fourier"] = {{"parseval_sum", fmt6(sum_sq)},
                    {"parseval_expected", Rational(static_cast<std::int64_t>(A.size()), q).str()},
                    {"parseval_ok", parseval_ok},
                    {"max_certificate", fmt6(max_cert)},
                    {"certificate_ok", cert_ok}};
  if (!parseval_ok) failures.push_back("Parseval identity failed");
  if (!cert_ok) failures.push_back("Fourier certificate exceeded 1");

  Json lats = Json::array();
  for (const auto& w : p.at("omegas")) {
    auto [L, B] = gamma_gap(q, spec, w.get<std::int64_t>());
    Json lj = lattice_pair_json(L, B, failures);
    lj["omega"] = w;
    lats.push_back(lj);
  }
  out["gap_lattices"] = lats;

  VerifyReport red = verify_reduction_lemma(q, spec, grid_from(p.at("eps_grid")));
  out["reduction"] = report_json(red);

  // Bohr-set size bound with the kernel range H^2 and eps capped at 1/2.
  std::set<std::vector<Rational>> eps_points;
  for (const auto& e : grid_from(p.at("eps_grid"))) {
    std::vector<Rational> c;
    for (const auto& x : e) c.push_back(min(x, Rational(1, 2)));
    eps_points.insert(c);
  }
  std::optional<VerifyReport> worst;
  for (const auto& e : eps_points) {
    VerifyReport s = verify_shao(q, spec.alphas, spec.H * spec.H, e);
    if (!worst || s.observed.exact.value() > worst->observed.exact.value()) worst = s;
  }
  out["shao"] = report_json(*worst);

  pass = failures.empty() && t2.pass && red.pass;
  row = {t2.observed.str(), fmt6(t2.observed.value), red.observed.str(), fmt6(red.observed.value)};
  return out;
}

/// Computes one point; the payload is a pure function of (kind, params).
inline Json compute_point(const Point& pt) {
  const Json& p = pt.params;
  const std::string& k = pt.kind;
  std::vector<std::string> failures;

  if (k == "field-info") {
    FieldParams f = field_from_json(p.at("field"));
    Json r;
    r["description"] = describe(f);
    r["order"] = f.order;
    r["modulus"] = f.modulus;
    r["basis"] = transpose(f.basis);
    return outcome(r, true, false, {std::to_string(f.order), "", "", ""});
  }
  if (k == "energy") {
    FieldParams f = field_from_json(p.at("field"));
    ElementSet A = energy_set(f, p);
    EnergyReport e = mult_energy(f, A);
    ProductSetReport ps = product_set(f, A);
    Json r;
    r["set_size"] = e.set_size;
    r["E"] = e.E;
    r["zero_count"] = e.zero_count;
    r["product_set_size"] = ps.product_set_size;
    r["cauchy_schwarz_holds"] = ps.cauchy_schwarz_holds;
    r["histogram_agreement"] = e.I_hist.has_value() ? Json(true) : Json(nullptr);
    r["r_hist"] = histogram_json(e.r_hist);
    r["I_hist"] = e.I_hist ? histogram_json(*e.I_hist) : Json(nullptr);
    if (!ps.cauchy_schwarz_holds) failures.push_back("Cauchy-Schwarz certificate failed");
    return outcome(r, ps.cauchy_schwarz_holds, true, {std::to_string(e.E), "", std::to_string(ps.product_set_size), ""},
                   failures);
  }
  if (k == "minima") {
    Json r;
    if (p.contains("field")) {
      FieldParams f = field_from_json(p.at("field"));
      auto [L, B] = gamma_box(f, ff_elem(f, p.at("z").get<std::vector<std::int64_t>>()),
                              p.at("H").get<std::vector<std::int64_t>>());
      r = lattice_pair_json(L, B, failures);
    } else {
      const std::int64_t q = p.at("q").get<std::int64_t>();
      auto [L, B] = gamma_gap(q, gap_from(p.at("gap")), p.at("omega").get<std::int64_t>(), rationals_from(p.at("deltas")));
      r = lattice_pair_json(L, B, failures);
    }
    std::string l1 = r["primal"]["minima"][0].get<std::string>();
    std::string d1 = r["dual"]["minima"][0].get<std::string>();
    return outcome(r, failures.empty(), true,
                   {l1, fmt6(Rational::parse(l1).to_double()), d1, fmt6(Rational::parse(d1).to_double())}, failures);
  }
  if (k == "bohr") {
    const std::int64_t q = p.at("q").get<std::int64_t>();
    ElementSet B = enumerate_bohr(q, BohrSpec{p.at("alphas").get<std::vector<std::int64_t>>(), rationals_from(p.at("eps"))});
    Json r;
    r["size"] = B.size();
    r["elements"] = B.elements;
    return outcome(r, true, false, {std::to_string(B.size()), "", "", ""});
  }
  if (k == "siegel") {
    SiegelSolution s = siegel_solve(p.at("matrix").get<Matrix>());
    bool kernel = is_kernel_vector(s.instance.A, s.t);
    bool within = s.instance.gram_det == 0 || s.sup_norm <= s.instance.bound;
    Json r;
    r["t"] = s.t;
    r["sup_norm"] = s.sup_norm;
    r["gram_det"] = s.instance.gram_det;
    r["bound"] = s.instance.bound;
    r["bound_real"] = fmt6(std::pow(static_cast<double>(s.instance.gram_det), 1.0 / (2.0 * (s.instance.M - s.instance.L))));
    r["kernel_ok"] = kernel;
    r["within_bound"] = within;
    if (!kernel) failures.push_back("returned vector is not in the kernel");
    if (!within) failures.push_back("sup-norm exceeds the bound");
    return outcome(r, failures.empty(), true, {std::to_string(s.sup_norm), "", std::to_string(s.instance.bound), ""},
                   failures);
  }
  if (k == "lemma5" || k == "lemma6" || k == "lattice") {
    FieldParams f = field_from_json(p.at("field"));
    FieldMinima fm = field_minima(f, p.at("H").get<std::vector<std::int64_t>>());
    VerifyReport r5 = verify_lemma5(f, fm);
    VerifyReport r6 = verify_lemma6(f, fm);
    if (fm.minkowski_violations) failures.push_back("Minkowski certificate violated");
    if (fm.transference_violations) failures.push_back("transference lower bound violated");
    Json r;
    if (k != "lemma6") {
      r["lemma5"] = report_json(r5);
      if (!r5.informational && !r5.pass)
        failures.push_back("lemma5: min lambda_i H_i = " + r5.observed.str() + " at z=" + r5.witnesses[0].second +
                           " i=" + r5.witnesses[1].second);
    }
    if (k != "lemma5") {
      r["lemma6"] = report_json(r6);
      if (!r6.informational && !r6.pass) failures.push_back("lemma6: c_obs not positive");
    }
    RowValues row{r5.observed.str(), fmt6(r5.observed.value), r6.observed.str(), fmt6(r6.observed.value)};
    if (k == "lemma6") row = {r6.observed.str(), fmt6(r6.observed.value), "", ""};
    if (k == "lemma5") row.secondary = row.secondary_real = "";
    return outcome(r, failures.empty(), true, row, failures);
  }
  if (k == "thm1") {
    FieldParams f = field_from_json(p.at("field"));
    VerifyReport r = verify_theorem1(f, BoxSpec{p.at("M").get<std::vector<std::int64_t>>(),
                                               p.at("H").get<std::vector<std::int64_t>>()});
    bool cs = detail_value(r, "cauchy_schwarz_holds") == "true";
    if (!cs) failures.push_back("Cauchy-Schwarz certificate failed");
    if (!r.pass) failures.push_back("ratio not finite");
    return outcome(report_json(r), failures.empty(), !r.informational, report_row(r), failures);
  }
  if (k == "thm2") {
    VerifyReport r = verify_theorem2(p.at("q").get<std::int64_t>(), gap_from(p));
    bool cs = detail_value(r, "cauchy_schwarz_holds") == "true";
    if (!cs) failures.push_back("Cauchy-Schwarz certificate failed");
    return outcome(report_json(r), r.pass && cs, true, report_row(r), failures);
  }
  if (k == "thm2-sweep") {
    RowValues row;
    bool pass = false;
    Json r = thm2_bundle(p, failures, row, pass);
    return outcome(r, pass, true, row, failures);
  }
  if (k == "reduction") {
    VerifyReport r = verify_reduction_lemma(p.at("q").get<std::int64_t>(), gap_from(p), grid_from(p.at("eps_grid")));
    return outcome(report_json(r), r.pass, true, report_row(r));
  }
  if (k == "shao") {
    VerifyReport r = verify_shao(p.at("q").get<std::int64_t>(), p.at("alphas").get<std::vector<std::int64_t>>(),
                                 p.at("H").get<std::int64_t>(), rationals_from(p.at("eps")));
    return outcome(report_json(r), r.pass, true, report_row(r));
  }
  if (k == "membership") {
    FieldParams f = field_from_json(p.at("field"));
    VerifyReport r = verify_membership_uniqueness(f, p.at("H").get<std::vector<std::int64_t>>());
    if (!r.pass) failures.push_back("multi-membership points found");
    return outcome(report_json(r), r.pass, true, report_row(r), failures);
  }
  fail(ErrorKind::InvalidArgument, "unknown point kind " + k);
}

/// Hypothesis failures become failed checks with the witness as message.
inline Json compute_point_guarded(const Point& pt) {
  try {
    return compute_point(pt);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ImproperHypothesis && e.kind() != ErrorKind::KernelConditionFails) throw;
    Json r;
    r["error"] = std::string(to_string(e.kind()));
    r["message"] = e.what();
    return outcome(r, false, true, {"", "", "", ""}, {e.what()});
  }
}

// ---------------------------------------------------------------------------
// Point generation

/// Monotone H = (H_1 >= ... >= H_n), H_1 <= q, meeting both conditions with constant 1.
inline std::vector<std::vector<std::int64_t>> admissible_sides(std::int64_t q, int n) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> H(n, 1);
  std::function<void(int, std::int64_t)> rec = [&](int i, std::int64_t cap) {
    if (i == n) {
      if (check_conditions_thm1(q, n, H).holds()) out.push_back(H);
      return;
    }
    for (std::int64_t h = 1; h <= cap; ++h) {
      H[i] = h;
      rec(i + 1, h);
    }
  };
  rec(0, q);
  std::sort(out.begin(), out.end());
  return out;
}

inline FieldParams sweep_field(std::int64_t q, int n, const SweepConfig& s, std::uint64_t seed) {
  if (s.basis == "power" || n == 1) return make_field(q, n);
  auto rng = stream(seed, "basis:" + std::to_string(q) + ":" + std::to_string(n));
  return make_field(q, n, std::nullopt, random_basis(q, n, rng));
}

/// All d = 2 multipliers a in [2, q-2] whose range-H^2 progression (1, a) is
/// proper, thinned to a seeded sample.
inline std::vector<std::vector<std::int64_t>> thm2_alphas(std::int64_t q, int d, std::int64_t H, int samples,
                                                          std::uint64_t seed) {
  if (d == 1) return {{1}};
  std::vector<std::vector<std::int64_t>> proper;
  std::vector<std::int64_t> a(d, 1);
  std::function<void(int)> rec = [&](int i) {
    if (i == d) {
      GapSpec g{a, H, 0, false, 0};
      if (theorem2_hypothesis(q, g).proper) proper.push_back(a);
      return;
    }
    for (std::int64_t v = (i == 1 ? 2 : a[i - 1] + 1); v <= q - 2; ++v) {
      a[i] = v;
      rec(i + 1);
    }
  };
  rec(1);
  if (static_cast<int>(proper.size()) <= samples) return proper;
  auto rng = stream(seed, "alphas:" + std::to_string(q) + ":" + std::to_string(d) + ":" + std::to_string(H));
  std::shuffle(proper.begin(), proper.end(), rng);
  proper.resize(samples);
  std::sort(proper.begin(), proper.end());
  return proper;
}

inline double estimate_cost(const Point& pt) {
  const Json& p = pt.params;
  auto prod_sides = [&](double base, double scale) {
    double c = 1;
    for (const auto& h : p.at("H")) c *= base + scale * h.get<double>();
    return c;
  };
  if (pt.kind == "thm1") {
    double b = prod_sides(0, 1);
    return b * b;
  }
  if (pt.kind == "lattice" || pt.kind == "lemma5" || pt.kind == "lemma6") {
    double c = prod_sides(1, 2);
    return p["field"]["q"].get<double>() * c * c;
  }
  if (pt.kind == "membership") {
    double q = p["field"]["q"].get<double>();
    double c = prod_sides(1, 2);
    return std::pow(q, p["field"]["n"].get<double>()) * c * c;
  }
  if (pt.kind == "thm2-sweep") {
    double q = p["q"].get<double>();
    return q * q * std::pow(2.0 * p["H"].get<double>() + 1, 2.0 * p["alphas"].size());
  }
  return 1;
}

inline std::vector<Point> sweep_points(const ExperimentConfig& c) {
  const SweepConfig& s = *c.sweep;
  std::vector<Point> pts;
  std::vector<std::int64_t> qs = s.q;
  std::sort(qs.begin(), qs.end());
  if (s.kind == "thm2") {
    for (std::int64_t q : qs)
      for (int d : s.d)
        for (std::int64_t H : s.H_values)
          for (const auto& alphas : thm2_alphas(q, d, H, s.alpha_samples, c.seed)) {
            std::string tag = std::to_string(q) + ":" + vec_str(alphas) + ":" + std::to_string(H);
            auto rng = stream(c.seed, "thm2:" + tag);
            Json p;
            p["q"] = q;
            p["d"] = d;
            p["alphas"] = alphas;
            p["H"] = H;
            p["beta"] = 0;
            p["translate_beta"] = draw(rng, 1, q - 1);
            std::vector<std::int64_t> omegas;
            for (int i = 0; i < s.omega_samples; ++i) omegas.push_back(draw(rng, 1, q - 1));
            p["omegas"] = omegas;
            p["eps_grid"] = grid_json(default_eps_grid(H, d));
            pts.push_back({"thm2-sweep", p});
          }
    return pts;
  }
  const std::string kind = s.kind;
  for (std::int64_t q : qs)
    for (int n : s.n) {
      if (ipow(q, static_cast<unsigned>(n)) > s.max_order) continue;
      FieldParams f = sweep_field(q, n, s, c.seed);
      std::vector<std::vector<std::int64_t>> sides;
      if (s.H) {
        for (const auto& h : *s.H)
          if (static_cast<int>(h.size()) == n) sides.push_back(h);
      } else {
        sides = admissible_sides(q, n);
      }
      for (const auto& H : sides) {
        Json p;
        p["field"] = field_json(f);
        p["H"] = H;
        if (kind == "thm1") {
          std::int64_t size = 1;
          for (auto h : H) size *= h;
          if (size < 2) continue;
          p["M"] = std::vector<std::int64_t>(n, 0);
        }
        pts.push_back({kind, p});
      }
    }
  return pts;
}

// ---------------------------------------------------------------------------
// Running

/// Deterministic parallel map: results are stored by index and the first
/// failing index (in order) is rethrown.
inline std::vector<Json> parallel_compute(const std::vector<Point>& pts, const std::vector<char>& todo, int jobs) {
  std::vector<Json> out(pts.size());
  std::vector<std::exception_ptr> errs(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      if (!todo[i]) continue;
      try {
        out[i] = compute_point_guarded(pts[i]);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(pts.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

struct Verdict {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct RunResult {
  int exit_code = 0;
  Json report;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> failures;
  std::size_t cache_hits = 0;
};

inline const std::vector<std::string>& table_columns() {
  static const std::vector<std::string> cols{"index", "kind", "q", "n", "d", "H", "alphas",
                                             "primary", "primary_real", "secondary", "secondary_real", "pass"};
  return cols;
}

namespace detail {

inline std::string cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + cell(v[i]);
    return s + ")";
  }
  return v.dump();
}

inline Json lookup(const Json& p, const char* key) {
  if (p.contains(key)) return p[key];
  if (p.contains("field") && p["field"].contains(key)) return p["field"][key];
  if (p.contains("gap") && p["gap"].contains(key)) return p["gap"][key];
  return nullptr;
}

inline std::optional<double> real_of(const Json& row, const char* key) {
  std::string s = row.at(key).get<std::string>();
  if (s.empty()) return std::nullopt;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

/// max over points at the largest q <= growth * max at the smallest q.
inline Verdict max_stability(const std::string& name, const std::vector<Point>& pts, const std::vector<Json>& res,
                             const std::function<std::optional<double>(const Json&)>& value, const Rational& growth) {
  std::map<std::int64_t, double> by_q;
  bool finite = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto v = value(res[i]);
    if (!v) continue;
    if (!std::isfinite(*v)) finite = false;
    std::int64_t q = lookup(pts[i].params, "q").get<std::int64_t>();
    auto it = by_q.find(q);
    by_q[q] = it == by_q.end() ? *v : std::max(it->second, *v);
  }
  Verdict v{name, true, ""};
  if (by_q.size() < 2) {
    v.detail = "fewer than two q values; vacuous";
    v.pass = finite;
    return v;
  }
  double lo = by_q.begin()->second, hi = by_q.rbegin()->second;
  StabilityVerdict s = ratio_stability(lo, hi, growth.to_double());
  v.pass = finite && s.stable;
  v.detail = "max at q=" + std::to_string(by_q.rbegin()->first) + ": " + fmt6(hi) + "; max at q=" +
             std::to_string(by_q.begin()->first) + ": " + fmt6(lo) + "; growth " + growth.str();
  return v;
}

}  // namespace detail

inline std::vector<Verdict> sweep_verdicts(const ExperimentConfig& c, const std::vector<Point>& pts,
                                           const std::vector<Json>& res) {
  std::vector<Verdict> out;
  const std::string kind = c.sweep->kind;
  auto all_pass = [&](const std::string& name) {
    Verdict v{name, true, ""};
    std::size_t bad = 0;
    for (std::size_t i = 0; i < res.size(); ++i)
      if (res[i]["asserted"].get<bool>() && !res[i]["pass"].get<bool>()) {
        if (bad++ == 0) v.detail = "first failure at index " + std::to_string(i);
        v.pass = false;
      }
    if (bad) v.detail += " (" + std::to_string(bad) + " failing points)";
    return v;
  };
  out.push_back(all_pass("points"));
  auto primary = [](const Json& r) { return detail::real_of(r["row"], "primary_real"); };
  auto secondary = [](const Json& r) { return detail::real_of(r["row"], "secondary_real"); };

  if (kind == "thm1") out.push_back(detail::max_stability("ratio_stability", pts, res, primary, c.growth_factor));
  if (kind == "thm2") {
    out.push_back(detail::max_stability("thm2_ratio_stability", pts, res, primary, c.growth_factor));
    out.push_back(detail::max_stability("reduction_constant_stability", pts, res, secondary, c.growth_factor));
    out.push_back(detail::max_stability(
        "shao_ratio_stability", pts, res,
        [](const Json& r) -> std::optional<double> {
          if (!r["result"].contains("shao")) return std::nullopt;
          return std::stod(r["result"]["shao"]["observed_real"].get<std::string>());
        },
        c.growth_factor));
  }
  if (kind == "lattice" || kind == "lemma6") {
    // c_obs(q_max) >= c_obs(q_min) / growth within each (n, H) family.
    std::map<std::pair<int, std::vector<std::int64_t>>, std::map<std::int64_t, Rational>> fam;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Json& p = pts[i].params;
      Rational cobs = Rational::parse(res[i]["result"]["lemma6"]["observed_constant"].get<std::string>());
      fam[{p["field"]["n"].get<int>(), p["H"].get<std::vector<std::int64_t>>()}][p["field"]["q"].get<std::int64_t>()] =
          cobs;
    }
    std::vector<std::int64_t> qs = c.sweep->q;
    std::sort(qs.begin(), qs.end());
    Verdict v{"lemma6_stability", true, ""};
    std::size_t compared = 0;
    for (const auto& [key, m] : fam) {
      if (qs.empty() || !m.count(qs.front()) || !m.count(qs.back()) || qs.front() == qs.back()) continue;
      ++compared;
      const Rational& lo = m.at(qs.front());
      const Rational& hi = m.at(qs.back());
      if (hi * c.growth_factor < lo) {
        if (v.pass) v.detail = "n=" + std::to_string(key.first) + " H=" + vec_str(key.second) + ": " + hi.str() +
                               " < " + lo.str() + " / " + c.growth_factor.str() + "; ";
        v.pass = false;
      }
    }
    v.detail += std::to_string(compared) + " families compared";
    out.push_back(v);
  }
  return out;
}

inline std::vector<Point> command_points(const ExperimentConfig& c) {
  const std::string& cmd = c.command;
  auto need_field = [&]() -> FieldParams {
    if (!c.field) throw ConfigError(cmd + " needs a field section");
    return field_from_config(*c.field);
  };
  auto need_gap = [&]() -> const GapSpec& {
    if (!c.gap) throw ConfigError(cmd + " needs a gap section");
    return *c.gap;
  };
  auto q_of = [&]() -> std::int64_t {
    if (!c.field) throw ConfigError(cmd + " needs field.q");
    if (!is_prime(c.field->q)) fail(ErrorKind::NonPrimeModulus, std::to_string(c.field->q) + " is not prime");
    return c.field->q;
  };
  auto gap_params = [&](const GapSpec& g) {
    Json p;
    p["q"] = q_of();
    p["alphas"] = g.alphas;
    p["H"] = g.H;
    p["beta"] = g.beta;
    return p;
  };

  if (cmd == "sweep") {
    if (!c.sweep) throw ConfigError("sweep needs a sweep section");
    return sweep_points(c);
  }
  Json p;
  std::string kind = cmd;
  if (cmd == "field-info") {
    p["field"] = field_json(need_field());
  } else if (cmd == "energy") {
    FieldParams f = need_field();
    p["field"] = field_json(f);
    p["set"] = c.set;
    if (c.set == "explicit") {
      std::vector<std::int64_t> codes;
      for (const auto& e : c.elements) {
        if (e.is_number_integer()) codes.push_back(e.get<std::int64_t>());
        else if (e.is_array()) codes.push_back(ff_code(f, ff_elem(f, e.get<std::vector<std::int64_t>>())));
        else throw ConfigError("elements must be codes or coordinate arrays");
      }
      for (auto x : codes)
        if (x < 0 || x >= f.order) throw ConfigError("element code out of range");
      p["elements"] = codes;
    } else if (c.set == "box") {
      if (!c.box) throw ConfigError("set 'box' needs a box section");
      p["M"] = c.box->M;
      p["H"] = c.box->H;
    } else if (c.set == "gap") {
      p["gap"] = {{"alphas", need_gap().alphas}, {"H", need_gap().H}, {"beta", need_gap().beta}};
    } else if (c.set == "bohr") {
      if (!c.bohr) throw ConfigError("set 'bohr' needs a bohr section");
      p["alphas"] = c.bohr->alphas;
      p["eps"] = detail::rationals_json(c.bohr->eps);
    }
  } else if (cmd == "minima") {
    if (c.z) {
      FieldParams f = need_field();
      p["field"] = field_json(f);
      p["H"] = c.H;
      p["z"] = *c.z;
    } else if (c.omega) {
      p["q"] = q_of();
      p["gap"] = {{"alphas", need_gap().alphas}, {"H", need_gap().H}, {"beta", need_gap().beta}};
      p["omega"] = *c.omega;
      p["deltas"] = detail::rationals_json(c.deltas);
    } else {
      throw ConfigError("minima needs z (box lattice) or omega (progression lattice)");
    }
  } else if (cmd == "bohr") {
    if (!c.bohr) throw ConfigError("bohr needs a bohr section");
    p["q"] = q_of();
    p["alphas"] = c.bohr->alphas;
    p["eps"] = detail::rationals_json(c.bohr->eps);
  } else if (cmd == "siegel") {
    if (c.matrix.empty()) throw ConfigError("siegel needs a matrix");
    p["matrix"] = c.matrix;
  } else if (cmd == "verify-lemma5" || cmd == "verify-lemma6" || cmd == "verify-membership") {
    FieldParams f = need_field();
    p["field"] = field_json(f);
    p["H"] = c.H;
    kind = cmd == "verify-lemma5" ? "lemma5" : cmd == "verify-lemma6" ? "lemma6" : "membership";
  } else if (cmd == "verify-thm1") {
    if (!c.box) throw ConfigError("verify-thm1 needs a box section");
    FieldParams f = need_field();
    p["field"] = field_json(f);
    p["M"] = c.box->M;
    p["H"] = c.box->H;
    kind = "thm1";
  } else if (cmd == "verify-thm2") {
    p = gap_params(need_gap());
    kind = "thm2";
  } else if (cmd == "verify-reduction") {
    const GapSpec& g = need_gap();
    p = gap_params(g);
    p["eps_grid"] = grid_json(c.eps_grid.empty() ? default_eps_grid(g.H, g.d()) : c.eps_grid);
    kind = "reduction";
  } else if (cmd == "verify-shao") {
    if (!c.bohr) throw ConfigError("verify-shao needs a bohr section");
    if (!c.shao_H) throw ConfigError("verify-shao needs shao.H");
    p["q"] = q_of();
    p["alphas"] = c.bohr->alphas;
    p["H"] = *c.shao_H;
    p["eps"] = detail::rationals_json(c.bohr->eps);
    kind = "shao";
  } else {
    throw ConfigError("unknown command '" + cmd + "'");
  }
  return {{kind, p}};
}

/// Executes a configured command. Library errors propagate; the caller maps
/// them to exit status 2.
inline RunResult run(const ExperimentConfig& c, ResultCache& cache) {
  std::vector<Point> pts = command_points(c);
  if (c.command == "sweep") {
    double cost = 0;
    for (const auto& pt : pts) cost += estimate_cost(pt);
    if (cost > c.sweep->budget)
      fail(ErrorKind::BudgetExceeded, "estimated sweep cost " + fmt6(cost) + " exceeds budget " + fmt6(c.sweep->budget));
  }

  RunResult rr;
  std::vector<Json> res(pts.size());
  std::vector<std::string> digests(pts.size());
  std::vector<char> todo(pts.size(), 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    digests[i] = point_digest(pts[i].kind, pts[i].params);
    if (cache.enabled())
      if (auto hit = cache.get(digests[i])) {
        res[i] = *hit;
        todo[i] = 0;
        ++rr.cache_hits;
      }
  }
  std::vector<Json> fresh = parallel_compute(pts, todo, c.jobs);
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (todo[i]) {
      res[i] = std::move(fresh[i]);
      cache.put({digests[i], pts[i].kind, res[i], kVersion});
    }

  Json points = Json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Json e;
    e["index"] = i;
    e["kind"] = pts[i].kind;
    e["digest"] = digests[i];
    e["params"] = pts[i].params;
    e["result"] = res[i]["result"];
    e["pass"] = res[i]["pass"];
    e["asserted"] = res[i]["asserted"];
    e["failures"] = res[i]["failures"];
    points.push_back(e);

    const Json& p = pts[i].params;
    const Json& row = res[i]["row"];
    Json d = detail::lookup(p, "d");
    if (d.is_null() && p.contains("alphas")) d = p["alphas"].size();
    rr.rows.push_back({std::to_string(i), pts[i].kind, detail::cell(detail::lookup(p, "q")),
                       detail::cell(detail::lookup(p, "n")), detail::cell(d), detail::cell(detail::lookup(p, "H")),
                       detail::cell(detail::lookup(p, "alphas")), row["primary"].get<std::string>(),
                       row["primary_real"].get<std::string>(), row["secondary"].get<std::string>(),
                       row["secondary_real"].get<std::string>(), res[i]["pass"].get<bool>() ? "true" : "false"});
    if (res[i]["asserted"].get<bool>() && !res[i]["pass"].get<bool>())
      for (const auto& f : res[i]["failures"])
        rr.failures.push_back("point " + std::to_string(i) + ": " + f.get<std::string>());
  }

  std::vector<Verdict> verdicts;
  if (c.command == "sweep") verdicts = sweep_verdicts(c, pts, res);
  Json vj = Json::array();
  bool all = true;
  for (const auto& v : verdicts) {
    vj.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    if (!v.pass) {
      all = false;
      rr.failures.push_back("verdict " + v.name + ": " + v.detail);
    }
  }
  for (const auto& r : res)
    if (r["asserted"].get<bool>() && !r["pass"].get<bool>()) all = false;

  Json rep;
  rep["tool"] = "multeq";
  rep["version"] = kVersion;
  rep["command"] = c.command;
  rep["seed"] = c.seed;
  rep["config"] = config_json(c);
  rep["points"] = points;
  rep["verdicts"] = vj;
  rep["summary"] = {{"points", pts.size()}, {"all_passed", all}};
  rr.report = std::move(rep);
  rr.exit_code = all ? 0 : 1;
  return rr;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

inline void write_outputs(const RunResult& rr, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json", std::ios::binary | std::ios::trunc);
    out << rr.report.dump(2) << '\n';
  }
  std::ofstream csv(dir / "table.csv", std::ios::binary | std::ios::trunc);
  const auto& cols = table_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cols[i];
  csv << '\n';
  for (const auto& row : rr.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << csv_escape(row[i]);
    csv << '\n';
  }
}

}  // namespace multeq::experiment
