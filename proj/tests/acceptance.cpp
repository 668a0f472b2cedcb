// Acceptance run: one PASS/FAIL line per criterion; exits nonzero if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "multeq/experiment.hpp"

using namespace multeq;
using namespace multeq::experiment;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Sweep {
  RunResult result;
  double seconds = 0;
};

ExperimentConfig sweep_config(const std::string& text) {
  ExperimentConfig c = parse_config(Json::parse(text));
  c.command = "sweep";
  return c;
}

Sweep run_sweep(const std::string& text) {
  auto t0 = Clock::now();
  ResultCache none;
  Sweep s{run(sweep_config(text), none), 0};
  s.seconds = seconds_since(t0);
  return s;
}

const char* kLatticeSweep =
    R"({"sweep": {"kind": "lattice", "q": [5, 7, 11, 13], "n": [1, 2], "max_order": 200},
        "thresholds": {"growth_factor": 4}})";
const char* kThm1Sweep = R"({"sweep": {"kind": "thm1", "q": [7, 11, 13], "n": [2], "max_order": 200}})";
const char* kThm2Sweep =
    R"({"seed": 42, "sweep": {"kind": "thm2", "q": [101, 199, 401], "d": [1, 2], "H_values": [2, 3]}})";

Sweep& lattice_sweep() {
  static Sweep s = run_sweep(kLatticeSweep);
  return s;
}
Sweep& thm1_sweep() {
  static Sweep s = run_sweep(kThm1Sweep);
  return s;
}
Sweep& thm2_sweep() {
  static Sweep s = run_sweep(kThm2Sweep);
  return s;
}

const Json* verdict(const RunResult& r, const std::string& name) {
  for (const auto& v : r.report["verdicts"])
    if (v["name"] == name) return &v;
  return nullptr;
}

struct Outcome {
  bool pass = true;
  std::string note;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = seconds_since(t0);
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              o.note.empty() ? "" : ": ", o.note.c_str());
  std::fflush(stdout);
}

ElementSet range_set(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> c(hi - lo);
  std::iota(c.begin(), c.end(), lo);
  return ElementSet::from_codes(c);
}

Rational factorial_of(int k) {
  Rational r(1);
  for (int i = 2; i <= k; ++i) r *= Rational(i);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "energy identities", [] {
    auto t0 = Clock::now();
    Outcome o;
    for (std::int64_t q : {5, 7, 11, 13, 17}) {
      std::uint64_t E = mult_energy(make_field(q, 1), range_set(1, q)).E;
      auto m = static_cast<std::uint64_t>(q - 1);
      if (E != m * m * m) o = {false, "E(F_" + std::to_string(q) + "^*) = " + std::to_string(E)};
    }
    EnergyReport r = mult_energy(make_field(7, 1), range_set(1, 4));
    std::uint64_t via_ratio = 0;
    for (auto [z, c] : *r.I_hist) via_ratio += c * c;
    if (r.E != 19 || via_ratio != 19) o = {false, "E({1,2,3}) mismatch"};
    int groups = 0;
    for (std::int64_t q = 3; q <= 31; ++q) {
      if (!is_prime(q)) continue;
      FieldParams f = make_field(q, 1);
      for (std::int64_t d = 1; d < q; ++d) {
        if ((q - 1) % d) continue;
        std::vector<std::int64_t> g;
        for (std::int64_t x = 1; x < q; ++x)
          if (pow_mod(x, static_cast<std::uint64_t>(d), q) == 1) g.push_back(x);
        auto n = static_cast<std::uint64_t>(g.size());
        if (mult_energy(f, ElementSet::from_codes(g)).E != n * n * n) o = {false, "subgroup law fails at q=" + std::to_string(q)};
        ++groups;
      }
    }
    double secs = seconds_since(t0);
    if (secs >= 5) o = {false, "runtime " + fmt6(secs) + " s"};
    if (o.pass) o.note = std::to_string(groups) + " subgroups checked";
    return o;
  });

  criterion(2, "Cauchy-Schwarz certificate on every swept set", [] {
    std::size_t sets = 0, bad = 0;
    for (const auto& p : thm1_sweep().result.report["points"]) {
      ++sets;
      if (p["result"]["details"]["cauchy_schwarz_holds"] != "true") ++bad;
    }
    for (const auto& p : thm2_sweep().result.report["points"]) {
      ++sets;
      if (p["result"]["theorem2"]["details"]["cauchy_schwarz_holds"] != "true") ++bad;
    }
    return Outcome{bad == 0 && sets > 0, std::to_string(sets) + " sets, " + std::to_string(bad) + " violations"};
  });

  criterion(3, "box-lattice minima lambda_i H_i >= 1", [] {
    const Sweep& s = lattice_sweep();
    std::size_t bad = 0;
    std::string first;
    for (const auto& p : s.result.report["points"]) {
      const Json& l5 = p["result"]["lemma5"];
      if (l5["informational"].get<bool>() || l5["pass"].get<bool>()) continue;
      if (bad++ == 0)
        first = "q=" + l5["parameters"]["q"].get<std::string>() + " H=" + l5["parameters"]["H"].get<std::string>() +
                " min=" + l5["observed_constant"].get<std::string>() + " z=" + l5["witnesses"]["z"].get<std::string>() +
                " i=" + l5["witnesses"]["i"].get<std::string>();
    }
    Outcome o{bad == 0 && s.seconds < 180, std::to_string(s.result.report["points"].size()) + " points, " +
                                               std::to_string(bad) + " below 1"};
    if (bad) o.note += "; first " + first;
    return o;
  });

  criterion(4, "dual-minima constant stability (growth 4)", [] {
    const Sweep& s = lattice_sweep();
    std::size_t nonpos = 0;
    for (const auto& p : s.result.report["points"])
      if (Rational::parse(p["result"]["lemma6"]["observed_constant"].get<std::string>()) <= Rational(0)) ++nonpos;
    const Json* v = verdict(s.result, "lemma6_stability");
    bool ok = v && (*v)["pass"].get<bool>() && nonpos == 0;
    return Outcome{ok, v ? (*v)["detail"].get<std::string>() : "missing verdict"};
  });

  criterion(5, "Minkowski second theorem bounds", [] {
    std::uint64_t checked = 0, bad = 0;
    for (const auto& p : lattice_sweep().result.report["points"]) {
      const Json& d = p["result"]["lemma6"]["details"];
      checked += std::stoull(d["minkowski_checked"].get<std::string>());
      bad += std::stoull(d["minkowski_violations"].get<std::string>());
    }
    for (const auto& p : thm2_sweep().result.report["points"])
      for (const auto& l : p["result"]["gap_lattices"])
        for (const char* side : {"minkowski_primal", "minkowski_dual"}) {
          ++checked;
          if (!l[side]["holds"].get<bool>()) ++bad;
        }
    return Outcome{bad == 0 && checked > 0, std::to_string(checked) + " pairs, " + std::to_string(bad) + " violations"};
  });

  criterion(6, "transference lambda_j lambda*_{d-j+1} >= 1", [] {
    std::uint64_t bad = 0, points = 0;
    Rational worst_ratio(0);
    for (const auto& p : lattice_sweep().result.report["points"]) {
      const Json& d = p["result"]["lemma6"]["details"];
      bad += std::stoull(d["transference_violations"].get<std::string>());
      int n = p["params"]["field"]["n"].get<int>();
      Rational mx = Rational::parse(d["transference_max"].get<std::string>());
      worst_ratio = max(worst_ratio, mx / factorial_of(2 * n));
      ++points;
    }
    for (const auto& p : thm2_sweep().result.report["points"]) {
      int dd = p["params"]["d"].get<int>();
      for (const auto& l : p["result"]["gap_lattices"]) {
        ++points;
        if (!l["transference"]["holds"].get<bool>()) {
          ++bad;
          continue;
        }
        worst_ratio = max(worst_ratio, Rational::parse(l["transference"]["max_product"].get<std::string>()) /
                                           factorial_of(2 * dd));
      }
    }
    return Outcome{bad == 0 && worst_ratio <= Rational(1),
                   std::to_string(points) + " lattice pairs, max product / (2n)! = " + worst_ratio.str()};
  });

  criterion(7, "Siegel small solutions (200 seeded instances)", [] {
    auto t0 = Clock::now();
    std::mt19937_64 rng(20240607);
    int bad = 0;
    for (int k = 0; k < 200; ++k) {
      Matrix A;
      while (true) {
        int M = 2 + static_cast<int>(rng() % 5);
        int L = 1 + static_cast<int>(rng() % (M - 1));
        A.assign(L, std::vector<std::int64_t>(M));
        for (auto& row : A)
          for (auto& x : row) x = static_cast<std::int64_t>(rng() % 11) - 5;
        if (gram_det(A) > 0) break;
      }
      SiegelSolution s = siegel_solve(A);
      if (s.sup_norm == 0 || !is_kernel_vector(A, s.t) || s.sup_norm > s.instance.bound) ++bad;
    }
    double secs = seconds_since(t0);
    return Outcome{bad == 0 && secs < 30, std::to_string(bad) + " failures"};
  });

  criterion(8, "box energy ratio stability", [] {
    const Sweep& s = thm1_sweep();
    const Json* v = verdict(s.result, "ratio_stability");
    bool ok = v && (*v)["pass"].get<bool>() && verdict(s.result, "points")->at("pass").get<bool>() && s.seconds < 300;
    return Outcome{ok, std::to_string(s.result.rows.size()) + " points; " +
                           (v ? (*v)["detail"].get<std::string>() : "missing verdict")};
  });

  criterion(9, "progression energy ratio stability", [] {
    const Sweep& s = thm2_sweep();
    const Json* v = verdict(s.result, "thm2_ratio_stability");
    bool ok = v && (*v)["pass"].get<bool>() && s.seconds < 120;
    return Outcome{ok, std::to_string(s.result.rows.size()) + " points; " +
                           (v ? (*v)["detail"].get<std::string>() : "missing verdict")};
  });

  criterion(10, "reduction and Bohr-size constants", [] {
    const Sweep& s = thm2_sweep();
    Outcome o;
    for (const char* name : {"reduction_constant_stability", "shao_ratio_stability"}) {
      const Json* v = verdict(s.result, name);
      if (!v || !(*v)["pass"].get<bool>()) o = {false, std::string(name) + " failed"};
      else o.note += std::string(name) + ": " + (*v)["detail"].get<std::string>() + "; ";
    }
    int detected = 0;
    for (std::int64_t q : {101, 199, 401})
      for (std::int64_t a : {1, 7, 20}) {
        try {
          verify_shao(q, {a, q - a}, 2, {Rational(1, 4), Rational(1, 4)});
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::KernelConditionFails && kernel_witness(q, {a, q - a}, 2) == std::vector<std::int64_t>{1, 1})
            ++detected;
        }
      }
    if (detected != 9) o = {false, "kernel failures detected " + std::to_string(detected) + "/9"};
    else o.note += "9/9 kernel counterexamples detected";
    return o;
  });

  criterion(11, "membership uniqueness", [] {
    Outcome o;
    for (auto [n, H] : std::vector<std::pair<int, std::vector<std::int64_t>>>{{1, {3}}, {2, {3, 3}}}) {
      VerifyReport r = verify_membership_uniqueness(make_field(7, n), H);
      std::string pts;
      for (const auto& [k, v] : r.details)
        if (k == "primal_points") pts = v;
      if (!r.pass) o = {false, "n=" + std::to_string(n) + " multi=" + r.observed.str()};
      else o.note += std::string(o.note.empty() ? "" : "; ") + "n=" + std::to_string(n) + ": " + pts + " primal points";
    }
    return o;
  });

  criterion(12, "Parseval and Fourier certificate", [] {
    std::size_t n = 0, bad = 0;
    for (const auto& p : thm2_sweep().result.report["points"]) {
      const Json& f = p["result"]["fourier"];
      ++n;
      if (!f["parseval_ok"].get<bool>() || !f["certificate_ok"].get<bool>()) ++bad;
    }
    return Outcome{bad == 0 && n > 0, std::to_string(n) + " progressions"};
  });

  criterion(13, "determinism", [] {
    fs::path root = fs::temp_directory_path() / "multeq_acceptance";
    fs::remove_all(root);
    Outcome o;
    for (const char* text : {kThm1Sweep, kThm2Sweep}) {
      write_outputs(run_sweep(text).result, root / "a");
      write_outputs(run_sweep(text).result, root / "b");
      for (const char* f : {"report.json", "table.csv"})
        if (slurp(root / "a" / f) != slurp(root / "b" / f)) o = {false, std::string(f) + " differs"};
    }
    fs::remove_all(root);
    return o;
  });

  std::printf("%d criteria failed\n", failures);
  return failures ? 1 : 0;
}
