#pragma once

// Certification harness: hypothesis margins, observed implied constants and
// exact certificates for the box, progression and lattice statements.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "multeq/energy.hpp"
#include "multeq/error.hpp"
#include "multeq/ffield.hpp"
#include "multeq/latgeom.hpp"
#include "multeq/rational.hpp"
#include "multeq/structsets.hpp"

namespace multeq {

/// Real number rendered with 6 significant digits.
inline std::string fmt6(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline double log_guard(double x) { return std::max(std::log(x), 1.0); }

struct ConditionReport {
  bool monotone_ok = false;
  std::vector<Rational> cond1_margins;  // i = 2..n
  std::vector<Rational> cond2_margins;  // i = 2..n
  bool corollary_holds = false;         // H_1^n <= q H_n^n
  double corollary_margin = 0;          // q^{1/n} H_n / H_1

  bool cond1_ok() const {
    return std::all_of(cond1_margins.begin(), cond1_margins.end(), [](const Rational& m) { return m >= Rational(1); });
  }
  bool cond2_ok() const {
    return std::all_of(cond2_margins.begin(), cond2_margins.end(), [](const Rational& m) { return m >= Rational(1); });
  }
  bool holds() const { return monotone_ok && cond1_ok() && cond2_ok(); }
};

inline ConditionReport check_conditions_thm1(std::int64_t q, int n, const std::vector<std::int64_t>& H) {
  if (static_cast<int>(H.size()) != n || n < 1) fail(ErrorKind::InvalidArgument, "need n side lengths");
  ConditionReport rep;
  rep.monotone_ok = H[0] <= q && H[n - 1] >= 1;
  for (int i = 1; i < n; ++i)
    if (H[i] > H[i - 1]) rep.monotone_ok = false;
  // H is 0-indexed here: H[k-1] is H_k.
  auto h = [&](int k) { return Rational(H[k - 1]); };
  for (int i = 2; i <= n; ++i) {
    Rational prod(1);
    for (int k = 1; k < i; ++k) prod *= h(k);
    rep.cond1_margins.push_back(Rational(q) * pow(h(i), i) / h(i - 1) / prod);
  }
  for (int i = 2; i <= n; ++i) {
    Rational prod(1);
    for (int k = n - i + 2; k <= n; ++k) prod *= h(k);
    rep.cond2_margins.push_back(Rational(q) * h(n) * prod / pow(h(n - i + 1), i));
  }
  i128 lhs = 1, rhs = q;
  for (int k = 0; k < n; ++k) {
    lhs *= H[0];
    rhs *= H[n - 1];
  }
  rep.corollary_holds = lhs <= rhs;
  rep.corollary_margin = std::pow(static_cast<double>(q), 1.0 / n) * static_cast<double>(H[n - 1]) /
                         static_cast<double>(H[0]);
  return rep;
}

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Either an exact rational or a real diagnostic.
struct ObservedConstant {
  std::optional<Rational> exact;
  double value = 0;

  static ObservedConstant of(const Rational& r) { return {r, r.to_double()}; }
  static ObservedConstant of(double x) { return {std::nullopt, x}; }
  std::string str() const { return exact ? exact->str() : fmt6(value); }
};

struct VerifyReport {
  std::string kind;
  KeyValues parameters;
  ObservedConstant observed;
  std::string threshold;
  bool pass = false;
  /// Set when the hypotheses fail; the verdict is then not asserted.
  bool informational = false;
  KeyValues witnesses;
  KeyValues details;
};

inline std::string vec_str(const std::vector<std::int64_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

inline std::string bool_str(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------
// Lattice families Gamma(z)

/// Per-z primal and dual minima of Gamma(z) against the box and its polar,
/// with the Minkowski, transference and point-count checks.
struct FieldMinima {
  std::int64_t q = 0;
  int n = 0;
  std::vector<std::int64_t> H;
  std::vector<std::int64_t> z_codes;
  std::vector<std::vector<Rational>> primal;
  std::vector<std::vector<Rational>> dual;
  std::uint64_t minkowski_checked = 0;
  std::uint64_t minkowski_violations = 0;
  Rational minkowski_min_lower;  // min over z of product * d!/2^d
  Rational minkowski_min_upper;  // min over z of 2^d / product
  std::uint64_t transference_violations = 0;
  Rational transference_min;
  Rational transference_max;
  Rational count_ratio_min;  // |Gamma(z) cap D| / prod max(1, 1/lambda_j)
  Rational count_ratio_max;
};

inline FieldMinima field_minima(const FieldParams& f, const std::vector<std::int64_t>& H) {
  FieldMinima out;
  out.q = f.q;
  out.n = f.n;
  out.H = H;
  const int d = 2 * f.n;
  bool first = true;
  for (std::int64_t code = 1; code < f.order; ++code) {
    auto [L, B] = gamma_box(f, ff_from_code(f, code), H);
    IntLattice Ld = dual_lattice(L);
    BodySpec Bd = dual_body(B);
    MinimaReport rp = successive_minima(L, B);
    MinimaReport rd = successive_minima(Ld, Bd);
    out.z_codes.push_back(code);
    out.primal.push_back(rp.minima);
    out.dual.push_back(rd.minima);

    for (const auto& [rep, body, lat] : {std::tuple{&rp, &B, &L}, std::tuple{&rd, &Bd, &Ld}}) {
      ++out.minkowski_checked;
      Rational prod(1);
      for (const auto& l : rep->minima) prod *= l;
      prod = prod * body->volume / lat->det_abs;
      Rational two_d = pow(Rational(2), static_cast<unsigned>(d));
      Rational lo = prod * factorial(d) / two_d, hi = two_d / prod;
      if (lo < Rational(1) || hi < Rational(1)) ++out.minkowski_violations;
      if (first) {
        out.minkowski_min_lower = lo;
        out.minkowski_min_upper = hi;
        first = false;
      }
      out.minkowski_min_lower = min(out.minkowski_min_lower, lo);
      out.minkowski_min_upper = min(out.minkowski_min_upper, hi);
    }

    for (int j = 0; j < d; ++j) {
      Rational p = rp.minima[j] * rd.minima[d - 1 - j];
      if (p < Rational(1)) ++out.transference_violations;
      bool init = out.z_codes.size() == 1 && j == 0;
      out.transference_min = init ? p : min(out.transference_min, p);
      out.transference_max = init ? p : max(out.transference_max, p);
    }

    Rational ratio = lattice_count_ratio(lattice_point_count(L, B, Rational(1)), rp);
    bool init = out.z_codes.size() == 1;
    out.count_ratio_min = init ? ratio : min(out.count_ratio_min, ratio);
    out.count_ratio_max = init ? ratio : max(out.count_ratio_max, ratio);
  }
  return out;
}

inline KeyValues field_parameters(const FieldParams& f, const std::vector<std::int64_t>& H) {
  return {{"q", std::to_string(f.q)}, {"n", std::to_string(f.n)}, {"H", vec_str(H)}};
}

inline void add_lattice_details(VerifyReport& rep, const FieldMinima& fm) {
  rep.details.emplace_back("minkowski_checked", std::to_string(fm.minkowski_checked));
  rep.details.emplace_back("minkowski_violations", std::to_string(fm.minkowski_violations));
  rep.details.emplace_back("minkowski_min_lower_margin", fm.minkowski_min_lower.str());
  rep.details.emplace_back("minkowski_min_upper_margin", fm.minkowski_min_upper.str());
  rep.details.emplace_back("transference_violations", std::to_string(fm.transference_violations));
  rep.details.emplace_back("transference_min", fm.transference_min.str());
  rep.details.emplace_back("transference_max", fm.transference_max.str());
  rep.details.emplace_back("count_ratio_min", fm.count_ratio_min.str());
  rep.details.emplace_back("count_ratio_max", fm.count_ratio_max.str());
}

/// min_z lambda_i(z) H_i >= 1 for every i <= n, exactly.
inline VerifyReport verify_lemma5(const FieldParams& f, const FieldMinima& fm) {
  VerifyReport rep;
  rep.kind = "lemma5";
  rep.parameters = field_parameters(f, fm.H);
  rep.threshold = "1";
  ConditionReport cond = check_conditions_thm1(f.q, f.n, fm.H);
  rep.informational = !cond.holds();
  rep.details.emplace_back("conditions_hold", bool_str(cond.holds()));

  std::optional<Rational> overall;
  for (int i = 0; i < f.n; ++i) {
    std::optional<Rational> best;
    std::int64_t arg = 0;
    for (std::size_t k = 0; k < fm.z_codes.size(); ++k) {
      Rational v = fm.primal[k][i] * Rational(fm.H[i]);
      if (!best || v < *best) {
        best = v;
        arg = fm.z_codes[k];
      }
    }
    rep.details.emplace_back("min_lambda" + std::to_string(i + 1) + "_H", best->str());
    if (!overall || *best < *overall) {
      overall = best;
      rep.witnesses = {{"z", vec_str(ff_from_code(f, arg).coords)}, {"i", std::to_string(i + 1)}};
    }
  }
  rep.observed = ObservedConstant::of(*overall);
  rep.pass = *overall >= Rational(1);
  add_lattice_details(rep, fm);
  return rep;
}

inline VerifyReport verify_lemma5(const FieldParams& f, const std::vector<std::int64_t>& H) {
  return verify_lemma5(f, field_minima(f, H));
}

/// c_obs = min_{z, i <= n} lambda*_i(z) q / H_{n-i+1}; positive by construction.
inline VerifyReport verify_lemma6(const FieldParams& f, const FieldMinima& fm) {
  VerifyReport rep;
  rep.kind = "lemma6";
  rep.parameters = field_parameters(f, fm.H);
  rep.threshold = "0";
  ConditionReport cond = check_conditions_thm1(f.q, f.n, fm.H);
  rep.informational = !cond.monotone_ok || !cond.cond2_ok();
  rep.details.emplace_back("conditions_hold", bool_str(cond.monotone_ok && cond.cond2_ok()));

  std::optional<Rational> best;
  for (std::size_t k = 0; k < fm.z_codes.size(); ++k)
    for (int i = 1; i <= f.n; ++i) {
      Rational v = fm.dual[k][i - 1] * Rational(f.q) / Rational(fm.H[f.n - i]);
      if (!best || v < *best) {
        best = v;
        rep.witnesses = {{"z", vec_str(ff_from_code(f, fm.z_codes[k]).coords)}, {"i", std::to_string(i)}};
      }
    }
  rep.observed = ObservedConstant::of(*best);
  rep.pass = *best > Rational(0);
  add_lattice_details(rep, fm);
  return rep;
}

inline VerifyReport verify_lemma6(const FieldParams& f, const std::vector<std::int64_t>& H) {
  return verify_lemma6(f, field_minima(f, H));
}

// ---------------------------------------------------------------------------
// Energy bounds

/// E(B) / (|B|^4 / q^n + |B|^2 max(ln|B|, 1)^n).
inline VerifyReport verify_theorem1(const FieldParams& f, const BoxSpec& box) {
  VerifyReport rep;
  rep.kind = "theorem1";
  rep.parameters = field_parameters(f, box.H);
  rep.parameters.emplace_back("M", vec_str(box.M));
  rep.threshold = "finite";
  ConditionReport cond = check_conditions_thm1(f.q, f.n, box.H);
  rep.informational = !cond.holds();
  rep.details.emplace_back("conditions_hold", bool_str(cond.holds()));

  ElementSet B = enumerate_box(f, box);
  if (B.size() < 2) fail(ErrorKind::InvalidArgument, "box must have at least two elements");
  ProductSetReport ps = product_set(f, B);
  const double b = static_cast<double>(B.size());
  const double denom = b * b * b * b / std::pow(static_cast<double>(f.q), f.n) + b * b * std::pow(log_guard(b), f.n);
  double ratio = static_cast<double>(ps.energy) / denom;
  rep.observed = ObservedConstant::of(ratio);
  rep.pass = std::isfinite(ratio);
  rep.details.emplace_back("set_size", std::to_string(ps.set_size));
  rep.details.emplace_back("energy", std::to_string(ps.energy));
  rep.details.emplace_back("product_set_size", std::to_string(ps.product_set_size));
  rep.details.emplace_back("cauchy_schwarz_holds", bool_str(ps.cauchy_schwarz_holds));
  return rep;
}

inline KeyValues gap_parameters(std::int64_t q, const GapSpec& spec) {
  return {{"q", std::to_string(q)},
          {"d", std::to_string(spec.d())},
          {"alphas", vec_str(spec.alphas)},
          {"H", std::to_string(spec.H)},
          {"beta", std::to_string(spec.beta)}};
}

/// Whether the symmetric progression with |h_i| <= H^2 is proper.
inline ProperResult theorem2_hypothesis(std::int64_t q, const GapSpec& spec) {
  return is_proper(q, spec.symmetric_variant(spec.H * spec.H));
}

/// E(A) / (|A|^2 max(ln H, 1)^{2d+1}).
inline VerifyReport verify_theorem2(std::int64_t q, const GapSpec& spec) {
  if (spec.H < 2) fail(ErrorKind::InvalidArgument, "theorem 2 needs H >= 2");
  ProperResult hyp = theorem2_hypothesis(q, spec);
  if (!hyp.proper)
    fail(ErrorKind::ImproperHypothesis,
         "range-H^2 progression collides: " + vec_str(hyp.witness->first) + " ~ " + vec_str(hyp.witness->second));
  VerifyReport rep;
  rep.kind = "theorem2";
  rep.parameters = gap_parameters(q, spec);
  rep.threshold = "finite";

  FieldParams fq = make_field(q, 1);
  ElementSet A = enumerate_gap(q, spec);
  ProductSetReport ps = product_set(fq, A);
  const double a = static_cast<double>(A.size());
  double ratio = static_cast<double>(ps.energy) /
                 (a * a * std::pow(log_guard(static_cast<double>(spec.H)), 2 * spec.d() + 1));
  rep.observed = ObservedConstant::of(ratio);
  rep.pass = std::isfinite(ratio);
  rep.details.emplace_back("set_size", std::to_string(ps.set_size));
  rep.details.emplace_back("energy", std::to_string(ps.energy));
  rep.details.emplace_back("product_set_size", std::to_string(ps.product_set_size));
  rep.details.emplace_back("cauchy_schwarz_holds", bool_str(ps.cauchy_schwarz_holds));
  return rep;
}

/// Per-coordinate values {2^j / H} cap [1/H, 1] together with 1, as a product grid.
inline std::vector<std::vector<Rational>> default_eps_grid(std::int64_t H, int d) {
  std::vector<Rational> axis;
  for (std::int64_t p = 1; p < H; p *= 2) axis.emplace_back(p, H);
  axis.emplace_back(1);
  std::vector<std::vector<Rational>> grid{{}};
  for (int i = 0; i < d; ++i) {
    std::vector<std::vector<Rational>> next;
    for (const auto& g : grid)
      for (const auto& e : axis) {
        auto h = g;
        h.push_back(e);
        next.push_back(std::move(h));
      }
    grid = std::move(next);
  }
  return grid;
}

/// |E(A) - |A|^4/q| against max(ln H, 1)^{2d}/q * max_eps E(A, eps)/(prod eps)^2.
/// Bohr membership saturates at eps = 1/2 (every residue is within 1/2).
inline VerifyReport verify_reduction_lemma(std::int64_t q, const GapSpec& spec,
                                           const std::vector<std::vector<Rational>>& eps_grid) {
  ProperResult pr = is_proper(q, spec);
  if (!pr.proper)
    fail(ErrorKind::ImproperHypothesis,
         "progression is not proper: " + vec_str(pr.witness->first) + " ~ " + vec_str(pr.witness->second));
  VerifyReport rep;
  rep.kind = "reduction";
  rep.parameters = gap_parameters(q, spec);
  rep.threshold = "finite";

  FieldParams fq = make_field(q, 1);
  ElementSet A = enumerate_gap(q, spec);
  const std::uint64_t E = mult_energy(fq, A).E;
  const Rational a(static_cast<std::int64_t>(A.size()));
  Rational dev = (Rational(static_cast<std::int64_t>(E)) - a * a * a * a / Rational(q)).abs();

  double best = 0;
  std::vector<Rational> arg;
  for (const auto& eps : eps_grid) {
    if (static_cast<int>(eps.size()) != spec.d()) fail(ErrorKind::InvalidArgument, "eps grid point has wrong rank");
    BohrSpec bohr{spec.alphas, {}};
    double prod = 1;
    for (const auto& e : eps) {
      if (e <= Rational(0) || e > Rational(1)) fail(ErrorKind::InvalidArgument, "eps must lie in (0, 1]");
      bohr.eps.push_back(min(e, Rational(1, 2)));
      prod *= e.to_double();
    }
    ElementSet Bs = enumerate_bohr(q, bohr);
    double v = static_cast<double>(mixed_energy(q, A, Bs).value) / (prod * prod);
    if (arg.empty() || v > best) {
      best = v;
      arg = eps;
    }
  }
  double rhs = std::pow(log_guard(static_cast<double>(spec.H)), 2 * spec.d()) / static_cast<double>(q) * best;
  double constant = dev == Rational(0) ? 0.0 : dev.to_double() / rhs;
  rep.observed = ObservedConstant::of(constant);
  rep.pass = std::isfinite(constant);
  rep.details.emplace_back("energy", std::to_string(E));
  rep.details.emplace_back("deviation", dev.str());
  rep.details.emplace_back("rhs", fmt6(rhs));
  std::string eps_s = "(";
  for (std::size_t i = 0; i < arg.size(); ++i) eps_s += (i ? "," : "") + arg[i].str();
  rep.witnesses = {{"eps", eps_s + ")"}};
  return rep;
}

/// Lex-least nontrivial h with |h_i| <= H and sum alpha_i h_i = 0 mod q, among
/// those of minimal sup-norm whose first nonzero entry is positive.
inline std::optional<std::vector<std::int64_t>> kernel_witness(std::int64_t q, const std::vector<std::int64_t>& alphas,
                                                               std::int64_t H) {
  const int d = static_cast<int>(alphas.size());
  std::optional<std::vector<std::int64_t>> best;
  std::int64_t best_sup = 0;
  std::vector<std::int64_t> h(d, -H);
  while (true) {
    std::int64_t s = 0, sup = 0;
    int lead = 0;
    for (int i = 0; i < d; ++i) {
      s = mod(s + mul_mod(mod(alphas[i], q), mod(h[i], q), q), q);
      sup = std::max<std::int64_t>(sup, h[i] < 0 ? -h[i] : h[i]);
      if (lead == 0 && h[i] != 0) lead = h[i] > 0 ? 1 : -1;
    }
    if (s == 0 && lead > 0 && (!best || sup < best_sup || (sup == best_sup && h < *best))) {
      best = h;
      best_sup = sup;
    }
    int i = d - 1;
    while (i >= 0 && h[i] == H) h[i--] = -H;
    if (i < 0) break;
    ++h[i];
  }
  return best;
}

/// |B(alpha, eps)| / (q prod(eps_i + 1/H)).
inline VerifyReport verify_shao(std::int64_t q, const std::vector<std::int64_t>& alphas, std::int64_t H,
                                const std::vector<Rational>& eps) {
  if (H < 1) fail(ErrorKind::InvalidArgument, "H must be positive");
  if (auto w = kernel_witness(q, alphas, H))
    fail(ErrorKind::KernelConditionFails, "nontrivial relation h = " + vec_str(*w));
  VerifyReport rep;
  rep.kind = "shao";
  rep.parameters = {{"q", std::to_string(q)}, {"alphas", vec_str(alphas)}, {"H", std::to_string(H)}};
  std::string eps_s = "(";
  for (std::size_t i = 0; i < eps.size(); ++i) eps_s += (i ? "," : "") + eps[i].str();
  rep.parameters.emplace_back("eps", eps_s + ")");
  rep.threshold = "finite";

  ElementSet B = enumerate_bohr(q, BohrSpec{alphas, eps});
  Rational denom(q);
  for (const auto& e : eps) denom *= e + Rational(1, H);
  Rational ratio = Rational(static_cast<std::int64_t>(B.size())) / denom;
  rep.observed = ObservedConstant::of(ratio);
  rep.pass = true;
  rep.details.emplace_back("bohr_size", std::to_string(B.size()));
  return rep;
}

// ---------------------------------------------------------------------------
// Membership uniqueness

namespace detail {

/// Whether u / d lies in L, through the congruence description when present.
inline bool member(const IntLattice& L, const std::vector<std::int64_t>& u, std::int64_t d) {
  if (!L.congruence) return contains(L, u, d);
  const auto& form = *L.congruence;
  std::vector<std::int64_t> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    i128 x = static_cast<i128>(u[i]) * L.denom;
    if (x % d != 0) return false;
    v[i] = static_cast<std::int64_t>(x / d);
  }
  for (std::size_t j = 0; j < form.dep_idx.size(); ++j) {
    i128 acc = 0;
    for (std::size_t k = 0; k < form.free_idx.size(); ++k) acc += static_cast<i128>(form.A[j][k]) * v[form.free_idx[k]];
    if (mod(static_cast<std::int64_t>(acc % form.modulus) - v[form.dep_idx[j]], form.modulus) != 0) return false;
  }
  return true;
}

}  // namespace detail

/// Counts nonzero integer points of D (numerators in (-q, q)) lying in two or
/// more of the Gamma(z), z != 0, and likewise for D* cap Z^{2n}/q against the
/// dual lattices.
inline VerifyReport verify_membership_uniqueness(const FieldParams& f, const std::vector<std::int64_t>& H) {
  if (f.order > 5000) fail(ErrorKind::BudgetExceeded, "membership scan needs q^n <= 5000");
  const int d = 2 * f.n;
  std::vector<IntLattice> primal, dual;
  BodySpec box;
  for (std::int64_t code = 1; code < f.order; ++code) {
    auto [L, B] = gamma_box(f, ff_from_code(f, code), H);
    dual.push_back(dual_lattice(L));
    primal.push_back(std::move(L));
    box = std::move(B);
  }
  BodySpec polar = dual_body(box);

  auto scan = [&](const std::vector<IntLattice>& family, const BodySpec& body, std::int64_t denom,
                  std::uint64_t& points, std::optional<std::vector<std::int64_t>>& witness) {
    std::vector<std::int64_t> bound(d);
    for (int i = 0; i < d; ++i) {
      Rational lim = body.kind == BodyKind::SupBox ? body.weights[i] * Rational(denom)
                                                    : Rational(denom) / body.weights[i];
      bound[i] = std::min<std::int64_t>(lim.floor(), f.q - 1);
    }
    double cost = static_cast<double>(family.size());
    for (auto b : bound) cost *= static_cast<double>(2 * b + 1);
    if (cost > kEnumerationBudget) fail(ErrorKind::BudgetExceeded, "membership scan exceeds budget");
    std::uint64_t multi = 0;
    std::vector<std::int64_t> u(d);
    for (int i = 0; i < d; ++i) u[i] = -bound[i];
    while (true) {
      bool zero = std::all_of(u.begin(), u.end(), [](std::int64_t x) { return x == 0; });
      if (!zero && body.norm(u, denom) <= Rational(1)) {
        ++points;
        int hits = 0;
        for (const auto& L : family)
          if (detail::member(L, u, denom) && ++hits > 1) break;
        if (hits > 1) {
          if (!witness) witness = u;
          ++multi;
        }
      }
      int i = d - 1;
      while (i >= 0 && u[i] == bound[i]) u[i--] = -bound[i];
      if (i < 0) break;
      ++u[i];
    }
    return multi;
  };

  std::uint64_t pts_p = 0, pts_d = 0;
  std::optional<std::vector<std::int64_t>> wit_p, wit_d;
  std::uint64_t multi_p = scan(primal, box, 1, pts_p, wit_p);
  std::uint64_t multi_d = scan(dual, polar, f.q, pts_d, wit_d);

  VerifyReport rep;
  rep.kind = "membership";
  rep.parameters = field_parameters(f, H);
  rep.threshold = "0";
  rep.observed = ObservedConstant::of(Rational(static_cast<std::int64_t>(multi_p + multi_d)));
  rep.pass = multi_p + multi_d == 0;
  rep.details = {{"primal_points", std::to_string(pts_p)},
                 {"primal_multi", std::to_string(multi_p)},
                 {"dual_points", std::to_string(pts_d)},
                 {"dual_multi", std::to_string(multi_d)}};
  if (wit_p) rep.witnesses.emplace_back("primal_point", vec_str(*wit_p));
  if (wit_d) rep.witnesses.emplace_back("dual_point", vec_str(*wit_d) + "/" + std::to_string(f.q));
  return rep;
}

// ---------------------------------------------------------------------------
// Stability

/// max at the largest q <= growth * max at the smallest q.
struct StabilityVerdict {
  double small_q_max = 0;
  double large_q_max = 0;
  double growth = 2;
  bool stable = true;
};

inline StabilityVerdict ratio_stability(double small_q_max, double large_q_max, double growth) {
  StabilityVerdict v{small_q_max, large_q_max, growth, true};
  v.stable = std::isfinite(large_q_max) && large_q_max <= growth * small_q_max;
  return v;
}

/// Lower-bound form: value at the largest q >= value at the smallest q / growth.
inline StabilityVerdict floor_stability(double small_q_min, double large_q_min, double growth) {
  StabilityVerdict v{small_q_min, large_q_min, growth, true};
  v.stable = large_q_min * growth >= small_q_min;
  return v;
}

}  // namespace multeq
