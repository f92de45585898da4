#ifndef POLYBOHR_VERIFICATION_HPP
#define POLYBOHR_VERIFICATION_HPP

// Property suites: hold-below checks on sampled bounded functions, sharpness
// witnesses from the extremal family, and coefficient/growth lemma audits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polybohr/errors.hpp"
#include "polybohr/families.hpp"
#include "polybohr/functionals.hpp"
#include "polybohr/parallel.hpp"
#include "polybohr/radius.hpp"
#include "polybohr/report.hpp"
#include "polybohr/series.hpp"

namespace polybohr {

/// Truncation policy: double K from `initial` until the tail is below target or K reaches `cap`.
struct KPolicy {
  unsigned initial = 16;
  unsigned cap = 512;
  double tail_target = 1e-10;
  std::uint64_t max_terms = 2'000'000;  // stop doubling before a truncation this large
};

struct SuiteConfig {
  RadiusFamily family;
  std::size_t samples = 200;
  std::vector<std::size_t> dims;  // empty: the family's own n
  double margin_below = 0.99;
  double margin_above = 0.02;
  std::vector<double> a_schedule{0.9, 0.99, 0.999};
  std::uint64_t seed = 7;
  KPolicy k_policy;
  std::size_t max_factors_per_coordinate = 3;
};

struct CaseResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t dim = 1;
  double r = 0.0;
  unsigned K = 0;
  std::string check;  // what was evaluated, e.g. "B[multiples_of(2)] at diag(-r)"
  EvalReport report;
  std::optional<double> witness_a;
  std::vector<std::pair<double, double>> a_values;  // sharpness: (a, functional value)
};

struct SuiteReport {
  std::string suite;
  std::vector<CaseResult> cases;
  std::size_t holds = 0;
  std::size_t violated = 0;
  std::size_t inconclusive = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> failing_seeds;
  bool passed = false;
  std::vector<std::string> notes;

  std::size_t total() const { return cases.size(); }
};

// ---------------------------------------------------------------------------

/// The family with its dimension replaced by d; univariate families accept only d = 1.
inline RadiusFamily with_dimension(const RadiusFamily& fam, std::size_t d) {
  return std::visit(
      [d](auto f) -> RadiusFamily {
        if constexpr (requires { f.n; }) {
          f.n = d;
        } else {
          if (d != 1) throw DomainError("suite: " + family_name(RadiusFamily{f}) + " is univariate; dims must be {1}");
        }
        return f;
      },
      fam);
}

inline void validate(const SuiteConfig& config) {
  validate(config.family);
  if (!(config.margin_below > 0.0 && config.margin_below < 1.0)) throw DomainError("suite: margin_below must lie in (0, 1)");
  if (!(config.margin_above > 0.0)) throw DomainError("suite: margin_above must be > 0");
  if (config.a_schedule.empty()) throw DomainError("suite: a_schedule must not be empty");
  for (double a : config.a_schedule) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("suite: a_schedule values must lie in (0, 1)");
  }
  if (config.max_factors_per_coordinate == 0) throw DomainError("suite: max_factors_per_coordinate must be >= 1");
  if (config.k_policy.initial == 0 || config.k_policy.cap < config.k_policy.initial) {
    throw DomainError("suite: K policy needs 1 <= initial <= cap");
  }
  if (std::holds_alternative<family::AN>(config.family)) {
    throw DomainError("suite: the limit constant A_N has no functional to verify");
  }
}

namespace detail {

inline std::vector<std::size_t> suite_dims(const SuiteConfig& config) {
  if (!config.dims.empty()) return config.dims;
  return {dimension_of(config.family)};
}

/// Vanishing order of the Schwarz map the family's functional composes with (0: none).
inline unsigned schwarz_order(const RadiusFamily& fam) {
  return std::visit(
      [](const auto& f) -> unsigned {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::RogosinskiUni> || std::is_same_v<T, family::ConvexT>) return 1;
        else if constexpr (std::is_same_v<T, family::RmN> || std::is_same_v<T, family::RmnN> ||
                           std::is_same_v<T, family::ConvexMNT>) return f.m;
        else return 0;
      },
      fam);
}

/// Functionals that depend on z only through r = ||z||_inf.
inline bool radial_only(const RadiusFamily& fam) {
  return std::holds_alternative<family::Classical>(fam) || std::holds_alternative<family::AreaT>(fam);
}

enum class Purpose { HoldBelow, Sharpness };

inline std::string point_label(std::size_t which) {
  switch (which) {
    case 0: return "diag(r)";
    case 1: return "diag(-r)";
    default: return "torus#" + std::to_string(which - 2);
  }
}

/// Evaluates the family's functional for f at z (r = ||z||_inf).
inline EvalReport evaluate_family(const RadiusFamily& fam, const TruncatedSeries& f, const SchwarzMapSpec* omega,
                                  const Point& z, Purpose purpose, std::string* label) {
  const double r = z.inf_norm();
  return std::visit(
      [&](const auto& p) -> EvalReport {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, family::Classical>) {
          if (label) *label = "A";
          return functional_A(f, r);
        } else if constexpr (std::is_same_v<T, family::RogosinskiUni>) {
          if (label) *label = "B[from_degree(" + std::to_string(p.N) + "),p=" + std::to_string(p.p) + "]";
          return functional_B(f, *omega, z, TailMode::from_degree(p.N), p.p);
        } else if constexpr (std::is_same_v<T, family::RmN>) {
          const auto mode = TailMode::from_degree(p.N);
          if (label) *label = "B[" + to_string(mode) + "]";
          return functional_B(f, *omega, z, mode);
        } else if constexpr (std::is_same_v<T, family::RmnN>) {
          // Hold-below uses the series over multiples of N; the sharper
          // witness uses every degree >= N.
          const auto mode =
              purpose == Purpose::HoldBelow ? TailMode::multiples_of(p.N) : TailMode::from_degree(p.N);
          if (label) *label = "B[" + to_string(mode) + "]";
          return functional_B(f, *omega, z, mode);
        } else if constexpr (std::is_same_v<T, family::ConvexT> || std::is_same_v<T, family::ConvexMNT>) {
          if (label) *label = "C[t=" + std::to_string(p.t) + "]";
          return functional_C(f, *omega, z, p.t);
        } else if constexpr (std::is_same_v<T, family::EulerLambda>) {
          if (label) *label = "D[lambda=" + std::to_string(p.lambda) + "]";
          return functional_D(f, z, p.lambda);
        } else if constexpr (std::is_same_v<T, family::AreaT>) {
          if (label) *label = "E[t=" + std::to_string(p.t) + "]";
          return functional_E(f, r, p.t);
        } else {
          throw DomainError("suite: the limit constant A_N has no functional to verify");
        }
      },
      fam);
}

/// Worse of two reports: VIOLATED beats INCONCLUSIVE beats HOLDS, ties by smaller slack.
inline bool worse(const EvalReport& a, const EvalReport& b) {
  auto rank = [](Verdict v) { return v == Verdict::Violated ? 2 : v == Verdict::Inconclusive ? 1 : 0; };
  if (rank(a.verdict) != rank(b.verdict)) return rank(a.verdict) > rank(b.verdict);
  return a.slack() < b.slack();
}

inline std::uint64_t truncation_terms(std::size_t n, unsigned K) {
  // number of multi-indices of degree <= K in n variables = count of degree K in n+1
  try {
    return multiindex_count(n + 1, K);
  } catch (const CapacityError&) {
    return std::numeric_limits<std::uint64_t>::max();
  }
}

/// Runs eval(K) under the escalation policy; returns the last report and the K used.
template <class Eval>
std::pair<EvalReport, unsigned> escalate(const KPolicy& policy, std::size_t n, Eval&& eval) {
  unsigned K = policy.initial;
  EvalReport rep = eval(K);
  while (rep.tail_bound >= policy.tail_target && K < policy.cap) {
    const unsigned next = std::min(policy.cap, 2 * K);
    if (truncation_terms(n, next) > policy.max_terms) break;
    K = next;
    rep = eval(K);
  }
  return {rep, K};
}

inline void tally(SuiteReport& rep) {
  rep.holds = rep.violated = rep.inconclusive = 0;
  rep.worst_slack = std::numeric_limits<double>::infinity();
  rep.failing_seeds.clear();
  for (const auto& c : rep.cases) {
    switch (c.report.verdict) {
      case Verdict::Holds: ++rep.holds; break;
      case Verdict::Violated: ++rep.violated; break;
      case Verdict::Inconclusive: ++rep.inconclusive; break;
    }
    rep.worst_slack = std::min(rep.worst_slack, c.report.slack());
  }
}

}  // namespace detail

/**
 * Samples bounded functions and evaluates the family's functional at
 * r = margin_below * radius. Every case must HOLD.
 *
 * Points per case: diag(r), diag(-r) and two random torus points. Even cases
 * compose with the pure power map, odd cases with a sampled Schwarz map.
 */
inline SuiteReport check_holds_below(const SuiteConfig& config) {
  validate(config);
  const auto dims = detail::suite_dims(config);
  SuiteReport rep;
  rep.suite = "holds_below:" + family_name(config.family);

  struct Plan {
    RadiusFamily fam;
    double radius_r;
  };
  std::vector<Plan> plans;
  for (std::size_t d : dims) {
    RadiusFamily fam = with_dimension(config.family, d);
    plans.push_back({fam, solve(fam).radius_r});
  }

  const std::size_t total = config.samples * plans.size();
  rep.cases.resize(total);
  parallel_for(total, [&](std::size_t idx) {
    const auto& plan = plans[idx % plans.size()];
    const std::size_t n = dimension_of(plan.fam);
    const std::uint64_t case_seed = derive_seed(config.seed, idx);
    const std::size_t fpc = 1 + static_cast<std::size_t>(idx / plans.size()) % config.max_factors_per_coordinate;
    const auto spec = sample_product_spec(case_seed, n, fpc);
    const double r = config.margin_below * plan.radius_r;

    const unsigned order = detail::schwarz_order(plan.fam);
    std::optional<SchwarzMapSpec> omega;
    if (order > 0) {
      omega = (idx % 2 == 0) ? schwarz_power_map(n, order) : sample_schwarz_map(derive_seed(case_seed, 2), n, order, 1);
    }

    std::vector<Point> points{Point::diagonal(n, r), Point::diagonal(n, -r)};
    if (!detail::radial_only(plan.fam)) {
      Lcg64 rng(derive_seed(case_seed, 1));
      for (int j = 0; j < 2; ++j) {
        std::vector<Complex> c(n);
        for (auto& v : c) v = std::polar(r, 2.0 * std::numbers::pi * rng.uniform());
        points.emplace_back(std::move(c));
      }
    } else {
      points.erase(points.begin() + 1, points.end());
    }

    std::string label;
    std::size_t worst_point = 0;
    auto [report, K] = detail::escalate(config.k_policy, n, [&](unsigned K) {
      const TruncatedSeries f = spec.series(K);
      EvalReport worst;
      for (std::size_t j = 0; j < points.size(); ++j) {
        std::string l;
        auto e = detail::evaluate_family(plan.fam, f, omega ? &*omega : nullptr, points[j], detail::Purpose::HoldBelow, &l);
        if (j == 0 || detail::worse(e, worst)) {
          worst = e;
          worst_point = j;
          label = l;
        }
      }
      // escalate on the largest tail among the points
      return worst;
    });

    CaseResult& c = rep.cases[idx];
    c.index = idx;
    c.seed = case_seed;
    c.dim = n;
    c.r = r;
    c.K = K;
    c.check = label + " at " + detail::point_label(worst_point) + (omega && idx % 2 ? " (sampled map)" : "");
    c.report = report;
  });

  detail::tally(rep);
  for (const auto& c : rep.cases) {
    if (c.report.verdict != Verdict::Holds) rep.failing_seeds.push_back(c.seed);
  }
  rep.passed = rep.violated == 0 && rep.inconclusive == 0;
  return rep;
}

/**
 * Evaluates the functional of the extremal function f_a at r = radius +
 * margin_above for each a in the schedule. A case passes (counted as
 * VIOLATED, meaning the radius is exceeded) when some a gives VIOLATED.
 *
 * Points: diag(r) for A and E, diag(-r) for D, and diag(r e^{i pi(2m-1)/m})
 * composed with zeta^m for B and C.
 */
inline SuiteReport check_sharpness_above(const SuiteConfig& config) {
  validate(config);
  const auto dims = detail::suite_dims(config);
  SuiteReport rep;
  rep.suite = "sharpness_above:" + family_name(config.family);
  rep.cases.resize(dims.size());

  parallel_for(dims.size(), [&](std::size_t idx) {
    const RadiusFamily fam = with_dimension(config.family, dims[idx]);
    const std::size_t n = dimension_of(fam);
    const double r = solve(fam).radius_r + config.margin_above;
    CaseResult& c = rep.cases[idx];
    c.index = idx;
    c.seed = config.seed;
    c.dim = n;
    c.r = r;

    const unsigned order = detail::schwarz_order(fam);
    std::optional<SchwarzMapSpec> omega;
    Point z = Point::diagonal(n, r);
    std::string where = "diag(r)";
    if (order > 0) {
      omega = schwarz_power_map(n, order);
      const double angle = std::numbers::pi * (2.0 * order - 1.0) / order;
      z = Point::diagonal(n, std::polar(r, angle));
      where = "diag(r e^{i pi(2m-1)/m}), m=" + std::to_string(order);
    } else if (std::holds_alternative<family::EulerLambda>(fam)) {
      z = Point::diagonal(n, -r);
      where = "diag(-r)";
    }

    if (!(r < 1.0)) {
      c.report = make_report(std::numeric_limits<double>::quiet_NaN(), 0.0);
      c.report.verdict = Verdict::Inconclusive;
      c.check = "r = radius + margin leaves the unit polydisc";
      return;
    }

    bool have = false;
    for (double a : config.a_schedule) {
      const ExtremalSpec spec(a, n);
      std::string label;
      EvalReport e;
      unsigned K = 0;
      try {
        std::tie(e, K) = detail::escalate(config.k_policy, n, [&](unsigned K) {
          return detail::evaluate_family(fam, extremal_series(spec, K), omega ? &*omega : nullptr, z,
                                         detail::Purpose::Sharpness, &label);
        });
      } catch (const DivergentTail&) {
        continue;  // a n r >= 1: the majorant diverges, no finite witness
      }
      c.a_values.emplace_back(a, e.value);
      if (c.witness_a) continue;
      // keep the witness if one appears, otherwise the largest value seen
      if (e.verdict == Verdict::Violated) c.witness_a = a;
      if (!have || c.witness_a || e.value > c.report.value) {
        c.report = e;
        c.K = K;
        c.check = label + " of f_a at " + where;
        have = true;
      }
    }
    if (!have) {
      c.report = make_report(std::numeric_limits<double>::quiet_NaN(), 0.0);
      c.report.verdict = Verdict::Inconclusive;
      c.check = "no a in the schedule gives a convergent majorant";
    }
  });

  detail::tally(rep);
  for (const auto& c : rep.cases) {
    if (!c.witness_a) rep.failing_seeds.push_back(c.seed);
  }
  rep.passed = rep.violated == rep.total();
  return rep;
}

struct LemmaAuditConfig {
  std::size_t pairs = 10'000;
  std::vector<std::size_t> dims{1, 2, 3};
  std::uint64_t seed = 11;
  std::size_t max_factors_per_coordinate = 3;
  unsigned coefficient_degree = 8;
  double max_scaled_radius = std::numbers::sqrt2 - 1.0;  // cap on n r
};

namespace detail {

// Equality cases (single factors) sit exactly on several bounds, so allow rounding.
inline bool within(double lhs, double rhs) { return lhs <= rhs + 1e-12 + 1e-12 * std::abs(rhs); }

}  // namespace detail

/**
 * Audits, per (function, point) pair:
 *   |f(z)| <= (|f(0)| + r)/(1 + |f(0)| r);
 *   |a_alpha| <= 1 - |a_0|^2 for alpha != 0;
 *   |f(z)| <= r^k with k the zero multiplicity (and likewise for a sampled Schwarz map);
 *   |Df(z)| <= r (1 - |f(z)|^2)/(1 - r^2) <= n r (1 - |f(z)|^2)/(1 - (n r)^2).
 * Each case reports the smallest slack across the checks as its value.
 */
inline SuiteReport audit_lemmas(const LemmaAuditConfig& config) {
  if (config.pairs == 0) throw DomainError("audit_lemmas: pairs must be >= 1");
  if (config.dims.empty()) throw DomainError("audit_lemmas: dims must not be empty");
  SuiteReport rep;
  rep.suite = "lemma_audit";
  rep.cases.resize(config.pairs);

  parallel_for(config.pairs, [&](std::size_t idx) {
    const std::size_t n = config.dims[idx % config.dims.size()];
    const std::uint64_t case_seed = derive_seed(config.seed, idx);
    const std::size_t fpc = 1 + (idx / config.dims.size()) % config.max_factors_per_coordinate;
    const auto spec = sample_product_spec(case_seed, n, fpc);
    const auto omega = sample_schwarz_map(derive_seed(case_seed, 2), n, 1 + idx % 3, 1);

    Lcg64 rng(derive_seed(case_seed, 1));
    const double r = rng.uniform() * config.max_scaled_radius / static_cast<double>(n);
    std::vector<Complex> zc(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double mod = i == 0 ? r : r * rng.uniform();
      zc[i] = std::polar(mod, 2.0 * std::numbers::pi * rng.uniform());
    }
    const Point z(std::move(zc));

    const std::vector<Complex> origin(n);
    const double f0 = std::abs(spec.eval(origin));
    const double fz = std::abs(spec.eval(z.coords()));
    const double dfz = std::abs(spec.euler(z.coords()));

    double worst = std::numeric_limits<double>::infinity();
    std::string worst_check;
    bool ok = true;
    auto check = [&](const std::string& name, double lhs, double rhs) {
      const double s = rhs - lhs;
      if (s < worst) {
        worst = s;
        worst_check = name;
      }
      if (!detail::within(lhs, rhs)) ok = false;
    };

    check("growth", fz, (f0 + r) / (1.0 + f0 * r));

    const TruncatedSeries f = spec.series(config.coefficient_degree);
    const double coeff_cap = 1.0 - f0 * f0;
    unsigned multiplicity = config.coefficient_degree + 1;
    for (const auto& [alpha, c] : f.coeffs()) {
      if (alpha.degree() == 0) continue;
      check("coefficient", std::abs(c), coeff_cap);
    }
    for (const auto& [alpha, c] : f.coeffs()) {
      multiplicity = alpha.degree();
      break;  // storage order is graded, so the first stored index has the least degree
    }
    if (multiplicity >= 1) check("zero multiplicity", fz, std::pow(r, static_cast<double>(multiplicity)));
    for (std::size_t i = 0; i < n; ++i) {
      check("schwarz map", std::abs(omega.component(i, z[i])),
            std::pow(r, static_cast<double>(omega.vanishing_order(i))));
    }

    const double x = static_cast<double>(n) * r;
    check("euler (r)", dfz, r * (1.0 - fz * fz) / (1.0 - r * r));
    check("euler (nr)", dfz, x * (1.0 - fz * fz) / (1.0 - x * x));

    CaseResult& c = rep.cases[idx];
    c.index = idx;
    c.seed = case_seed;
    c.dim = n;
    c.r = r;
    c.K = config.coefficient_degree;
    c.check = "tightest: " + worst_check;
    // threshold 0: value is minus the smallest slack, so HOLDS means every bound held
    c.report = make_report(-worst, 0.0, 0.0);
    c.report.verdict = ok ? Verdict::Holds : Verdict::Violated;
  });

  detail::tally(rep);
  for (const auto& c : rep.cases) {
    if (c.report.verdict != Verdict::Holds) rep.failing_seeds.push_back(c.seed);
  }
  rep.passed = rep.violated == 0 && rep.inconclusive == 0;
  return rep;
}

/**
 * Compares |Df_a(-r, ..., -r)| computed from the series (closed form removed)
 * with n r (1 - a^2)/(1 + a n r)^2. K doubles until the certified tail is at
 * most 1e-10 of the expected value; agreement to 1e-9 relative is required.
 */
inline SuiteReport euler_closed_form_check(const std::vector<double>& a_values, const std::vector<std::size_t>& n_values,
                                           const std::vector<double>& r_values, const KPolicy& policy = {}) {
  struct Item {
    double a;
    std::size_t n;
    double r;
  };
  std::vector<Item> items;
  for (double a : a_values)
    for (std::size_t n : n_values)
      for (double r : r_values) {
        if (!(a >= 0.0 && a < 1.0)) throw DomainError("euler_closed_form_check: a must lie in [0, 1)");
        if (!(static_cast<double>(n) * r < 1.0 && r > 0.0)) throw DomainError("euler_closed_form_check: need 0 < n r < 1");
        items.push_back({a, n, r});
      }

  SuiteReport rep;
  rep.suite = "euler_closed_form";
  rep.cases.resize(items.size());
  parallel_for(items.size(), [&](std::size_t idx) {
    const auto [a, n, r] = items[idx];
    const double x = static_cast<double>(n) * r;
    const double expected = x * (1.0 - a * a) / ((1.0 + a * x) * (1.0 + a * x));
    const Point z = Point::diagonal(n, -r);
    const ExtremalSpec spec(a, n);

    unsigned K = policy.initial;
    double got = 0.0;
    double tail = 0.0;
    for (;;) {
      TruncatedSeries f = extremal_series(spec, K);
      f.clear_closed_form();
      const TruncatedSeries df = euler_derivative(f);
      got = std::abs(eval_series(df, z));
      tail = series_tail_at(df, r);
      if (tail <= 1e-10 * expected || K >= policy.cap) break;
      const unsigned next = std::min(policy.cap, 2 * K);
      if (detail::truncation_terms(n, next) > policy.max_terms) break;
      K = next;
    }
    const double rel = std::abs(got - expected) / expected;
    CaseResult& c = rep.cases[idx];
    c.index = idx;
    c.dim = n;
    c.r = r;
    c.K = K;
    c.check = "a=" + std::to_string(a) + " |Df_a| series vs closed form";
    c.report = make_report(rel, tail / expected, 1e-9, 0.0, EvalPath::Series);
    c.a_values.emplace_back(a, got);
  });

  detail::tally(rep);
  for (const auto& c : rep.cases) {
    if (c.report.verdict != Verdict::Holds) rep.failing_seeds.push_back(c.seed);
  }
  rep.passed = rep.violated == 0 && rep.inconclusive == 0;
  return rep;
}

}  // namespace polybohr

#endif  // POLYBOHR_VERIFICATION_HPP
