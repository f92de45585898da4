#ifndef POLYBOHR_FUNCTIONALS_HPP
#define POLYBOHR_FUNCTIONALS_HPP

// Bohr-type functionals evaluated on truncated series. Every report carries a
// rigorous bound for what the truncation dropped.

#include <cmath>
#include <complex>
#include <string>

#include "polybohr/errors.hpp"
#include "polybohr/families.hpp"
#include "polybohr/report.hpp"
#include "polybohr/series.hpp"

namespace polybohr {

/// Which degree blocks a Rogosinski-type tail sums over.
struct TailMode {
  enum class Kind { FromDegree, MultiplesOf };
  Kind kind;
  unsigned N;

  static TailMode from_degree(unsigned N) { return TailMode(Kind::FromDegree, N); }
  static TailMode multiples_of(unsigned N) { return TailMode(Kind::MultiplesOf, N); }

  bool contains(unsigned k) const {
    return kind == Kind::FromDegree ? k >= N : (k >= N && k % N == 0);
  }

 private:
  TailMode(Kind k, unsigned n) : kind(k), N(n) {
    if (n == 0) throw DomainError("TailMode: N must be >= 1");
  }
};

inline std::string to_string(const TailMode& mode) {
  return (mode.kind == TailMode::Kind::FromDegree ? "from_degree(" : "multiples_of(") +
         std::to_string(mode.N) + ")";
}

namespace detail {

struct PartialSum {
  double value = 0.0;
  double tail = 0.0;
};

/// sum over selected degrees k of block_k r^k, plus the tail over k > K.
template <class Select>
PartialSum selected_majorant(const TruncatedSeries& f, double r, Select select, unsigned first_degree) {
  const auto blocks = majorant_block_sums(f);
  PartialSum out;
  double rk = 1.0;
  for (unsigned k = 0; k < blocks.size(); ++k) {
    if (select(k)) out.value += blocks[k] * rk;
    rk *= r;
  }
  out.tail = tail_majorant(f, r, first_degree);
  return out;
}

struct Modulus {
  double value = 0.0;
  double error = 0.0;  // two-sided bound on |computed - true|
  EvalPath path = EvalPath::None;
};

inline Modulus modulus_of_value(const TruncatedSeries& f, const Point& w) {
  if (w.dim() != f.dim()) throw DimensionMismatch("functional: point dimension mismatch");
  if (f.closed_form() && f.closed_form()->value) {
    return {std::abs(f.closed_form()->value(w.coords())), 0.0, EvalPath::ClosedForm};
  }
  return {std::abs(eval_series(f, w)), series_tail_at(f, w.inf_norm()), EvalPath::Series};
}

inline Modulus modulus_of_euler(const TruncatedSeries& f, const Point& z) {
  if (z.dim() != f.dim()) throw DimensionMismatch("functional: point dimension mismatch");
  if (f.closed_form() && f.closed_form()->euler) {
    return {std::abs(f.closed_form()->euler(z.coords())), 0.0, EvalPath::ClosedForm};
  }
  const TruncatedSeries df = euler_derivative(f);
  return {std::abs(eval_series(df, z)), series_tail_at(df, z.inf_norm()), EvalPath::Series};
}

inline EvalPath combine(EvalPath a, EvalPath b) {
  if (a == EvalPath::Series || b == EvalPath::Series) return EvalPath::Series;
  if (a == EvalPath::ClosedForm || b == EvalPath::ClosedForm) return EvalPath::ClosedForm;
  return EvalPath::None;
}

inline double radius_of(const Point& z) {
  const double r = z.inf_norm();
  if (!(r < 1.0)) throw DomainError("functional: ||z||_inf must be < 1");
  return r;
}

}  // namespace detail

/// A(r) = sum_alpha |a_alpha| r^{|alpha|}.
inline EvalReport functional_A(const TruncatedSeries& f, double r, double threshold = 1.0) {
  return majorant_sum(f, r, threshold);
}

/**
 * B = |f(omega(z))|^p + sum_{k in mode} block_k r^k, with r = ||z||_inf.
 *
 * p = 2 squares the modulus term. A series-evaluated modulus contributes its
 * truncation error to both tail_bound and lower_slack.
 */
inline EvalReport functional_B(const TruncatedSeries& f, const SchwarzMapSpec& omega, const Point& z,
                               const TailMode& mode, int p = 1, double threshold = 1.0) {
  if (p != 1 && p != 2) throw DomainError("functional_B: modulus power must be 1 or 2");
  if (z.dim() != f.dim() || omega.dim() != f.dim()) throw DimensionMismatch("functional_B: dimension mismatch");
  const double r = detail::radius_of(z);
  const Point w = eval_schwarz(omega, z);
  const auto mod = detail::modulus_of_value(f, w);
  double head = mod.value;
  double head_err = mod.error;
  if (p == 2) {
    head = mod.value * mod.value;
    head_err = (2.0 * mod.value + mod.error) * mod.error;
  }
  const auto maj = detail::selected_majorant(f, r, [&](unsigned k) { return mode.contains(k); }, mode.N);
  return make_report(head + maj.value, maj.tail + head_err, threshold, head_err, mod.path);
}

/// C = t |f(omega(z))| + (1 - t) A(r).
inline EvalReport functional_C(const TruncatedSeries& f, const SchwarzMapSpec& omega, const Point& z,
                               double t, double threshold = 1.0) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("functional_C: t must lie in [0, 1]");
  if (z.dim() != f.dim() || omega.dim() != f.dim()) throw DimensionMismatch("functional_C: dimension mismatch");
  const double r = detail::radius_of(z);
  const auto maj = majorant_sum(f, r);
  if (t == 0.0) return make_report(maj.value, maj.tail_bound, threshold);
  const auto mod = detail::modulus_of_value(f, eval_schwarz(omega, z));
  const double err = t * mod.error;
  return make_report(t * mod.value + (1.0 - t) * maj.value, err + (1.0 - t) * maj.tail_bound, threshold,
                     err, mod.path);
}

/// D = |f(z)| + |Df(z)| + lambda sum_{k>=2} block_k r^k.
inline EvalReport functional_D(const TruncatedSeries& f, const Point& z, double lambda,
                               double threshold = 1.0) {
  if (!(lambda > 0.0)) throw DomainError("functional_D: lambda must be > 0");
  const double r = detail::radius_of(z);
  const auto val = detail::modulus_of_value(f, z);
  const auto der = detail::modulus_of_euler(f, z);
  const auto maj = detail::selected_majorant(f, r, [](unsigned k) { return k >= 2; }, 2);
  const double err = val.error + der.error;
  return make_report(val.value + der.value + lambda * maj.value, err + lambda * maj.tail, threshold, err,
                     detail::combine(val.path, der.path));
}

/// E = t A(r) + (1 - t) * area sum at r.
inline EvalReport functional_E(const TruncatedSeries& f, double r, double t, double threshold = 1.0) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("functional_E: t must lie in (0, 1]");
  const auto maj = majorant_sum(f, r);
  if (t == 1.0) return make_report(maj.value, maj.tail_bound, threshold);
  const auto area = area_sum(f, r);
  return make_report(t * maj.value + (1.0 - t) * area.value,
                     t * maj.tail_bound + (1.0 - t) * area.tail_bound, threshold);
}

/// One-variable Bohr-Rogosinski sum |f(z)|^p + sum_{k>=N} |a_k| r^k.
inline EvalReport functional_rogosinski_uni(const TruncatedSeries& f, Complex z, unsigned N, int p = 1,
                                            double threshold = 1.0) {
  if (f.dim() != 1) throw DimensionMismatch("functional_rogosinski_uni: series must be univariate");
  return functional_B(f, schwarz_power_map(1, 1), Point{z}, TailMode::from_degree(N), p, threshold);
}

}  // namespace polybohr

#endif  // POLYBOHR_FUNCTIONALS_HPP
