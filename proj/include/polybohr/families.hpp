#ifndef POLYBOHR_FAMILIES_HPP
#define POLYBOHR_FAMILIES_HPP

// Function families used as inputs: the Moebius-type extremal family, finite
// Blaschke products (bounded by one on the polydisc by construction) and
// componentwise Schwarz maps.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "polybohr/errors.hpp"
#include "polybohr/series.hpp"

namespace polybohr {

/**
 * Reproducible generator: 64-bit LCG, x <- 6364136223846793005 x + 1442695040888963407
 * (mod 2^64). uniform() uses the top 53 bits, so draws are identical on every
 * platform.
 */
class Lcg64 {
 public:
  using Engine = std::linear_congruential_engine<std::uint64_t, 6364136223846793005ULL,
                                                 1442695040888963407ULL, 0ULL>;

  explicit Lcg64(std::uint64_t seed) : engine_(seed) { engine_.discard(1); }

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  Engine engine_;
};

/// Independent per-case seed (SplitMix64 finalizer over seed and index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Extremal family f_a(z) = (a - s) / (1 - a s), s = z_1 + ... + z_n.

struct ExtremalSpec {
  double a;
  std::size_t n;

  ExtremalSpec(double a_, std::size_t n_) : a(a_), n(n_) {
    if (!(a >= 0.0 && a < 1.0)) throw DomainError("ExtremalSpec: a must lie in [0, 1)");
    if (n == 0) throw DomainError("ExtremalSpec: dimension must be at least 1");
  }
};

inline Complex extremal_value(double a, Complex s) {
  const Complex denom = 1.0 - a * s;
  if (std::abs(denom) < 1e-14) throw DomainError("extremal: evaluation point is at the pole");
  return (a - s) / denom;
}

/// D f_a = s f_a'(s) = -s (1 - a^2) / (1 - a s)^2.
inline Complex extremal_euler_value(double a, Complex s) {
  const Complex denom = 1.0 - a * s;
  if (std::abs(denom) < 1e-14) throw DomainError("extremal: evaluation point is at the pole");
  return -s * (1.0 - a * a) / (denom * denom);
}

inline Complex extremal_closed_eval(const ExtremalSpec& spec, const Point& z) {
  if (z.dim() != spec.n) throw DimensionMismatch("extremal_closed_eval: dimension mismatch");
  Complex s{};
  for (const auto& c : z.coords()) s += c;
  return extremal_value(spec.a, s);
}

/**
 * Taylor expansion of f_a to degree K:
 *   a_0 = a,  a_alpha = -(1 - a^2) a^{k-1} k!/alpha!  for |alpha| = k >= 1.
 * Degree blocks equal ((1-a^2)/a) (a n)^k, which is the attached tail bound.
 */
inline TruncatedSeries extremal_series(const ExtremalSpec& spec, unsigned K) {
  const double a = spec.a;
  const std::size_t n = spec.n;
  TruncatedSeries f(n, K);
  f.set(MultiIndex::zero(n), Complex{a, 0.0});
  const double lead = 1.0 - a * a;
  double a_pow = 1.0;  // a^{k-1}
  for (unsigned k = 1; k <= K; ++k) {
    if (a_pow == 0.0) break;
    for (const auto& alpha : enumerate_multiindices(n, k)) {
      f.set(alpha, Complex{-lead * a_pow * multinomial_coeff_real(alpha), 0.0});
    }
    a_pow *= a;
  }
  if (a > 0.0) {
    f.set_tail(TailBound{lead / a, a * static_cast<double>(n), K + 1, 0});
  } else if (K == 0) {
    // Only the linear block -(z_1 + ... + z_n) is discarded.
    f.set_tail(TailBound{1.0, static_cast<double>(n), 1, 0});
  }
  ClosedForm cf;
  cf.value = [a](std::span<const Complex> z) {
    Complex s{};
    for (const auto& c : z) s += c;
    return extremal_value(a, s);
  };
  cf.euler = [a](std::span<const Complex> z) {
    Complex s{};
    for (const auto& c : z) s += c;
    return extremal_euler_value(a, s);
  };
  cf.label = "extremal";
  f.set_closed_form(std::move(cf));
  return f;
}

// ---------------------------------------------------------------------------
// Blaschke factors and products.

/// B_w(zeta) = (w - zeta) / (1 - conj(w) zeta), |w| < 1.
class BlaschkeFactor {
 public:
  explicit BlaschkeFactor(Complex w) : w_(w) {
    if (!(std::abs(w) < 1.0)) throw DomainError("BlaschkeFactor: |w| must be < 1");
  }

  Complex w() const noexcept { return w_; }

  Complex operator()(Complex zeta) const { return (w_ - zeta) / (1.0 - std::conj(w_) * zeta); }

  Complex derivative(Complex zeta) const {
    const Complex d = 1.0 - std::conj(w_) * zeta;
    return (std::norm(w_) - 1.0) / (d * d);
  }

  /// w - (1 - |w|^2) sum_{k>=1} conj(w)^{k-1} zeta^k, truncated at K.
  std::vector<Complex> coefficients(unsigned K) const {
    std::vector<Complex> c(K + 1);
    c[0] = w_;
    Complex p = 1.0;
    const double lead = 1.0 - std::norm(w_);
    for (unsigned k = 1; k <= K; ++k) {
      c[k] = -lead * p;
      p *= std::conj(w_);
    }
    return c;
  }

  /// Majorant |w| + (1 - |w|^2) rho / (1 - |w| rho), for |w| rho < 1.
  double majorant(double rho) const {
    const double m = std::abs(w_);
    return m + (1.0 - m * m) * rho / (1.0 - m * rho);
  }

 private:
  Complex w_;
};

namespace detail {

inline std::vector<Complex> truncated_product(std::span<const BlaschkeFactor> factors, unsigned K) {
  std::vector<Complex> acc(K + 1);
  acc[0] = 1.0;
  for (const auto& b : factors) {
    const auto c = b.coefficients(K);
    std::vector<Complex> next(K + 1);
    for (unsigned i = 0; i <= K; ++i) {
      if (acc[i] == Complex{}) continue;
      for (unsigned j = 0; i + j <= K; ++j) next[i + j] += acc[i] * c[j];
    }
    acc = std::move(next);
  }
  return acc;
}

inline Complex product_value(std::span<const BlaschkeFactor> factors, Complex zeta) {
  Complex v = 1.0;
  for (const auto& b : factors) v *= b(zeta);
  return v;
}

inline Complex product_derivative(std::span<const BlaschkeFactor> factors, Complex zeta) {
  Complex d{};
  for (std::size_t j = 0; j < factors.size(); ++j) {
    Complex term = factors[j].derivative(zeta);
    for (std::size_t l = 0; l < factors.size(); ++l) {
      if (l != j) term *= factors[l](zeta);
    }
    d += term;
  }
  return d;
}

inline Complex random_disc_point(Lcg64& rng, double max_modulus) {
  const double u = rng.uniform();
  const double v = rng.uniform();
  return std::polar(max_modulus * std::sqrt(u), 2.0 * std::numbers::pi * v);
}

inline BlaschkeFactor random_factor(Lcg64& rng) {
  // One factor in eight is a pure zero at the origin.
  if ((rng.next() >> 61) == 0) return BlaschkeFactor(Complex{});
  return BlaschkeFactor(random_disc_point(rng, 0.99));
}

}  // namespace detail

/**
 * g(z) = e^{i phase} prod_i prod_j B_{ij}(z_i).
 *
 * Each coordinate carries its own list of factors, so |g| <= 1 on the unit
 * polydisc.
 */
struct ProductFunctionSpec {
  std::size_t n = 1;
  double phase = 0.0;
  std::vector<std::vector<BlaschkeFactor>> factors;  // factors[i] acts on z_i

  std::size_t total_factors() const {
    std::size_t t = 0;
    for (const auto& f : factors) t += f.size();
    return t;
  }

  double max_factor_modulus() const {
    double m = 0.0;
    for (const auto& fi : factors)
      for (const auto& b : fi) m = std::max(m, std::abs(b.w()));
    return m;
  }

  Complex eval(std::span<const Complex> z) const {
    if (z.size() != n) throw DimensionMismatch("ProductFunctionSpec::eval: dimension mismatch");
    Complex v = std::polar(1.0, phase);
    for (std::size_t i = 0; i < n; ++i) v *= detail::product_value(factors[i], z[i]);
    return v;
  }

  /// sum_i z_i dg/dz_i by the product rule.
  Complex euler(std::span<const Complex> z) const {
    if (z.size() != n) throw DimensionMismatch("ProductFunctionSpec::euler: dimension mismatch");
    std::vector<Complex> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = detail::product_value(factors[i], z[i]);
    Complex total{};
    for (std::size_t i = 0; i < n; ++i) {
      Complex term = z[i] * detail::product_derivative(factors[i], z[i]);
      for (std::size_t l = 0; l < n; ++l) {
        if (l != i) term *= h[l];
      }
      total += term;
    }
    return std::polar(1.0, phase) * total;
  }

  /**
   * Truncation to degree K with a certified tail.
   *
   * Degree blocks are dominated by the coefficients of F(rho) = prod M_ij(rho),
   * the product of the factor majorants, so by Cauchy's estimate at rho0 they
   * are <= F(rho0) rho0^{-k}. rho0 = 1/sqrt(max|w|) keeps F finite; when every
   * w is zero F is a polynomial and rho0 = 1.
   */
  TruncatedSeries series(unsigned K) const {
    std::vector<std::vector<Complex>> uni(n);
    for (std::size_t i = 0; i < n; ++i) uni[i] = detail::truncated_product(factors[i], K);
    const Complex unit = std::polar(1.0, phase);

    TruncatedSeries f(n, K);
    for (unsigned k = 0; k <= K; ++k) {
      for (const auto& alpha : enumerate_multiindices(n, k)) {
        Complex c = unit;
        for (std::size_t i = 0; i < n && c != Complex{}; ++i) c *= uni[i][alpha[i]];
        f.set(alpha, c);
      }
    }

    const std::size_t J = total_factors();
    const double q_max = max_factor_modulus();
    const bool exact = J == 0 || (q_max == 0.0 && K >= J);
    if (!exact) {
      const double rho0 = q_max > 0.0 ? 1.0 / std::sqrt(q_max) : 1.0;
      double scale = 1.0;
      for (const auto& fi : factors)
        for (const auto& b : fi) scale *= b.majorant(rho0);
      f.set_tail(TailBound{scale, 1.0 / rho0, K + 1, 0});
    }

    ClosedForm cf;
    const ProductFunctionSpec self = *this;
    cf.value = [self](std::span<const Complex> z) { return self.eval(z); };
    cf.euler = [self](std::span<const Complex> z) { return self.euler(z); };
    cf.label = "blaschke-product";
    f.set_closed_form(std::move(cf));
    return f;
  }
};

/// Random product with `factors_per_coordinate` factors on every coordinate.
inline ProductFunctionSpec sample_product_spec(std::uint64_t seed, std::size_t n,
                                               std::size_t factors_per_coordinate) {
  if (n == 0) throw DomainError("sample_product_spec: dimension must be at least 1");
  Lcg64 rng(seed);
  ProductFunctionSpec spec;
  spec.n = n;
  spec.phase = 2.0 * std::numbers::pi * rng.uniform();
  spec.factors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < factors_per_coordinate; ++j) {
      spec.factors[i].push_back(detail::random_factor(rng));
    }
  }
  return spec;
}

/// Degree-K truncation of a seeded unit-bounded Blaschke product.
inline TruncatedSeries sample_bounded_function(std::uint64_t seed, std::size_t n,
                                               std::size_t factors_per_coordinate, unsigned K) {
  return sample_product_spec(seed, n, factors_per_coordinate).series(K);
}

// ---------------------------------------------------------------------------
// Schwarz maps omega_i(zeta) = e^{i phi_i} zeta^m B_i(zeta).

struct SchwarzMapSpec {
  unsigned m = 1;
  std::vector<double> phases;                      // one per coordinate
  std::vector<std::vector<BlaschkeFactor>> tails;  // one (possibly empty) list per coordinate

  std::size_t dim() const noexcept { return tails.size(); }

  Complex component(std::size_t i, Complex zeta) const {
    Complex v = 1.0;
    for (unsigned e = 0; e < m; ++e) v *= zeta;
    v *= detail::product_value(tails.at(i), zeta);
    if (phases.at(i) != 0.0) v *= std::polar(1.0, phases[i]);
    return v;
  }

  /// Order of vanishing of omega_i at the origin (m plus zeros of the tail factors).
  unsigned vanishing_order(std::size_t i) const {
    unsigned order = m;
    for (const auto& b : tails.at(i)) {
      if (b.w() == Complex{}) ++order;
    }
    return order;
  }
};

inline SchwarzMapSpec schwarz_power_map(std::size_t n, unsigned m) {
  if (n == 0) throw DomainError("schwarz_power_map: dimension must be at least 1");
  if (m == 0) throw DomainError("schwarz_power_map: vanishing order m must be >= 1");
  SchwarzMapSpec s;
  s.m = m;
  s.phases.assign(n, 0.0);
  s.tails.assign(n, {});
  return s;
}

inline SchwarzMapSpec sample_schwarz_map(std::uint64_t seed, std::size_t n, unsigned m,
                                         std::size_t factors_per_coordinate) {
  SchwarzMapSpec s = schwarz_power_map(n, m);
  Lcg64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    s.phases[i] = 2.0 * std::numbers::pi * rng.uniform();
    for (std::size_t j = 0; j < factors_per_coordinate; ++j) {
      s.tails[i].push_back(detail::random_factor(rng));
    }
  }
  return s;
}

inline Point eval_schwarz(const SchwarzMapSpec& omega, const Point& z) {
  if (z.dim() != omega.dim()) throw DimensionMismatch("eval_schwarz: dimension mismatch");
  if (!(z.inf_norm() < 1.0)) throw DomainError("eval_schwarz: point outside the open polydisc");
  std::vector<Complex> out(z.dim());
  for (std::size_t i = 0; i < z.dim(); ++i) out[i] = omega.component(i, z[i]);
  return Point(std::move(out));
}

}  // namespace polybohr

#endif  // POLYBOHR_FAMILIES_HPP
