#ifndef POLYBOHR_SERIES_HPP
#define POLYBOHR_SERIES_HPP

// Multi-indices and truncated power series on the polydisc, with certified
// tails for every sum that is reported as a verdict.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polybohr/errors.hpp"
#include "polybohr/report.hpp"

namespace polybohr {

using Complex = std::complex<double>;

/// Largest degree accepted by the exact integer multinomial.
inline constexpr unsigned kMaxMultinomialDegree = 60;

/// Largest number of multi-indices a single enumeration may return.
inline constexpr std::uint64_t kMaxEnumeration = 50'000'000;

class MultiIndex {
 public:
  explicit MultiIndex(std::vector<unsigned> exponents) : exponents_(std::move(exponents)) {
    if (exponents_.empty()) throw DomainError("MultiIndex: dimension must be at least 1");
    for (unsigned e : exponents_) degree_ += e;
  }
  MultiIndex(std::initializer_list<unsigned> exponents)
      : MultiIndex(std::vector<unsigned>(exponents)) {}

  static MultiIndex zero(std::size_t n) { return MultiIndex(std::vector<unsigned>(n, 0U)); }

  std::size_t dim() const noexcept { return exponents_.size(); }
  unsigned degree() const noexcept { return degree_; }
  unsigned operator[](std::size_t i) const { return exponents_.at(i); }
  std::span<const unsigned> exponents() const noexcept { return exponents_; }

  bool operator==(const MultiIndex& other) const = default;

 private:
  std::vector<unsigned> exponents_;
  unsigned degree_ = 0;
};

/// Orders by degree, then colexicographically (last coordinate most significant).
struct GradedColexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    for (std::size_t i = a.dim(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }
};

/// C(k+n-1, n-1): the number of multi-indices of dimension n and degree k.
inline std::uint64_t multiindex_count(std::size_t n, unsigned k) {
  if (n == 0) throw DomainError("multiindex_count: dimension must be at least 1");
  std::uint64_t c = 1;
  for (std::size_t i = 1; i < n; ++i) {
    // c * (k + i) / i is exact; dividing out gcd(c, i) first keeps the product small
    const std::uint64_t g = std::gcd(c, static_cast<std::uint64_t>(i));
    const std::uint64_t factor = (static_cast<std::uint64_t>(k) + i) / (i / g);
    if (__builtin_mul_overflow(c / g, factor, &c)) {
      throw CapacityError("multiindex_count: count overflows 64 bits for n=" + std::to_string(n) +
                          ", k=" + std::to_string(k));
    }
  }
  return c;
}

/// Every multi-index of dimension n and degree k, in colexicographic order.
inline std::vector<MultiIndex> enumerate_multiindices(std::size_t n, unsigned k) {
  const std::uint64_t count = multiindex_count(n, k);
  if (count > kMaxEnumeration) {
    throw CapacityError("enumerate_multiindices: " + std::to_string(count) +
                        " indices exceeds capacity " + std::to_string(kMaxEnumeration));
  }
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<unsigned> exps(n, 0U);
  // Outer loops run over the trailing coordinates in ascending order.
  auto fill = [&](auto&& self, std::size_t pos, unsigned remaining) -> void {
    if (pos == 0) {
      exps[0] = remaining;
      out.emplace_back(exps);
      return;
    }
    for (unsigned v = 0; v <= remaining; ++v) {
      exps[pos] = v;
      self(self, pos - 1, remaining - v);
    }
    exps[pos] = 0;
  };
  fill(fill, n - 1, k);
  return out;
}

/// |alpha|! / alpha!, exact. Rejects |alpha| > 60 and any intermediate overflow.
inline std::uint64_t multinomial_coeff(const MultiIndex& alpha) {
  if (alpha.degree() > kMaxMultinomialDegree) {
    throw CapacityError("multinomial_coeff: degree " + std::to_string(alpha.degree()) +
                        " exceeds " + std::to_string(kMaxMultinomialDegree));
  }
  // Product of binomials C(s_i, alpha_i) with s_i the running degree.
  std::uint64_t result = 1;
  std::uint64_t running = 0;
  for (unsigned e : alpha.exponents()) {
    for (unsigned j = 1; j <= e; ++j) {
      ++running;
      std::uint64_t scaled = 0;
      if (__builtin_mul_overflow(result, running, &scaled)) {
        throw CapacityError("multinomial_coeff: value overflows 64 bits");
      }
      result = scaled / j;
    }
  }
  return result;
}

/// |alpha|! / alpha! in floating point, for degrees beyond the exact range.
inline double multinomial_coeff_real(const MultiIndex& alpha) {
  double result = 1.0;
  double running = 0.0;
  for (unsigned e : alpha.exponents()) {
    for (unsigned j = 1; j <= e; ++j) {
      running += 1.0;
      result = result * running / static_cast<double>(j);
    }
  }
  return result;
}

/**
 * Certified decay of the discarded degree blocks.
 *
 * For every k >= valid_from_degree:
 *   sum_{|alpha|=k} |a_alpha| <= scale * k^degree_power * ratio^k.
 * degree_power is 0 for the function families and grows by one per Euler
 * derivative.
 */
struct TailBound {
  double scale = 0.0;
  double ratio = 0.0;
  unsigned valid_from_degree = 1;
  unsigned degree_power = 0;
};

/**
 * sum_{k >= from} k^power * x^k for 0 <= x < 1.
 *
 * The first 200 terms are summed explicitly; the remainder is bounded by the
 * geometric series on the (monotone) ratio of consecutive terms.
 */
inline double weighted_geometric_tail(unsigned power, double x, unsigned from) {
  if (!(x >= 0.0)) throw DomainError("weighted_geometric_tail: negative ratio");
  if (x >= 1.0) throw DivergentTail("weighted_geometric_tail: ratio " + std::to_string(x) + " >= 1");
  if (x == 0.0) return 0.0;
  if (from == 0) from = 1;  // the k = 0 term never belongs to a tail
  auto term = [&](double k) { return std::pow(k, static_cast<double>(power)) * std::pow(x, k); };

  double sum = 0.0;
  double last = static_cast<double>(from) + 199.0;
  for (double k = from; k <= last; k += 1.0) sum += term(k);
  // Extend until the term ratio drops below 1.
  auto step_ratio = [&](double k) {
    return std::pow((k + 1.0) / k, static_cast<double>(power)) * x;
  };
  constexpr double kMaxTerms = 1e7;
  while (step_ratio(last + 1.0) >= 1.0) {
    last += 1.0;
    sum += term(last);
    if (last - from > kMaxTerms) throw DivergentTail("weighted_geometric_tail: no geometric regime");
  }
  const double rho = step_ratio(last + 1.0);
  sum += term(last + 1.0) / (1.0 - rho);
  return sum;
}

/// Exact evaluators carried by series that are truncations of a known function.
struct ClosedForm {
  std::function<Complex(std::span<const Complex>)> value;
  std::function<Complex(std::span<const Complex>)> euler;  // may be empty
  std::string label;
};

class Point {
 public:
  explicit Point(std::vector<Complex> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw DomainError("Point: dimension must be at least 1");
  }
  Point(std::initializer_list<Complex> coords) : Point(std::vector<Complex>(coords)) {}

  static Point diagonal(std::size_t n, Complex value) {
    return Point(std::vector<Complex>(n, value));
  }

  std::size_t dim() const noexcept { return coords_.size(); }
  const Complex& operator[](std::size_t i) const { return coords_.at(i); }
  std::span<const Complex> coords() const noexcept { return coords_; }

  double inf_norm() const {
    double m = 0.0;
    for (const auto& c : coords_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  std::vector<Complex> coords_;
};

/**
 * A power series truncated at max_degree, stored sparsely.
 *
 * Iteration over coeffs() visits ascending degree, colexicographic within a
 * degree. Absent keys are zero coefficients. Without a tail the series is an
 * exact polynomial.
 */
class TruncatedSeries {
 public:
  using CoeffMap = std::map<MultiIndex, Complex, GradedColexLess>;

  TruncatedSeries(std::size_t dim, unsigned max_degree) : dim_(dim), max_degree_(max_degree) {
    if (dim == 0) throw DomainError("TruncatedSeries: dimension must be at least 1");
  }

  std::size_t dim() const noexcept { return dim_; }
  unsigned max_degree() const noexcept { return max_degree_; }
  const CoeffMap& coeffs() const noexcept { return coeffs_; }
  const std::optional<TailBound>& tail() const noexcept { return tail_; }
  const std::optional<ClosedForm>& closed_form() const noexcept { return closed_form_; }

  Complex coeff(const MultiIndex& alpha) const {
    auto it = coeffs_.find(alpha);
    return it == coeffs_.end() ? Complex{} : it->second;
  }

  void set(const MultiIndex& alpha, Complex value) {
    if (alpha.dim() != dim_) {
      throw DimensionMismatch("TruncatedSeries::set: index dimension " + std::to_string(alpha.dim()) +
                              " != " + std::to_string(dim_));
    }
    if (alpha.degree() > max_degree_) {
      throw DomainError("TruncatedSeries::set: degree " + std::to_string(alpha.degree()) +
                        " exceeds max_degree " + std::to_string(max_degree_));
    }
    if (value == Complex{}) {
      coeffs_.erase(alpha);
    } else {
      coeffs_.insert_or_assign(alpha, value);
    }
  }

  void set_tail(const TailBound& tail) {
    if (tail.scale < 0.0 || tail.ratio < 0.0) throw DomainError("TailBound: negative constant");
    if (tail.valid_from_degree > max_degree_ + 1) {
      throw DomainError("TailBound: degrees between max_degree and valid_from_degree are uncovered");
    }
    tail_ = tail;
  }
  void clear_tail() { tail_.reset(); }

  void set_closed_form(ClosedForm cf) { closed_form_ = std::move(cf); }
  void clear_closed_form() { closed_form_.reset(); }

 private:
  std::size_t dim_;
  unsigned max_degree_;
  CoeffMap coeffs_;
  std::optional<TailBound> tail_;
  std::optional<ClosedForm> closed_form_;
};

/// Coefficientwise sum. Both operands must share dimension and truncation degree.
inline TruncatedSeries operator+(const TruncatedSeries& f, const TruncatedSeries& g) {
  if (f.dim() != g.dim()) throw DimensionMismatch("series sum: dimension mismatch");
  if (f.max_degree() != g.max_degree()) throw DomainError("series sum: truncation degrees differ");
  TruncatedSeries out(f.dim(), f.max_degree());
  for (const auto& [alpha, c] : f.coeffs()) out.set(alpha, c);
  for (const auto& [alpha, c] : g.coeffs()) out.set(alpha, out.coeff(alpha) + c);
  if (f.tail() || g.tail()) {
    const TailBound zero{0.0, 0.0, f.max_degree() + 1, 0};
    const TailBound& a = f.tail() ? *f.tail() : zero;
    const TailBound& b = g.tail() ? *g.tail() : zero;
    out.set_tail(TailBound{a.scale + b.scale, std::max(a.ratio, b.ratio),
                           std::max(a.valid_from_degree, b.valid_from_degree),
                           std::max(a.degree_power, b.degree_power)});
  }
  if (f.closed_form() && g.closed_form()) {
    ClosedForm cf;
    auto fv = f.closed_form()->value;
    auto gv = g.closed_form()->value;
    cf.value = [fv, gv](std::span<const Complex> z) { return fv(z) + gv(z); };
    auto fe = f.closed_form()->euler;
    auto ge = g.closed_form()->euler;
    if (fe && ge) cf.euler = [fe, ge](std::span<const Complex> z) { return fe(z) + ge(z); };
    cf.label = f.closed_form()->label + "+" + g.closed_form()->label;
    out.set_closed_form(std::move(cf));
  }
  return out;
}

/// sum_{|alpha| <= K} a_alpha z^alpha, accumulated in storage order.
inline Complex eval_series(const TruncatedSeries& f, const Point& z) {
  if (z.dim() != f.dim()) {
    throw DimensionMismatch("eval_series: point dimension " + std::to_string(z.dim()) +
                            " != series dimension " + std::to_string(f.dim()));
  }
  const unsigned K = f.max_degree();
  std::vector<std::vector<Complex>> powers(f.dim(), std::vector<Complex>(K + 1));
  for (std::size_t i = 0; i < f.dim(); ++i) {
    powers[i][0] = 1.0;
    for (unsigned e = 1; e <= K; ++e) powers[i][e] = powers[i][e - 1] * z[i];
  }
  Complex sum{};
  for (const auto& [alpha, c] : f.coeffs()) {
    Complex term = c;
    for (std::size_t i = 0; i < f.dim(); ++i) {
      if (alpha[i] != 0) term *= powers[i][alpha[i]];
    }
    sum += term;
  }
  return sum;
}

/// Entry k is sum_{|alpha|=k} |a_alpha|, for 0 <= k <= K.
inline std::vector<double> majorant_block_sums(const TruncatedSeries& f) {
  std::vector<double> blocks(f.max_degree() + 1, 0.0);
  for (const auto& [alpha, c] : f.coeffs()) blocks[alpha.degree()] += std::abs(c);
  return blocks;
}

/// Bound on sum_{k >= from} block_k * r^k over the discarded degrees (k > K).
inline double tail_majorant(const TruncatedSeries& f, double r, unsigned from) {
  if (!f.tail()) return 0.0;
  const TailBound& t = *f.tail();
  if (t.scale == 0.0) return 0.0;
  const double x = t.ratio * r;
  if (x >= 1.0) {
    throw DivergentTail("tail bound diverges: q*r = " + std::to_string(x) + " >= 1");
  }
  return t.scale * weighted_geometric_tail(t.degree_power, x, std::max(from, f.max_degree() + 1));
}

/// |f(z) - S_K(z)| <= this for every z with ||z||_inf <= r.
inline double series_tail_at(const TruncatedSeries& f, double r) {
  return tail_majorant(f, r, f.max_degree() + 1);
}

/// Equal-radius majorant sum_k block_k r^k with its certified tail, against threshold.
inline EvalReport majorant_sum(const TruncatedSeries& f, double r, double threshold = 1.0) {
  if (!(r >= 0.0)) throw DomainError("majorant_sum: radius must be nonnegative");
  const auto blocks = majorant_block_sums(f);
  double value = 0.0;
  double rk = 1.0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    value += blocks[k] * rk;
    rk *= r;
  }
  return make_report(value, series_tail_at(f, r), threshold);
}

/// Df = sum_i z_i df/dz_i: scales the degree-k part by k.
inline TruncatedSeries euler_derivative(const TruncatedSeries& f) {
  TruncatedSeries out(f.dim(), f.max_degree());
  for (const auto& [alpha, c] : f.coeffs()) {
    if (alpha.degree() != 0) out.set(alpha, static_cast<double>(alpha.degree()) * c);
  }
  if (f.tail()) {
    TailBound t = *f.tail();
    t.degree_power += 1;
    out.set_tail(t);
  }
  if (f.closed_form() && f.closed_form()->euler) {
    out.set_closed_form(ClosedForm{f.closed_form()->euler, {}, "D(" + f.closed_form()->label + ")"});
  }
  return out;
}

/**
 * Area (Dirichlet) sum: sum_{k>=1} k * (sum_{|alpha|=k} |a_alpha|^2) * r^{2k}.
 *
 * The tail uses sum |a|^2 <= (sum |a|)^2 on each degree block.
 */
inline EvalReport area_sum(const TruncatedSeries& f, double r, double threshold = 1.0) {
  if (!(r >= 0.0)) throw DomainError("area_sum: radius must be nonnegative");
  std::vector<double> sq(f.max_degree() + 1, 0.0);
  for (const auto& [alpha, c] : f.coeffs()) sq[alpha.degree()] += std::norm(c);
  double value = 0.0;
  const double r2 = r * r;
  double r2k = 1.0;
  for (std::size_t k = 0; k < sq.size(); ++k) {
    value += static_cast<double>(k) * sq[k] * r2k;
    r2k *= r2;
  }
  double tail = 0.0;
  if (f.tail() && f.tail()->scale > 0.0) {
    const TailBound& t = *f.tail();
    const double x = t.ratio * r;
    if (x * x >= 1.0) throw DivergentTail("area_sum: (q*r)^2 >= 1");
    tail = t.scale * t.scale *
           weighted_geometric_tail(2 * t.degree_power + 1, x * x, f.max_degree() + 1);
  }
  return make_report(value, tail, threshold);
}

}  // namespace polybohr

#endif  // POLYBOHR_SERIES_HPP
