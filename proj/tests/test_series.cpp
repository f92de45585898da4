#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "polybohr/series.hpp"

using namespace polybohr;

namespace {

std::vector<std::vector<unsigned>> as_vectors(const std::vector<MultiIndex>& v) {
  std::vector<std::vector<unsigned>> out;
  for (const auto& a : v) out.emplace_back(a.exponents().begin(), a.exponents().end());
  return out;
}

}  // namespace

TEST(MultiIndex, RejectsEmpty) { EXPECT_THROW(MultiIndex(std::vector<unsigned>{}), DomainError); }

TEST(MultiIndex, DegreeIsSum) {
  const MultiIndex a{2, 0, 3};
  EXPECT_EQ(a.degree(), 5U);
  EXPECT_EQ(a.dim(), 3U);
  EXPECT_EQ(MultiIndex::zero(4).degree(), 0U);
}

TEST(Enumeration, CountsAreBinomials) {
  EXPECT_EQ(multiindex_count(1, 7), 1U);
  EXPECT_EQ(multiindex_count(2, 2), 3U);
  EXPECT_EQ(multiindex_count(3, 2), 6U);
  EXPECT_EQ(multiindex_count(4, 0), 1U);
  EXPECT_EQ(multiindex_count(3, 10), 66U);
  EXPECT_EQ(multiindex_count(5, 4), 70U);
}

TEST(Enumeration, SizeMatchesCount) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (unsigned k = 0; k <= 6; ++k) EXPECT_EQ(enumerate_multiindices(n, k).size(), multiindex_count(n, k));
}

TEST(Enumeration, ColexOrderTwoVariables) {
  const std::vector<std::vector<unsigned>> want{{2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(as_vectors(enumerate_multiindices(2, 2)), want);
}

TEST(Enumeration, ColexOrderThreeVariables) {
  const std::vector<std::vector<unsigned>> want{{2, 0, 0}, {1, 1, 0}, {0, 2, 0}, {1, 0, 1}, {0, 1, 1}, {0, 0, 2}};
  EXPECT_EQ(as_vectors(enumerate_multiindices(3, 2)), want);
}

TEST(Enumeration, AllDistinctWithRightDegree) {
  const auto v = enumerate_multiindices(4, 5);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(v[i].degree(), 5U);
    if (i) {
      EXPECT_TRUE(GradedColexLess{}(v[i - 1], v[i]));
    }
  }
}

TEST(Enumeration, CapacityErrorWhenTooLarge) {
  EXPECT_THROW(enumerate_multiindices(12, 60), CapacityError);
  EXPECT_THROW(multiindex_count(64, 1'000'000'000U), CapacityError);
}

TEST(Multinomial, SmallValues) {
  EXPECT_EQ(multinomial_coeff(MultiIndex{2, 1}), 3U);
  EXPECT_EQ(multinomial_coeff(MultiIndex{1, 1, 1}), 6U);
  EXPECT_EQ(multinomial_coeff(MultiIndex{0, 0}), 1U);
  EXPECT_EQ(multinomial_coeff(MultiIndex{5}), 1U);
  EXPECT_EQ(multinomial_coeff(MultiIndex{2, 2}), 6U);
}

TEST(Multinomial, RowSumsArePowersOfN) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (unsigned k = 0; k <= 8; ++k) {
      std::uint64_t sum = 0;
      for (const auto& a : enumerate_multiindices(n, k)) sum += multinomial_coeff(a);
      EXPECT_EQ(sum, static_cast<std::uint64_t>(std::llround(std::pow(double(n), double(k)))));
    }
}

TEST(Multinomial, ExactRejectsHighDegree) { EXPECT_THROW(multinomial_coeff(MultiIndex{31, 30}), CapacityError); }

TEST(Multinomial, RealVersionMatchesLogGamma) {
  const MultiIndex a{31, 30};
  const double want = std::exp(std::lgamma(62.0) - std::lgamma(32.0) - std::lgamma(31.0));
  EXPECT_NEAR(multinomial_coeff_real(a) / want, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(multinomial_coeff_real(MultiIndex{3, 2, 1}), 60.0);
}

TEST(GeometricTail, PowerZeroIsGeometric) {
  for (double x : {0.1, 0.5, 0.9})
    for (unsigned from : {1U, 5U, 17U}) {
      const double want = std::pow(x, from) / (1.0 - x);
      EXPECT_NEAR(weighted_geometric_tail(0, x, from) / want, 1.0, 1e-12);
    }
}

TEST(GeometricTail, PowerOneClosedForm) {
  // sum_{k>=F} k x^k = x^F (F - (F-1) x) / (1-x)^2
  for (double x : {0.2, 0.7, 0.95})
    for (unsigned F : {1U, 3U, 40U}) {
      const double want = std::pow(x, F) * (F - (F - 1.0) * x) / ((1 - x) * (1 - x));
      // an upper bound, tight to a few parts per million
      const double got = weighted_geometric_tail(1, x, F);
      EXPECT_GE(got, want * (1 - 1e-12));
      EXPECT_LE(got, want * (1 + 1e-5));
    }
}

TEST(GeometricTail, DivergesAtOne) {
  EXPECT_THROW(weighted_geometric_tail(0, 1.0, 1), DivergentTail);
  EXPECT_EQ(weighted_geometric_tail(3, 0.0, 1), 0.0);
}

TEST(TruncatedSeries, SetValidates) {
  TruncatedSeries f(2, 3);
  EXPECT_THROW(f.set(MultiIndex{1, 0, 0}, 1.0), DimensionMismatch);
  EXPECT_THROW(f.set(MultiIndex{2, 2}, 1.0), DomainError);
  f.set(MultiIndex{1, 1}, 2.0);
  EXPECT_EQ(f.coeff(MultiIndex{1, 1}), Complex(2.0));
  f.set(MultiIndex{1, 1}, 0.0);
  EXPECT_TRUE(f.coeffs().empty());
}

TEST(TruncatedSeries, TailMustCoverDroppedDegrees) {
  TruncatedSeries f(1, 3);
  EXPECT_THROW(f.set_tail(TailBound{1.0, 0.5, 5, 0}), DomainError);
  EXPECT_NO_THROW(f.set_tail(TailBound{1.0, 0.5, 4, 0}));
}

TEST(TruncatedSeries, EvaluatesPolynomial) {
  TruncatedSeries f(2, 2);
  f.set(MultiIndex{0, 0}, 1.0);
  f.set(MultiIndex{1, 0}, 2.0);
  f.set(MultiIndex{1, 1}, 3.0);
  const Complex v = eval_series(f, Point{0.5, Complex(0, 1)});
  EXPECT_NEAR(v.real(), 2.0, 1e-15);
  EXPECT_NEAR(v.imag(), 1.5, 1e-15);
  EXPECT_THROW(eval_series(f, Point{0.5}), DimensionMismatch);
}

TEST(TruncatedSeries, SumAddsCoefficientsAndTails) {
  TruncatedSeries f(1, 2), g(1, 2);
  f.set(MultiIndex{1}, 1.0);
  g.set(MultiIndex{1}, -1.0);
  g.set(MultiIndex{2}, 0.5);
  f.set_tail(TailBound{1.0, 0.5, 3, 0});
  g.set_tail(TailBound{2.0, 0.7, 3, 1});
  const auto h = f + g;
  EXPECT_EQ(h.coeff(MultiIndex{1}), Complex(0.0));
  EXPECT_EQ(h.coeffs().size(), 1U);
  ASSERT_TRUE(h.tail());
  EXPECT_EQ(h.tail()->scale, 3.0);
  EXPECT_EQ(h.tail()->ratio, 0.7);
  EXPECT_EQ(h.tail()->degree_power, 1U);
  EXPECT_THROW(f + TruncatedSeries(1, 3), DomainError);
}

TEST(Majorant, ExactPolynomialHasNoTail) {
  TruncatedSeries f(1, 1);
  f.set(MultiIndex{0}, 0.5);
  f.set(MultiIndex{1}, Complex(0, -0.25));
  const auto rep = majorant_sum(f, 0.5);
  EXPECT_DOUBLE_EQ(rep.value, 0.625);
  EXPECT_EQ(rep.tail_bound, 0.0);
  EXPECT_EQ(rep.verdict, Verdict::Holds);
}

TEST(Majorant, VerdictBands) {
  TruncatedSeries f(1, 0);
  f.set(MultiIndex{0}, 0.9);
  f.set_tail(TailBound{1.0, 1.0, 1, 0});
  // tail at r: sum_{k>=1} r^k = r/(1-r)
  EXPECT_EQ(majorant_sum(f, 0.05).verdict, Verdict::Holds);       // 0.9 + 0.0526
  EXPECT_EQ(majorant_sum(f, 0.2).verdict, Verdict::Inconclusive);  // 0.9 + 0.25
  EXPECT_THROW(majorant_sum(f, 1.0), DivergentTail);
}

TEST(Euler, ScalesByDegree) {
  TruncatedSeries f(2, 3);
  f.set(MultiIndex{0, 0}, 4.0);
  f.set(MultiIndex{2, 1}, 1.5);
  f.set_tail(TailBound{1.0, 0.5, 4, 0});
  const auto df = euler_derivative(f);
  EXPECT_EQ(df.coeff(MultiIndex{0, 0}), Complex(0.0));
  EXPECT_EQ(df.coeff(MultiIndex{2, 1}), Complex(4.5));
  EXPECT_EQ(df.tail()->degree_power, 1U);
}

TEST(Area, MonomialValue) {
  // f = z/2 + z^2: area sum = 1*(1/4) r^2 + 2*1*r^4
  TruncatedSeries f(1, 2);
  f.set(MultiIndex{1}, 0.5);
  f.set(MultiIndex{2}, 1.0);
  const double r = 0.3;
  EXPECT_NEAR(area_sum(f, r).value, 0.25 * r * r + 2 * std::pow(r, 4), 1e-16);
}

TEST(Area, TailBoundsDroppedTerms) {
  // f = sum_k q^k z^k truncated at K; the exact dropped area is sum_{k>K} k q^{2k} r^{2k}
  const double q = 0.8, r = 0.5;
  const unsigned K = 5;
  TruncatedSeries f(1, K);
  for (unsigned k = 0; k <= K; ++k) f.set(MultiIndex{k}, std::pow(q, k));
  f.set_tail(TailBound{1.0, q, K + 1, 0});
  double dropped = 0.0;
  for (unsigned k = K + 1; k < 400; ++k) dropped += k * std::pow(q * r, 2.0 * k);
  const auto rep = area_sum(f, r);
  EXPECT_GE(rep.tail_bound, dropped);
  EXPECT_NEAR(rep.tail_bound, dropped, 1e-12);
}
