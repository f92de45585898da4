#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "polybohr/radius.hpp"

using namespace polybohr;

// Reference roots below were computed independently with a Brent solver
// (xtol 1e-15) on the same polynomials.

TEST(Solve, ClassicalClosedForm) {
  for (std::size_t n = 1; n <= 16; ++n) {
    const auto r = solve(family::Classical{n});
    EXPECT_DOUBLE_EQ(r.radius_r, 1.0 / (3.0 * n));
    EXPECT_DOUBLE_EQ(r.radius_r * n, 1.0 / 3.0);
    EXPECT_TRUE(r.closed_form);
  }
}

TEST(Solve, RogosinskiQuadratics) {
  EXPECT_NEAR(solve(family::RogosinskiUni{1, 1}).radius_r, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(solve(family::RogosinskiUni{1, 2}).radius_r, 0.5, 1e-15);
}

TEST(Solve, UnivariateRogosinskiSqrt5) { EXPECT_NEAR(solve(family::RmN{1, 1}).radius_r, std::sqrt(5.0) - 2.0, 1e-15); }

TEST(Solve, LimitConstants) {
  EXPECT_NEAR(solve(family::AN{1, 1}).radius_x, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(solve(family::AN{1, 2}).radius_x, 0.5, 1e-15);
  EXPECT_NEAR(solve(family::AN{4, 2}).radius_r, 0.125, 1e-15);
}

TEST(Solve, EulerQuartics) {
  EXPECT_NEAR(solve(family::EulerLambda{1, 0.5}).radius_x, 0.3190532542963703, 1e-14);
  EXPECT_NEAR(solve(family::EulerLambda{1, 0.25}).radius_x, 0.3190532542963703, 1e-14);
  EXPECT_NEAR(solve(family::EulerLambda{1, 0.6}).radius_x, 0.309452323764671, 1e-14);
  EXPECT_NEAR(solve(family::EulerLambda{1, 1.0}).radius_x, 0.28077640640441515, 1e-14);
  EXPECT_NEAR(solve(family::EulerLambda{1, 2.0}).radius_x, 0.23951603641130345, 1e-14);
  EXPECT_NEAR(solve(family::EulerLambda{3, 5.0}).radius_x, 0.18558041775760425, 1e-14);
  EXPECT_NEAR(solve(family::EulerLambda{3, 5.0}).radius_r, 0.18558041775760425 / 3, 1e-14);
}

TEST(Solve, MultivariateRogosinski) {
  const auto r = solve(family::RmnN{2, 2, 2});
  EXPECT_NEAR(r.radius_x, 0.4808428187013734, 1e-14);
  EXPECT_NEAR(r.radius_r, 0.4808428187013734 / 2, 1e-14);
}

TEST(Solve, AreaBranches) {
  EXPECT_NEAR(solve(family::AreaT{1, 0.2}).radius_x, 0.06635366986183763, 1e-14);
  EXPECT_NEAR(solve(family::AreaT{1, 0.4}).radius_x, 0.191282440060928, 1e-14);
  EXPECT_NEAR(solve(family::AreaT{2, 0.5}).radius_x, 0.29559774252208476, 1e-14);
  const auto c = solve(family::AreaT{2, 0.8});
  EXPECT_TRUE(c.closed_form);
  EXPECT_DOUBLE_EQ(c.radius_x, 1.0 / 3.0);
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_NEAR(solve(family::AreaT{n, 9.0 / 17.0}).radius_x, 1.0 / 3.0, 1e-15);
}

TEST(Solve, AreaApproachesBranchPointLinearly) {
  // the cubic root tends to 1/3 as t rises to 9/17, at slope about 1.34
  double prev = 1.0;
  for (double d : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const double gap = 1.0 / 3.0 - solve(family::AreaT{1, 9.0 / 17.0 - d}).radius_x;
    EXPECT_GT(gap, 0.0);
    EXPECT_LT(gap, 2.0 * d);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
}

TEST(Solve, ConvexMNT) {
  for (unsigned m = 1; m <= 3; ++m)
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto r = solve(family::ConvexMNT{m, n, 0.0});
      EXPECT_NEAR(r.radius_x, 1.0 / 3.0, 1e-14);
      EXPECT_NE(r.note.find("no further sign changes"), std::string::npos);
    }
  EXPECT_NEAR(solve(family::ConvexMNT{2, 2, 0.5}).radius_x, 0.4734658077291262, 1e-14);
  EXPECT_NEAR(solve(family::ConvexMNT{3, 2, 0.25}).radius_x, 0.39813039365804814, 1e-14);
  EXPECT_NEAR(solve(family::ConvexMNT{2, 3, 0.75}).radius_x, 0.6234753829797992, 1e-14);
}

TEST(Solve, ConvexMNTReducesToConvexT) {
  for (double t : {0.0, 0.2, 0.5, 0.75, 0.9}) {
    EXPECT_NEAR(solve(family::ConvexMNT{1, 1, t}).radius_x, solve(family::ConvexT{t}).radius_x, 1e-13) << t;
  }
}

TEST(Solve, ConvexMNTDegenerateAtTOne) {
  // (x - 1)^2 has no sign change in (0, 1)
  try {
    solve(family::ConvexMNT{1, 1, 1.0});
    FAIL() << "expected NoSignChange";
  } catch (const NoSignChange& e) {
    EXPECT_NE(std::string(e.what()).find("boundary"), std::string::npos);
  }
}

TEST(ConvexT, ClosedFormValues) {
  EXPECT_EQ(convex_t_closed_form(0.75), 0.5);
  EXPECT_EQ(convex_t_closed_form(0.0), 1.0 / 3.0);
  EXPECT_NEAR(convex_t_closed_form(0.5), 0.4142135623730951, 1e-15);
  EXPECT_NEAR(std::abs(convex_t_closed_form(0.75 + 1e-6) - 0.5), 0.0, 1e-4);
  EXPECT_NEAR(std::abs(convex_t_closed_form(0.75 - 1e-6) - 0.5), 0.0, 1e-4);
  // agrees with (1 - 2 sqrt(1-t)) / (4t - 3) away from 3/4
  for (double t : {0.1, 0.3, 0.6, 0.9, 1.0}) {
    EXPECT_NEAR(convex_t_closed_form(t), (1 - 2 * std::sqrt(1 - t)) / (4 * t - 3), 1e-14) << t;
  }
  EXPECT_THROW(convex_t_closed_form(1.5), DomainError);
}

TEST(PolyEval, Examples) {
  EXPECT_EQ(poly_eval(family::EulerLambda{1, 0.5}, 0.0), -1.0);
  EXPECT_NEAR(poly_eval(family::RmnN{1, 1, 1}, 1.0 / 3.0), 4.0 / 9.0, 1e-15);
  // cubic branch just below 9/17 is close to zero at 1/3
  EXPECT_NEAR(poly_eval(family::AreaT{1, 9.0 / 17.0 - 1e-12}, 1.0 / 3.0), 0.0, 1e-11);
}

TEST(Bisection, Basics) {
  EXPECT_NEAR(bracketed_bisection([](double x) { return x - 0.5; }, 0.0, 1.0).root, 0.5, 1e-14);
  const auto q = bracketed_bisection([](double x) { return x * x * x * x + x * x * x + 3 * x - 1; }, 0.0,
                                     std::sqrt(2.0) - 1.0);
  EXPECT_NEAR(q.root, 0.3190532542963703, 1e-14);
  EXPECT_LE(q.hi - q.lo, kBisectionTol);
  EXPECT_LE(q.iterations, kBisectionMaxIter);
  EXPECT_THROW(bracketed_bisection([](double x) { return x * x; }, 0.0, 1.0), NoSignChange);
}

TEST(MinPositiveRoot, ReportsLaterRoots) {
  const auto s = min_positive_root([](double x) { return (x - 0.2) * (x - 0.4); }, 1.0);
  EXPECT_NEAR(s.root.root, 0.2, 1e-14);
  EXPECT_EQ(s.later_sign_changes, 1U);
  EXPECT_NE(s.note.find("1 further"), std::string::npos);
  EXPECT_THROW(min_positive_root([](double x) { return x - 0.5; }, 1.0, 100), DomainError);
}

TEST(Validation, RejectsOutOfRange) {
  EXPECT_THROW(solve(family::ConvexT{1.5}), DomainError);
  EXPECT_THROW(solve(family::EulerLambda{1, 0.0}), DomainError);
  EXPECT_THROW(solve(family::Classical{0}), DomainError);
  EXPECT_THROW(solve(family::RogosinskiUni{1, 3}), DomainError);
  EXPECT_THROW(solve(family::RmnN{0, 1, 1}), DomainError);
  EXPECT_THROW(solve(family::AreaT{1, -0.1}), DomainError);
}

TEST(Invariants, ResidualAndBracketSigns) {
  const std::vector<RadiusFamily> fams{
      family::RogosinskiUni{3, 1}, family::RogosinskiUni{4, 2}, family::RmN{3, 5},      family::RmnN{1, 2, 200},
      family::RmnN{5, 3, 7},       family::AN{2, 9},            family::EulerLambda{2, 0.7},
      family::AreaT{3, 0.3},       family::ConvexMNT{2, 2, 0.3}};
  for (const auto& f : fams) {
    const auto r = solve(f);
    EXPECT_LT(r.residual, 1e-12) << family_name(f);
    EXPECT_LT(std::abs(poly_eval(f, r.radius_x)), 1e-12) << family_name(f);
    EXPECT_LT(r.bracket_lo, r.radius_x) << family_name(f);
    EXPECT_LE(r.radius_x, r.bracket_hi);
    // opposite signs (or an exact zero) across the final bracket
    EXPECT_LE(poly_eval(f, r.bracket_lo) * poly_eval(f, r.bracket_hi), 0.0) << family_name(f);
    // below the root the inequality still has room: negative for every family except ConvexMNT,
    // whose polynomial starts at n^{m-1} > 0
    const double at0 = poly_eval(f, 0.0);
    EXPECT_NE(at0, 0.0);
    EXPECT_EQ(at0 > 0.0, std::holds_alternative<family::ConvexMNT>(f)) << family_name(f);
  }
}

TEST(Sweeps, NSweepOneVariable) {
  const std::vector<double> ref{0.23606798, 0.37608589, 0.46235114, 0.52287105, 0.5684664,  0.60443293,
                                0.63373841, 0.65820176, 0.67901163, 0.6969835,  0.71269856, 0.72658402};
  std::vector<unsigned> Ns;
  for (unsigned N = 1; N <= 12; ++N) Ns.push_back(N);
  const auto s = limit_sweep_N(1, 1, Ns);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(s[i].radius_r, ref[i], 1e-8);
    if (i) {
      EXPECT_GT(s[i].radius_r, s[i - 1].radius_r);
    }
  }
}

TEST(Sweeps, NSweepTwoVariables) {
  const std::vector<unsigned> Ns{1, 2, 5, 10, 40, 200};
  const std::vector<double> ref{0.27491722, 0.42944454, 0.62749946, 0.75048235, 0.90446591, 0.97343515};
  const auto s = limit_sweep_N(1, 2, Ns);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(s[i].radius_x, ref[i], 1e-8);
    EXPECT_LT(s[i].radius_r, 0.5);
    if (i) {
      EXPECT_GT(s[i].radius_r, s[i - 1].radius_r);
    }
  }
  const std::vector<unsigned> bad{3, 2};
  EXPECT_THROW(limit_sweep_N(1, 2, bad), DomainError);
}

TEST(Sweeps, MSweepApproachesLimitConstant) {
  const std::vector<unsigned> ms{1, 2, 5, 20, 100};
  const auto s = limit_sweep_m(2, 2, ms);
  const double a2 = solve(family::AN{2, 2}).radius_x;
  double prev_gap = 1.0;
  for (const auto& r : s) {
    const double gap = std::abs(r.radius_x - a2);
    EXPECT_LE(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 1e-12);
  EXPECT_NEAR(solve(family::RmnN{100, 1, 1}).radius_r, 1.0 / 3.0, 1e-12);
}
