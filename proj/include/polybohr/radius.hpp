#ifndef POLYBOHR_RADIUS_HPP
#define POLYBOHR_RADIUS_HPP

// Radius equations, closed forms, and bracketed root finding.
//
// Every polynomial is written in the scaled variable x = n r; univariate
// families use x = r. Results carry both.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "polybohr/errors.hpp"
#include "polybohr/parallel.hpp"

namespace polybohr {

namespace family {
struct Classical {
  std::size_t n = 1;
};
struct RogosinskiUni {
  unsigned N = 1;
  int p = 1;
};
struct RmN {
  unsigned m = 1;
  unsigned N = 1;
};
struct RmnN {
  unsigned m = 1;
  std::size_t n = 1;
  unsigned N = 1;
};
struct AN {
  std::size_t n = 1;
  unsigned N = 1;
};
struct ConvexT {
  double t = 0.0;
};
struct ConvexMNT {
  unsigned m = 1;
  std::size_t n = 1;
  double t = 0.0;
};
struct EulerLambda {
  std::size_t n = 1;
  double lambda = 0.5;
};
struct AreaT {
  std::size_t n = 1;
  double t = 1.0;
};
}  // namespace family

using RadiusFamily = std::variant<family::Classical, family::RogosinskiUni, family::RmN, family::RmnN, family::AN,
                                  family::ConvexT, family::ConvexMNT, family::EulerLambda, family::AreaT>;

/// Threshold separating the cubic branch of the area radius from the constant 1/3.
inline constexpr double kAreaBranchT = 9.0 / 17.0;

struct RadiusResult {
  RadiusFamily family;
  double radius_r = 0.0;
  double radius_x = 0.0;
  double residual = 0.0;
  double bracket_lo = 0.0;  // in x
  double bracket_hi = 0.0;  // in x
  bool closed_form = false;
  std::string note;
};

// --- naming and validation -------------------------------------------------

inline std::string family_name(const RadiusFamily& fam) {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Classical>) return "classical";
        else if constexpr (std::is_same_v<T, family::RogosinskiUni>) return "rogosinski";
        else if constexpr (std::is_same_v<T, family::RmN>) return "rmn";
        else if constexpr (std::is_same_v<T, family::RmnN>) return "rmnn";
        else if constexpr (std::is_same_v<T, family::AN>) return "an";
        else if constexpr (std::is_same_v<T, family::ConvexT>) return "convexT";
        else if constexpr (std::is_same_v<T, family::ConvexMNT>) return "convexMNT";
        else if constexpr (std::is_same_v<T, family::EulerLambda>) return "euler";
        else return "area";
      },
      fam);
}

/// Polydisc dimension n; univariate families report 1.
inline std::size_t dimension_of(const RadiusFamily& fam) {
  return std::visit(
      [](const auto& f) -> std::size_t {
        if constexpr (requires { f.n; }) return f.n;
        else return 1;
      },
      fam);
}

inline void validate(const RadiusFamily& fam) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("radius: ") + what);
  };
  std::visit(
      [&](const auto& f) {
        if constexpr (requires { f.n; }) need(f.n >= 1, "n must be >= 1");
        if constexpr (requires { f.m; }) need(f.m >= 1, "m must be >= 1");
        if constexpr (requires { f.N; }) need(f.N >= 1, "N must be >= 1");
        if constexpr (requires { f.p; }) need(f.p == 1 || f.p == 2, "p must be 1 or 2");
        if constexpr (requires { f.t; }) need(f.t >= 0.0 && f.t <= 1.0, "t must lie in [0, 1]");
        if constexpr (requires { f.lambda; }) need(f.lambda > 0.0 && std::isfinite(f.lambda), "lambda must be > 0");
      },
      fam);
}

// --- polynomials -------------------------------------------------------------

namespace detail {

inline double ipow(double x, unsigned k) {
  double out = 1.0;
  double base = x;
  while (k) {
    if (k & 1U) out *= base;
    base *= base;
    k >>= 1U;
  }
  return out;
}

}  // namespace detail

/// The family's radius equation evaluated at x (x = n r, or r for univariate families).
inline double poly_eval(const RadiusFamily& fam, double x) {
  using detail::ipow;
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Classical>) {
          return 3.0 * x - 1.0;
        } else if constexpr (std::is_same_v<T, family::RogosinskiUni>) {
          const double c = f.p == 1 ? 2.0 : 1.0;
          return c * (1.0 + x) * ipow(x, f.N) - (1.0 - x * x);
        } else if constexpr (std::is_same_v<T, family::RmN>) {
          const double xm = ipow(x, f.m);
          return 2.0 * ipow(x, f.N) * (1.0 + xm) - (1.0 - x) * (1.0 - xm);
        } else if constexpr (std::is_same_v<T, family::RmnN>) {
          const double rm = ipow(x / static_cast<double>(f.n), f.m);
          return 2.0 * ipow(x, f.N) * (1.0 + rm) - (1.0 - x) * (1.0 - rm);
        } else if constexpr (std::is_same_v<T, family::AN>) {
          return 2.0 * ipow(x, f.N) + x - 1.0;
        } else if constexpr (std::is_same_v<T, family::ConvexT>) {
          return ((4.0 * f.t - 3.0) * x - 2.0) * x + 1.0;
        } else if constexpr (std::is_same_v<T, family::ConvexMNT>) {
          const double t = f.t;
          const double c = ipow(static_cast<double>(f.n), f.m - 1);
          const double xm = ipow(x, f.m);
          return ((4.0 * t - 3.0) * x - (2.0 * t - 1.0)) * xm + ((2.0 * t - 3.0) * x + 1.0) * c;
        } else if constexpr (std::is_same_v<T, family::EulerLambda>) {
          const double l = f.lambda;
          if (l <= 0.5) return (((x + 1.0) * x + 0.0) * x + 3.0) * x - 1.0;
          return (((2.0 * l * x + (4.0 * l - 1.0)) * x + (2.0 * l - 1.0)) * x + 3.0) * x - 1.0;
        } else {
          const double t = f.t;
          if (t < kAreaBranchT) return ((t * x + t) * x + (4.0 - 5.0 * t)) * x - t;
          return 3.0 * x - 1.0;
        }
      },
      fam);
}

// --- root finding -------------------------------------------------------------

struct BisectionResult {
  double root = 0.0;  // right end of the final bracket
  double residual = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
};

inline constexpr double kBisectionTol = 1e-14;
inline constexpr int kBisectionMaxIter = 60;

/**
 * Bisection on [lo, hi] with a strict sign change (a zero at an endpoint does
 * not count). Halts when the bracket is no wider than tol, when it spans
 * adjacent doubles, or after 60 halvings. An exact zero at a midpoint ends the
 * search immediately. The root reported is the right end of the bracket.
 */
inline BisectionResult bracketed_bisection(const std::function<double(double)>& g, double lo, double hi,
                                           double tol = kBisectionTol) {
  if (!(lo < hi)) throw DomainError("bisection: need lo < hi");
  double glo = g(lo);
  const double ghi = g(hi);
  if (!(glo < 0.0 && ghi > 0.0) && !(glo > 0.0 && ghi < 0.0)) {
    std::string msg = "bisection: no strict sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    if (glo == 0.0 || ghi == 0.0) msg += " (root at an endpoint)";
    throw NoSignChange(msg);
  }
  int it = 0;
  while (it < kBisectionMaxIter && hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    ++it;
    const double gm = g(mid);
    if (gm == 0.0) return {mid, 0.0, lo, mid, it};
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return {hi, std::abs(g(hi)), lo, hi, it};
}

struct RootScan {
  BisectionResult root;
  std::size_t later_sign_changes = 0;
  std::string note;
};

inline constexpr std::size_t kMinGridPoints = 10000;

/**
 * Smallest root of g in (0, hi): scan a uniform grid of the open interval
 * for the first sign change, then bisect. Later sign changes are counted and
 * reported in the note so the choice of root stays auditable.
 */
inline RootScan min_positive_root(const std::function<double(double)>& g, double hi,
                                  std::size_t grid_points = kMinGridPoints) {
  if (!(hi > 0.0)) throw DomainError("min_positive_root: hi must be > 0");
  if (grid_points < kMinGridPoints) throw DomainError("min_positive_root: grid_points must be >= 10000");
  const double h = hi / static_cast<double>(grid_points + 1);
  auto node = [&](std::size_t i) { return h * static_cast<double>(i); };

  std::optional<BisectionResult> first;
  std::size_t later = 0;
  double prev_x = node(1);
  double prev = g(prev_x);
  std::size_t start = 2;
  if (prev == 0.0) first = BisectionResult{prev_x, 0.0, 0.0, prev_x, 0};
  for (std::size_t i = start; i <= grid_points; ++i) {
    const double x = node(i);
    const double gx = g(x);
    const bool exact = gx == 0.0;
    const bool change = prev != 0.0 && gx != 0.0 && ((prev < 0.0) != (gx < 0.0));
    if (exact || change) {
      if (!first) {
        first = exact ? BisectionResult{x, 0.0, prev_x, x, 0} : bracketed_bisection(g, prev_x, x, 0.0);
      } else {
        ++later;
      }
    }
    if (!exact) {
      prev = gx;
      prev_x = x;
    }
  }
  if (!first) {
    std::string msg = "min_positive_root: no sign change on a " + std::to_string(grid_points) +
                      "-point grid of (0, " + std::to_string(hi) + ")";
    if (g(hi) == 0.0) msg += "; root at boundary x = " + std::to_string(hi);
    throw NoSignChange(msg);
  }
  RootScan out{*first, later, {}};
  out.note = later == 0 ? "no further sign changes in (root, " + std::to_string(hi) + ")"
                        : std::to_string(later) + " further sign change(s) in (root, " + std::to_string(hi) + ")";
  return out;
}

// --- closed forms and solve -----------------------------------------------------

/**
 * Convex-combination radius for one variable. Uses 1/(1 + 2 sqrt(1 - t)),
 * which equals (1 - 2 sqrt(1 - t))/(4t - 3) away from t = 3/4 and has no
 * removable singularity there.
 */
inline double convex_t_closed_form(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("convex_t_closed_form: t must lie in [0, 1]");
  if (std::abs(t - 0.75) < 1e-10) return 0.5;
  if (t == 0.0) return 1.0 / 3.0;
  return 1.0 / (1.0 + 2.0 * std::sqrt(1.0 - t));
}

inline RadiusResult solve(const RadiusFamily& fam) {
  validate(fam);
  const double n = static_cast<double>(dimension_of(fam));
  auto g = [&fam](double x) { return poly_eval(fam, x); };

  RadiusResult out;
  out.family = fam;
  auto closed = [&](double x, double hi, std::string note) {
    out.radius_x = x;
    out.radius_r = x / n;
    out.residual = std::abs(poly_eval(fam, x));
    out.bracket_lo = 0.0;
    out.bracket_hi = hi;
    out.closed_form = true;
    out.note = std::move(note);
  };
  auto bisect = [&](double lo, double hi) {
    const auto b = bracketed_bisection(g, lo, hi, 0.0);
    out.radius_x = b.root;
    out.radius_r = b.root / n;
    out.residual = b.residual;
    out.bracket_lo = b.lo;
    out.bracket_hi = b.hi;
  };

  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Classical>) {
          closed(1.0 / 3.0, 1.0, "closed form x = 1/3");
          out.radius_r = 1.0 / (3.0 * n);
        } else if constexpr (std::is_same_v<T, family::ConvexT>) {
          closed(convex_t_closed_form(f.t), 1.0, "closed form 1/(1 + 2 sqrt(1 - t))");
        } else if constexpr (std::is_same_v<T, family::AreaT>) {
          if (f.t >= kAreaBranchT) {
            closed(1.0 / 3.0, 1.0, "t >= 9/17 branch: x = 1/3");
          } else {
            bisect(0.0, 1.0 / 3.0);
          }
        } else if constexpr (std::is_same_v<T, family::EulerLambda>) {
          bisect(0.0, std::sqrt(2.0) - 1.0);
        } else if constexpr (std::is_same_v<T, family::ConvexMNT>) {
          const auto scan = min_positive_root(g, 1.0);
          out.radius_x = scan.root.root;
          out.radius_r = scan.root.root / n;
          out.residual = scan.root.residual;
          out.bracket_lo = scan.root.lo;
          out.bracket_hi = scan.root.hi;
          out.note = scan.note;
        } else {
          bisect(0.0, 1.0);
        }
      },
      fam);
  return out;
}

/// Solves RmnN{m, n, N} for each N in ascending order.
inline std::vector<RadiusResult> limit_sweep_N(unsigned m, std::size_t n, std::span<const unsigned> N_list) {
  for (std::size_t i = 1; i < N_list.size(); ++i) {
    if (!(N_list[i - 1] < N_list[i])) throw DomainError("limit_sweep_N: N_list must be strictly ascending");
  }
  std::vector<RadiusResult> out(N_list.size());
  parallel_for(N_list.size(), [&](std::size_t i) { out[i] = solve(family::RmnN{m, n, N_list[i]}); });
  return out;
}

/// Solves RmnN{m, n, N} for each m; compare against solve(AN{n, N}).
inline std::vector<RadiusResult> limit_sweep_m(std::size_t n, unsigned N, std::span<const unsigned> m_list) {
  std::vector<RadiusResult> out(m_list.size());
  parallel_for(m_list.size(), [&](std::size_t i) { out[i] = solve(family::RmnN{m_list[i], n, N}); });
  return out;
}

}  // namespace polybohr

#endif  // POLYBOHR_RADIUS_HPP
