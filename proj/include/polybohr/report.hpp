#ifndef POLYBOHR_REPORT_HPP
#define POLYBOHR_REPORT_HPP

#include <string_view>

namespace polybohr {

enum class Verdict { Holds, Violated, Inconclusive };

/// How |f(w)| (or |Df(w)|) entered a functional value.
enum class EvalPath { None, ClosedForm, Series };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "HOLDS";
    case Verdict::Violated: return "VIOLATED";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

inline std::string_view to_string(EvalPath p) {
  switch (p) {
    case EvalPath::None: return "none";
    case EvalPath::ClosedForm: return "closed_form";
    case EvalPath::Series: return "series";
  }
  return "?";
}

/**
 * A functional value with a rigorous truncation bound.
 *
 * The true value lies in [value - lower_slack, value + tail_bound]. Majorant
 * partial sums only undershoot, so lower_slack is zero unless a modulus was
 * obtained from a truncated series evaluation.
 *
 *   HOLDS         value + tail_bound <= threshold
 *   VIOLATED      value - lower_slack > threshold
 *   INCONCLUSIVE  anything else
 */
struct EvalReport {
  double value = 0.0;
  double tail_bound = 0.0;
  double lower_slack = 0.0;
  double threshold = 1.0;
  Verdict verdict = Verdict::Holds;
  EvalPath path = EvalPath::None;

  /// threshold - (value + tail_bound); nonnegative exactly when HOLDS.
  double slack() const { return threshold - (value + tail_bound); }
};

inline Verdict classify(double value, double tail_bound, double lower_slack, double threshold) {
  if (value + tail_bound <= threshold) return Verdict::Holds;
  if (value - lower_slack > threshold) return Verdict::Violated;
  return Verdict::Inconclusive;
}

inline EvalReport make_report(double value, double tail_bound, double threshold = 1.0,
                              double lower_slack = 0.0, EvalPath path = EvalPath::None) {
  EvalReport r;
  r.value = value;
  r.tail_bound = tail_bound;
  r.lower_slack = lower_slack;
  r.threshold = threshold;
  r.path = path;
  r.verdict = classify(value, tail_bound, lower_slack, threshold);
  return r;
}

}  // namespace polybohr

#endif  // POLYBOHR_REPORT_HPP
