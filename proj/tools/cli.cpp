#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polybohr/polybohr.hpp"

namespace polybohr::cli {

using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_json_impl(std::ostream& out, const ordered_json& j, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? format_double(v) : "null");
      return;
    }
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{' << nl;
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad << ordered_json(key).dump() << (indent > 0 ? ": " : ":");
        write_json_impl(out, value, indent, level + 1);
      }
      out << nl << close_pad << '}';
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::none_of(j.begin(), j.end(), [](const auto& e) { return e.is_structured(); });
      out << '[' << (flat ? "" : nl);
      bool first = true;
      for (const auto& e : j) {
        if (!first) out << ',' << (flat ? " " : nl);
        first = false;
        if (!flat) out << pad;
        write_json_impl(out, e, indent, level + 1);
      }
      if (!flat) out << nl << close_pad;
      out << ']';
      return;
    }
    default:
      out << j.dump();
  }
}

std::string csv_field(const ordered_json& v) {
  if (v.is_number_float()) {
    const double d = v.get<double>();
    return std::isfinite(d) ? format_double(d) : "";
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }
  if (v.is_null()) return "";
  return v.dump();
}

void write_csv(std::ostream& out, const std::vector<std::string>& columns, const ordered_json& rows) {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_field(row.at(columns[i]));
    out << '\n';
  }
}

// --- family arguments ----------------------------------------------------------

struct FamilyArgs {
  std::string family;
  long long n = 1;
  long long m = 1;
  long long N = 1;
  long long p = 1;
  std::optional<double> t;
  std::optional<double> lambda;
};

const std::vector<std::string> kFamilies{"classical", "rogosinski", "rmn",       "rmnn", "an",
                                         "convexT",   "convexMNT",  "euler", "area"};

void add_family_options(CLI::App* sub, FamilyArgs& a) {
  sub->add_option("--family", a.family, "Radius family")->required()->check(CLI::IsMember(kFamilies));
  sub->add_option("--n", a.n, "Number of variables (default 1)");
  sub->add_option("--m", a.m, "Vanishing order of the Schwarz map (default 1)");
  sub->add_option("--N", a.N, "Rogosinski tail start N (default 1)");
  sub->add_option("--p", a.p, "Power on the modulus term, 1 or 2 (default 1)");
  sub->add_option("--t", a.t, "Convex/area weight t in [0, 1]");
  sub->add_option("--lambda", a.lambda, "Euler weight lambda > 0");
}

unsigned as_unsigned(long long v, const char* name) {
  if (v < 1 || v > 1'000'000) throw DomainError(std::string("--") + name + " must be a positive integer");
  return static_cast<unsigned>(v);
}

double need(const std::optional<double>& v, const char* name, const std::string& family) {
  if (!v) throw DomainError(std::string("--") + name + " is required for family " + family);
  return *v;
}

RadiusFamily build_family(const FamilyArgs& a) {
  const std::size_t n = as_unsigned(a.n, "n");
  const unsigned m = as_unsigned(a.m, "m");
  const unsigned N = as_unsigned(a.N, "N");
  RadiusFamily fam;
  if (a.family == "classical") fam = family::Classical{n};
  else if (a.family == "rogosinski") fam = family::RogosinskiUni{N, static_cast<int>(std::clamp<long long>(a.p, -1, 3))};
  else if (a.family == "rmn") fam = family::RmN{m, N};
  else if (a.family == "rmnn") fam = family::RmnN{m, n, N};
  else if (a.family == "an") fam = family::AN{n, N};
  else if (a.family == "convexT") fam = family::ConvexT{need(a.t, "t", a.family)};
  else if (a.family == "convexMNT") fam = family::ConvexMNT{m, n, need(a.t, "t", a.family)};
  else if (a.family == "euler") fam = family::EulerLambda{n, need(a.lambda, "lambda", a.family)};
  else if (a.family == "area") fam = family::AreaT{n, need(a.t, "t", a.family)};
  else throw DomainError("unknown family " + a.family);
  validate(fam);
  return fam;
}

ordered_json family_json(const RadiusFamily& fam) {
  ordered_json j;
  j["family"] = family_name(fam);
  std::visit(
      [&](const auto& f) {
        if constexpr (requires { f.m; }) j["m"] = f.m;
        if constexpr (requires { f.n; }) j["n"] = f.n;
        if constexpr (requires { f.N; }) j["N"] = f.N;
        if constexpr (requires { f.p; }) j["p"] = f.p;
        if constexpr (requires { f.t; }) j["t"] = f.t;
        if constexpr (requires { f.lambda; }) j["lambda"] = f.lambda;
      },
      fam);
  return j;
}

ordered_json radius_json(const RadiusResult& r) {
  ordered_json j = family_json(r.family);
  j["radius_r"] = r.radius_r;
  j["radius_x"] = r.radius_x;
  j["residual"] = r.residual;
  j["bracket"] = ordered_json::array({r.bracket_lo, r.bracket_hi});
  j["closed_form"] = r.closed_form;
  j["multiplicity_note"] = r.note;
  return j;
}

ordered_json case_json(const CaseResult& c) {
  ordered_json j;
  j["index"] = c.index;
  j["seed"] = c.seed;
  j["dim"] = c.dim;
  j["r"] = c.r;
  j["K"] = c.K;
  j["check"] = c.check;
  j["verdict"] = std::string(to_string(c.report.verdict));
  j["value"] = c.report.value;
  j["tail_bound"] = c.report.tail_bound;
  j["slack"] = c.report.slack();
  j["path"] = std::string(to_string(c.report.path));
  if (c.witness_a) j["witness_a"] = *c.witness_a;
  if (!c.a_values.empty()) {
    ordered_json av = ordered_json::array();
    for (const auto& [a, v] : c.a_values) av.push_back(ordered_json{{"a", a}, {"value", v}});
    j["a_values"] = av;
  }
  return j;
}

ordered_json suite_json(const SuiteReport& rep, bool all_cases) {
  ordered_json j;
  j["suite"] = rep.suite;
  j["passed"] = rep.passed;
  j["total"] = rep.total();
  j["holds"] = rep.holds;
  j["violated"] = rep.violated;
  j["inconclusive"] = rep.inconclusive;
  j["worst_slack"] = rep.worst_slack;
  j["failing_seeds"] = rep.failing_seeds;
  ordered_json cases = ordered_json::array();
  for (const auto& c : rep.cases) {
    const bool failing = std::find(rep.failing_seeds.begin(), rep.failing_seeds.end(), c.seed) != rep.failing_seeds.end();
    if (all_cases || failing) cases.push_back(case_json(c));
  }
  j["cases"] = cases;
  return j;
}

void emit(std::ostream& out, const std::string& command, const std::vector<std::string>& args, ordered_json payload) {
  ordered_json rec;
  rec["schema_version"] = kSchemaVersion;
  rec["command"] = command;
  rec["arguments"] = args;
  rec["payload"] = std::move(payload);
  write_json(out, rec);
  out << '\n';
}

// --- tables ---------------------------------------------------------------------

struct Table {
  std::vector<std::string> columns;
  ordered_json rows = ordered_json::array();
};

Table make_table(const std::string& name, long long n_arg, long long m_arg, long long N_arg) {
  Table tab;
  const std::size_t n = as_unsigned(n_arg, "n");
  const unsigned m = as_unsigned(m_arg, "m");
  const unsigned N = as_unsigned(N_arg, "N");
  if (name == "thmC-limits") {
    tab.columns = {"N", "A_N", "residual"};
    for (unsigned k = 1; k <= 10; ++k) {
      const auto r = solve(family::AN{1, k});
      tab.rows.push_back({{"N", k}, {"A_N", r.radius_x}, {"residual", r.residual}});
    }
  } else if (name == "thm2.2-sweepN") {
    tab.columns = {"m", "n", "N", "radius_r", "radius_x", "residual"};
    const std::vector<unsigned> Ns{1, 2, 3, 5, 10, 20, 40, 100, 200};
    for (const auto& r : limit_sweep_N(m, n, Ns)) {
      const auto& f = std::get<family::RmnN>(r.family);
      tab.rows.push_back({{"m", f.m}, {"n", f.n}, {"N", f.N}, {"radius_r", r.radius_r}, {"radius_x", r.radius_x},
                          {"residual", r.residual}});
    }
  } else if (name == "thm2.2-sweepM") {
    tab.columns = {"m", "n", "N", "radius_r", "radius_x", "A_N", "residual"};
    const std::vector<unsigned> ms{1, 2, 5, 20, 100};
    const double a_n = solve(family::AN{n, N}).radius_x;
    for (const auto& r : limit_sweep_m(n, N, ms)) {
      const auto& f = std::get<family::RmnN>(r.family);
      tab.rows.push_back({{"m", f.m}, {"n", f.n}, {"N", f.N}, {"radius_r", r.radius_r}, {"radius_x", r.radius_x},
                          {"A_N", a_n}, {"residual", r.residual}});
    }
  } else if (name == "thmF-piecewise") {
    tab.columns = {"n", "t", "branch", "radius_r", "radius_x", "residual"};
    std::vector<double> ts{0.1, 0.2, 0.3, 0.4, 0.5, kAreaBranchT, 0.6, 0.7, 0.8, 0.9, 1.0};
    for (double t : ts) {
      const auto r = solve(family::AreaT{n, t});
      tab.rows.push_back({{"n", n}, {"t", t}, {"branch", t < kAreaBranchT ? "cubic" : "constant"},
                          {"radius_r", r.radius_r}, {"radius_x", r.radius_x}, {"residual", r.residual}});
    }
  } else if (name == "thm2.3-grid") {
    tab.columns = {"m", "n", "t", "radius_r", "radius_x", "residual", "note"};
    for (unsigned mm = 1; mm <= 3; ++mm)
      for (std::size_t nn = 1; nn <= 3; ++nn)
        for (double t : {0.0, 0.25, 0.5, 0.75}) {
          const auto r = solve(family::ConvexMNT{mm, nn, t});
          tab.rows.push_back({{"m", mm}, {"n", nn}, {"t", t}, {"radius_r", r.radius_r}, {"radius_x", r.radius_x},
                              {"residual", r.residual}, {"note", r.note}});
        }
  } else {
    throw DomainError("unknown table " + name);
  }
  return tab;
}

const std::vector<std::string> kTables{"thmC-limits", "thm2.2-sweepN", "thm2.2-sweepM", "thmF-piecewise",
                                       "thm2.3-grid"};

const char* kTableHelp =
    "Tables (CSV columns):\n"
    "  thmC-limits     N,A_N,residual             limit constants A_N, N = 1..10\n"
    "  thm2.2-sweepN   m,n,N,radius_r,radius_x,residual   R_{m,n,N} over N\n"
    "  thm2.2-sweepM   m,n,N,radius_r,radius_x,A_N,residual   R_{m,n,N} over m vs A_N\n"
    "  thmF-piecewise  n,t,branch,radius_r,radius_x,residual   area radius over t\n"
    "  thm2.3-grid     m,n,t,radius_r,radius_x,residual,note   convex-combination radii\n";

}  // namespace

void write_json(std::ostream& out, const ordered_json& j, int indent) { write_json_impl(out, j, indent, 0); }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bohr-type radii on the polydisc: solvers, verification suites and series expansions", "polybohr"};
  app.require_subcommand(1);

  FamilyArgs radius_args;
  auto* radius = app.add_subcommand("radius", "Solve the radius equation of a family");
  add_family_options(radius, radius_args);

  std::string table_name;
  std::string table_format = "csv";
  long long table_n = 2, table_m = 1, table_N = 1;
  auto* table = app.add_subcommand("table", "Emit a reproduction table");
  table->add_option("name", table_name, "Table name")->required()->check(CLI::IsMember(kTables));
  table->add_option("--format", table_format, "csv (default) or json")->check(CLI::IsMember({"csv", "json"}));
  table->add_option("--n", table_n, "Dimension for sweeps (default 2)");
  table->add_option("--m", table_m, "Schwarz order for sweepN (default 1)");
  table->add_option("--N", table_N, "Tail start for sweepM (default 1)");
  table->footer(kTableHelp);

  FamilyArgs verify_args;
  std::size_t samples = 200;
  std::uint64_t seed = 7;
  std::vector<std::size_t> dims;
  bool sharpness_flag = false;
  bool all_cases = false;
  double margin_below = 0.99;
  double margin_above = 0.02;
  std::vector<double> a_schedule{0.9, 0.99, 0.999};
  auto add_verify_options = [&](CLI::App* sub) {
    add_family_options(sub, verify_args);
    sub->add_option("--samples", samples, "Sampled functions per dimension (default 200)");
    sub->add_option("--seed", seed, "Master seed (default 7)");
    sub->add_option("--dims", dims, "Dimensions to run (default: the family's n)");
    sub->add_option("--margin-below", margin_below, "Hold-below radius fraction (default 0.99)");
    sub->add_option("--margin-above", margin_above, "Sharpness offset above the radius (default 0.02)");
    sub->add_option("--a-schedule", a_schedule, "Extremal parameters a (default 0.9 0.99 0.999)");
    sub->add_flag("--all-cases", all_cases, "Include every case, not only failures");
  };
  auto* verify = app.add_subcommand("verify", "Run the hold-below suite, or the sharpness suite with --sharpness");
  add_verify_options(verify);
  verify->add_flag("--sharpness", sharpness_flag, "Demonstrate sharpness above the radius");
  auto* sharp = app.add_subcommand("sharpness", "Same as verify --sharpness");
  add_verify_options(sharp);

  std::string expand_family;
  double expand_a = 0.5;
  long long expand_n = 1, expand_K = 4, expand_factors = 2;
  std::uint64_t expand_seed = 1;
  auto* expand = app.add_subcommand("expand", "List the coefficients of a truncated series");
  expand->add_option("--family", expand_family, "extremal or blaschke-sample")
      ->required()
      ->check(CLI::IsMember({"extremal", "blaschke-sample"}));
  expand->add_option("--a", expand_a, "Extremal parameter a in [0, 1) (default 0.5)");
  expand->add_option("--n", expand_n, "Number of variables (default 1)");
  expand->add_option("--K", expand_K, "Truncation degree (default 4)");
  expand->add_option("--seed", expand_seed, "Sample seed (default 1)");
  expand->add_option("--factors", expand_factors, "Blaschke factors per coordinate (default 2)");

  long long lim_n = 1, lim_m = 1, lim_N = 1;
  auto* limits = app.add_subcommand("limits", "Radius sweeps in N and m next to the limit constant A_N");
  limits->add_option("--n", lim_n, "Number of variables (default 1)");
  limits->add_option("--m", lim_m, "Schwarz order for the N sweep (default 1)");
  limits->add_option("--N", lim_N, "Tail start for the m sweep (default 1)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    // help text for the subcommand that failed, if any
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return kUsage;
  }

  try {
    if (radius->parsed()) {
      const auto fam = build_family(radius_args);
      emit(out, "radius", args, radius_json(solve(fam)));
      return kOk;
    }
    if (table->parsed()) {
      const Table tab = make_table(table_name, table_n, table_m, table_N);
      if (table_format == "csv") {
        write_csv(out, tab.columns, tab.rows);
      } else {
        emit(out, "table", args, ordered_json{{"table", table_name}, {"columns", tab.columns}, {"rows", tab.rows}});
      }
      return kOk;
    }
    if (verify->parsed() || sharp->parsed()) {
      const bool sharpness = sharpness_flag || sharp->parsed();
      SuiteConfig config;
      config.family = build_family(verify_args);
      config.samples = samples;
      config.seed = seed;
      config.dims = dims;
      config.margin_below = margin_below;
      config.margin_above = margin_above;
      config.a_schedule = a_schedule;
      if (samples == 0) throw DomainError("--samples must be >= 1");
      const SuiteReport rep = sharpness ? check_sharpness_above(config) : check_holds_below(config);
      ordered_json payload = family_json(config.family);
      payload["mode"] = sharpness ? "sharpness" : "holds_below";
      payload["samples"] = samples;
      payload["seed"] = seed;
      payload["margin_below"] = margin_below;
      payload["margin_above"] = margin_above;
      payload["a_schedule"] = a_schedule;
      payload["report"] = suite_json(rep, all_cases || sharpness);
      emit(out, sharpness ? "sharpness" : "verify", args, std::move(payload));
      if (!rep.passed) {
        err << "verification failed; failing seeds:";
        for (auto s : rep.failing_seeds) err << ' ' << s;
        err << '\n';
        return kVerificationFailed;
      }
      return kOk;
    }
    if (expand->parsed()) {
      const std::size_t n = as_unsigned(expand_n, "n");
      if (expand_K < 0 || expand_K > 1'000'000) throw DomainError("--K must be a non-negative integer");
      const auto K = static_cast<unsigned>(expand_K);
      ordered_json payload;
      payload["family"] = expand_family;
      payload["n"] = n;
      payload["K"] = K;
      TruncatedSeries f(n, K);
      if (expand_family == "extremal") {
        payload["a"] = expand_a;
        f = extremal_series(ExtremalSpec(expand_a, n), K);
      } else {
        const std::size_t fpc = static_cast<std::size_t>(std::max<long long>(0, expand_factors));
        if (expand_factors < 0) throw DomainError("--factors must be >= 0");
        payload["seed"] = expand_seed;
        payload["factors_per_coordinate"] = fpc;
        const auto spec = sample_product_spec(expand_seed, n, fpc);
        ordered_json zeros = ordered_json::array();
        for (const auto& fi : spec.factors) {
          ordered_json row = ordered_json::array();
          for (const auto& b : fi) row.push_back(ordered_json::array({b.w().real(), b.w().imag()}));
          zeros.push_back(row);
        }
        payload["phase"] = spec.phase;
        payload["zeros"] = zeros;
        f = spec.series(K);
      }
      ordered_json coeffs = ordered_json::array();
      for (const auto& [alpha, c] : f.coeffs()) {
        std::vector<unsigned> e(alpha.exponents().begin(), alpha.exponents().end());
        coeffs.push_back(ordered_json{{"index", e}, {"re", c.real()}, {"im", c.imag()}});
      }
      payload["coefficients"] = coeffs;
      if (f.tail()) {
        payload["tail"] = ordered_json{{"scale", f.tail()->scale},
                                       {"ratio", f.tail()->ratio},
                                       {"valid_from_degree", f.tail()->valid_from_degree},
                                       {"degree_power", f.tail()->degree_power}};
      } else {
        payload["tail"] = nullptr;
      }
      emit(out, "expand", args, std::move(payload));
      return kOk;
    }
    if (limits->parsed()) {
      const std::size_t n = as_unsigned(lim_n, "n");
      const unsigned m = as_unsigned(lim_m, "m");
      const unsigned N = as_unsigned(lim_N, "N");
      const std::vector<unsigned> Ns{1, 2, 3, 5, 10, 20, 40, 100, 200};
      const std::vector<unsigned> ms{1, 2, 5, 20, 100};
      ordered_json sweep_n = ordered_json::array();
      for (const auto& r : limit_sweep_N(m, n, Ns)) sweep_n.push_back(radius_json(r));
      ordered_json sweep_m = ordered_json::array();
      for (const auto& r : limit_sweep_m(n, N, ms)) sweep_m.push_back(radius_json(r));
      ordered_json payload;
      payload["n"] = n;
      payload["m"] = m;
      payload["N"] = N;
      payload["sweepN"] = sweep_n;
      payload["sweepM"] = sweep_m;
      payload["A_N"] = radius_json(solve(family::AN{n, N}));
      emit(out, "limits", args, std::move(payload));
      return kOk;
    }
  } catch (const NoSignChange& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const DivergentTail& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace polybohr::cli
