#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stable_extrema/density.hpp"
#include "stable_extrema/mc_oracle.hpp"
#include "stable_extrema/mellin.hpp"
#include "stable_extrema/parallel.hpp"
#include "stable_extrema/verify.hpp"
#include "stable_extrema/wiener_hopf.hpp"

#ifndef STABLE_EXTREMA_VERSION
#define STABLE_EXTREMA_VERSION "0.0.0"
#endif

using namespace stable_extrema;
using nlohmann::ordered_json;

namespace {

// Bad flags or parameters; exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::string alpha, rho, beta;
  std::string grid;
  std::vector<double> points;  // --z / --s / --x
  std::string method = "auto";
  std::string quantity = "pdf";
  std::vector<std::string> suites;
  double tol = 1e-8;
  double imag = 0.0;
  std::uint64_t seed = 1;
  long paths = 10000, steps = 1024;
  std::string format = "csv";
  std::string output;
};

double parse_number(const std::string& text, const char* what) {
  auto one = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size() || !std::isfinite(v)) throw ConfigError(std::string("cannot parse ") + what + " '" + text + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return one(text);
  return one(text.substr(0, slash)) / one(text.substr(slash + 1));
}

// "3/2" gives an exact rational alpha, anything else a floating alpha.
Parameters build_params(const Options& o) {
  if (o.alpha.empty()) throw ConfigError("--alpha is required");
  if (o.rho.empty() == o.beta.empty()) throw ConfigError("give exactly one of --rho and --beta");
  try {
    const auto slash = o.alpha.find('/');
    std::optional<RationalAlpha> ra;
    double a = 0.0;
    if (slash != std::string::npos) {
      const double m = parse_number(o.alpha.substr(0, slash), "alpha"), n = parse_number(o.alpha.substr(slash + 1), "alpha");
      if (m != std::floor(m) || n != std::floor(n)) throw ConfigError("fractional alpha needs integer numerator and denominator");
      ra = RationalAlpha::make(static_cast<long>(m), static_cast<long>(n));
      a = ra->value;
    } else {
      a = parse_number(o.alpha, "alpha");
    }
    const double rho = o.rho.empty() ? rho_from_beta(a, parse_number(o.beta, "beta")) : parse_number(o.rho, "rho");
    return ra ? make_params(*ra, rho) : make_params(a, rho);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

std::vector<double> build_grid(const Options& o) {
  if (!o.points.empty()) {
    if (!o.grid.empty()) throw ConfigError("give either a grid or explicit points, not both");
    return o.points;
  }
  if (o.grid.empty()) throw ConfigError("no evaluation points: use --grid or explicit values");
  std::vector<std::string> f;
  std::stringstream ss(o.grid);
  for (std::string t; std::getline(ss, t, ':');) f.push_back(t);
  if (f.size() < 3 || f.size() > 4) throw ConfigError("grid must be start:stop:count[:lin|log]");
  const double a = parse_number(f[0], "grid start"), b = parse_number(f[1], "grid stop"), c = parse_number(f[2], "grid count");
  const std::string kind = f.size() == 4 ? f[3] : "lin";
  if (c < 1 || c != std::floor(c) || c > 1e7) throw ConfigError("grid count must be a positive integer");
  if (kind != "lin" && kind != "log") throw ConfigError("grid spacing must be lin or log");
  if (kind == "log" && !(a > 0 && b > 0)) throw ConfigError("log grid needs positive end points");
  const long n = static_cast<long>(c);
  std::vector<double> xs(n);
  for (long i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    xs[i] = kind == "log" ? a * std::pow(b / a, t) : a + (b - a) * t;
  }
  if (n > 1) xs[n - 1] = b;
  return xs;
}

// One output table. Cells are numbers, strings or booleans.
using Cell = std::variant<double, std::string, bool, long>;
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string csv_cell(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const long* l = std::get_if<long>(&c)) return std::to_string(*l);
  if (const bool* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string render(const Table& t, const Options& o, const ordered_json& meta) {
  if (o.format == "csv") {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
      out += "\n";
    }
    return out;
  }
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json r = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) std::visit([&](const auto& v) { r[t.columns[i]] = v; }, row[i]);
    rows.push_back(std::move(r));
  }
  ordered_json doc;
  doc["meta"] = meta;
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

ordered_json meta_for(const Options& o, const std::optional<Parameters>& p) {
  ordered_json m;
  m["command"] = o.command;
  if (p) {
    m["alpha"] = o.alpha;
    m["alpha_value"] = p->alpha();
    m["alpha_exact"] = p->rational_alpha().has_value();
    m["rho"] = p->rho();
    m["beta"] = p->beta();
  }
  if (!o.grid.empty()) m["grid"] = o.grid;
  m["method"] = o.method;
  m["tol"] = o.tol;
  m["seed"] = o.seed;
  m["format"] = o.format;
  m["version"] = STABLE_EXTREMA_VERSION;
  return m;
}

// Rows that failed to evaluate hold NaN and the error text as method.
struct Evaluated {
  EvalResult r;
  std::string error;
};

template <class F>
std::vector<Evaluated> evaluate_all(const std::vector<double>& xs, F&& f) {
  std::vector<Evaluated> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    try {
      out[i].r = f(xs[i]);
    } catch (const std::exception& e) {
      out[i].r.value = cplx(NAN, NAN);
      out[i].r.abs_err = NAN;
      out[i].error = e.what();
    }
  });
  return out;
}

int report_errors(const std::vector<double>& xs, const std::vector<Evaluated>& ev, const char* var) {
  int bad = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (ev[i].error.empty()) continue;
    std::cerr << "error at " << var << "=" << xs[i] << ": " << ev[i].error << "\n";
    ++bad;
  }
  return bad;
}

Table complex_table(const char* var, const std::vector<double>& xs, const std::vector<Evaluated>& ev) {
  Table t{{var, "re", "im", "err_est", "method"}, {}};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& r = ev[i].r;
    t.rows.push_back({xs[i], r.value.real(), r.value.imag(), r.abs_err, ev[i].error.empty() ? r.method : "error"});
  }
  return t;
}

int run_phi(const Options& o, Table& t, ordered_json& meta) {
  const auto p = build_params(o);
  meta = meta_for(o, p);
  PhiMethod m;
  try {
    m = phi_method_from_string(o.method);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const auto xs = build_grid(o);
  const auto ev = evaluate_all(xs, [&](double z) { return phi(p, cplx(z, o.imag), m); });
  t = complex_table("z", xs, ev);
  return report_errors(xs, ev, "z") ? 1 : 0;
}

int run_mellin(const Options& o, Table& t, ordered_json& meta) {
  const auto p = build_params(o);
  meta = meta_for(o, p);
  meta["imag"] = o.imag;
  const auto ckl = detect_ckl(p);
  std::function<EvalResult(cplx)> f;
  if (o.method == "auto") {
    f = [&](cplx s) { return mellin(p, s); };
  } else if (o.method == "double-gamma") {
    f = [&](cplx s) { return mellin_double_gamma(p.alpha(), p.rho(), s); };
  } else if (o.method == "ckl-product") {
    if (!ckl) throw ConfigError("no C_{k,l} certificate for these parameters");
    f = [&](cplx s) { return mellin_ckl(p, *ckl, s); };
  } else {
    throw ConfigError("mellin methods: auto, double-gamma, ckl-product");
  }
  const auto xs = build_grid(o);
  const auto ev = evaluate_all(xs, [&](double s) { return f(cplx(s, o.imag)); });
  t = complex_table("s", xs, ev);
  return report_errors(xs, ev, "s") ? 1 : 0;
}

int run_density(const Options& o, Table& t, ordered_json& meta) {
  const auto p = build_params(o);
  meta = meta_for(o, p);
  meta["quantity"] = o.quantity;
  if (o.quantity != "pdf" && o.quantity != "cdf") throw ConfigError("--quantity must be pdf or cdf");
  const bool is_cdf = o.quantity == "cdf";
  const auto ckl = detect_ckl(p);
  std::function<EvalResult(double)> f;
  if (o.method == "auto") {
    f = [&](double x) { return is_cdf ? cdf(p, x, o.tol) : pdf(p, x, o.tol); };
  } else if (o.method == "series") {
    if (!ckl) throw ConfigError("series needs a C_{k,l} certificate");
    f = [&](double x) { return is_cdf ? cdf_ckl_series(p, *ckl, x) : pdf_ckl_series(p, *ckl, x); };
  } else if (o.method == "inversion") {
    f = [&](double x) { return is_cdf ? cdf_mellin_inversion(p, x, o.tol) : pdf_mellin_inversion(p, x, o.tol); };
  } else if (!is_cdf && o.method == "asymptotic-small") {
    f = [&](double x) { return pdf_asymptotic_small_x(p, x); };
  } else if (!is_cdf && o.method == "asymptotic-large") {
    f = [&](double x) { return pdf_asymptotic_large_x(p, x); };
  } else {
    throw ConfigError("density methods: auto, series, inversion, asymptotic-small, asymptotic-large (pdf only)");
  }
  const auto xs = build_grid(o);
  for (double x : xs) {
    if (!(x >= 0.0)) throw ConfigError("density grid must be nonnegative");
  }
  const auto ev = evaluate_all(xs, f);
  t = Table{{"x", o.quantity, "err_est", "method"}, {}};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    t.rows.push_back({xs[i], ev[i].r.value.real(), ev[i].r.abs_err, ev[i].error.empty() ? ev[i].r.method : "error"});
  }
  return report_errors(xs, ev, "x") ? 1 : 0;
}

const std::vector<std::string> kSuites = {"phi-methods", "functional-equations", "quasi-periodicity", "f-identities", "mellin-anchors",
                                          "residues",    "decay",                "density",           "brownian-density", "monte-carlo"};

// Suites run on the given parameters when there are any, otherwise on a
// standard set.
std::vector<SuiteReport> run_suite(const std::string& name, const std::optional<Parameters>& p, const Options& o) {
  const double s2 = std::sqrt(2.0);
  const std::vector<double> zs = {0.3, 0.7, 1.0, 2.0};
  auto defaults = [&](std::initializer_list<Parameters> ps) { return p ? std::vector<Parameters>{*p} : std::vector<Parameters>(ps); };
  auto rat = [](long m, long n, double rho) { return make_params(RationalAlpha::make(m, n), rho); };
  std::vector<SuiteReport> out;
  if (name == "phi-methods") {
    for (const auto& q : defaults({rat(3, 2, 2.0 / 3.0), rat(3, 2, 1.0 / 3.0), rat(3, 2, 0.55), rat(4, 5, 0.5), make_params(s2, 0.45)})) {
      out.push_back(verify_phi_methods(q, zs));
    }
  } else if (name == "functional-equations") {
    out.push_back(p ? verify_functional_equations(*p, {0.2, 0.7, 1.6, 4.5}) : verify_functional_equations_random(100, o.seed));
  } else if (name == "quasi-periodicity") {
    for (const auto& q : defaults({make_params(1.5, 0.55), make_params(0.8, 0.3), make_params(s2, 0.45)})) out.push_back(verify_quasi_periodicity(q));
  } else if (name == "f-identities") {
    out.push_back(verify_f_identities(o.seed));
  } else if (name == "mellin-anchors") {
    out.push_back(verify_mellin_anchors(p));
  } else if (name == "residues") {
    for (const auto& q : defaults({make_params(s2, 0.45), rat(3, 2, 1.0 / 3.0)})) out.push_back(verify_residues(q));
  } else if (name == "decay") {
    for (const auto& q : defaults({make_params(1.5, 0.5), make_params(2.0, 0.5), make_params(s2, 0.45)})) out.push_back(verify_decay(q));
  } else if (name == "density") {
    for (const auto& q : defaults({rat(3, 2, 2.0 / 3.0), rat(3, 2, 1.0 / 3.0)})) {
      const auto c = detect_ckl(q);
      if (!c) throw ConfigError("density suite needs a C_{k,l} certificate");
      out.push_back(verify_density(q, *c));
    }
  } else if (name == "brownian-density") {
    out.push_back(verify_brownian_density());
  } else if (name == "monte-carlo") {
    out.push_back(verify_monte_carlo({o.paths, o.steps, o.seed, 0.02}));
  } else {
    throw ConfigError("unknown suite '" + name + "'");
  }
  return out;
}

int run_verify(const Options& o, Table& t, ordered_json& meta) {
  std::optional<Parameters> p;
  if (!o.alpha.empty() || !o.rho.empty() || !o.beta.empty()) p = build_params(o);
  meta = meta_for(o, p);
  std::vector<std::string> names = o.suites;
  if (names.empty()) throw ConfigError("--suite is required");
  if (names.size() == 1 && names[0] == "all") {
    names = kSuites;
    names.pop_back();  // monte-carlo only on request
  }
  for (const auto& n : names) {
    if (std::find(kSuites.begin(), kSuites.end(), n) == kSuites.end()) throw ConfigError("unknown suite '" + n + "'");
  }
  if (std::find(names.begin(), names.end(), "monte-carlo") != names.end()) {
    meta["paths"] = o.paths;
    meta["steps"] = o.steps;
  }
  t = Table{{"suite", "check", "residual", "tolerance", "passed", "note"}, {}};
  bool all = true;
  ordered_json summary = ordered_json::array();
  for (const auto& n : names) {
    for (const auto& rep : run_suite(n, p, o)) {
      all = all && rep.passed();
      summary.push_back({{"suite", rep.name}, {"checks", rep.checks.size()}, {"max_residual", rep.max_residual()}, {"passed", rep.passed()}});
      std::cerr << rep.name << ": " << (rep.passed() ? "pass" : "FAIL") << ", " << rep.checks.size() << " checks, max residual "
                << rep.max_residual() << "\n";
      for (const auto& c : rep.checks) t.rows.push_back({rep.name, c.label, c.residual, c.tolerance, c.passed, c.note});
    }
  }
  meta["suites"] = summary;
  meta["passed"] = all;
  return all ? 0 : 1;
}

int run_simulate(const Options& o, Table& t, ordered_json& meta) {
  const auto p = build_params(o);
  meta = meta_for(o, p);
  if (o.paths < 1) throw ConfigError("--paths must be positive");
  if (o.steps < 1 || (o.steps & (o.steps - 1)) != 0) throw ConfigError("--steps must be a power of 2");
  meta["paths"] = o.paths;
  meta["steps"] = o.steps;
  const auto batch = sample_supremum(p, o.paths, o.steps, o.seed);
  t = Table{{"path", "sup"}, {}};
  for (long i = 0; i < o.paths; ++i) t.rows.push_back({i, batch.values[i]});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Suprema of strictly stable Levy processes: phi, Mellin transform, density, checks"};
  app.set_version_flag("--version", STABLE_EXTREMA_VERSION);
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c, bool params_required) {
    c->add_option("--alpha", o.alpha, "stability index; m/n for an exact rational")->required(params_required);
    c->add_option("--rho", o.rho, "positivity parameter P(X_1 > 0)");
    c->add_option("--beta", o.beta, "skewness, converted to rho");
    c->add_option("--tol", o.tol, "target absolute tolerance")->check(CLI::PositiveNumber);
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--output,-o", o.output, "output file (default stdout)");
  };
  auto gridded = [&](CLI::App* c, const char* flag, const char* what) {
    c->add_option("--grid", o.grid, "start:stop:count[:lin|log]");
    c->add_option(flag, o.points, what)->delimiter(',');
    c->add_option("--method", o.method, "evaluation method");
  };

  auto* phi_cmd = app.add_subcommand("phi", "Wiener-Hopf factor E exp(-z S_e)");
  common(phi_cmd, true);
  gridded(phi_cmd, "--z", "real parts of z");
  phi_cmd->add_option("--imag", o.imag, "imaginary part added to every z");

  auto* mellin_cmd = app.add_subcommand("mellin", "Mellin transform M(s) = E S_1^(s-1)");
  common(mellin_cmd, true);
  gridded(mellin_cmd, "--s", "real parts of s");
  mellin_cmd->add_option("--imag", o.imag, "imaginary part added to every s");

  auto* density_cmd = app.add_subcommand("density", "density or distribution function of S_1");
  common(density_cmd, true);
  gridded(density_cmd, "--x", "evaluation points");
  density_cmd->add_option("--quantity", o.quantity, "pdf or cdf");

  auto* verify_cmd = app.add_subcommand("verify", "run invariant suites; exit 1 on any failure");
  common(verify_cmd, false);
  verify_cmd->add_option("--suite", o.suites, "suite name or all")->required();
  verify_cmd->add_option("--paths", o.paths, "Monte-Carlo paths");
  verify_cmd->add_option("--steps", o.steps, "Monte-Carlo steps per path");

  auto* simulate_cmd = app.add_subcommand("simulate", "random-walk suprema on [0, 1]");
  common(simulate_cmd, true);
  simulate_cmd->add_option("--paths", o.paths, "number of paths");
  simulate_cmd->add_option("--steps", o.steps, "steps per path, a power of 2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Table t;
    ordered_json meta;
    int rc = 0;
    if (*phi_cmd) o.command = "phi", rc = run_phi(o, t, meta);
    else if (*mellin_cmd) o.command = "mellin", rc = run_mellin(o, t, meta);
    else if (*density_cmd) o.command = "density", rc = run_density(o, t, meta);
    else if (*verify_cmd) o.command = "verify", rc = run_verify(o, t, meta);
    else o.command = "simulate", rc = run_simulate(o, t, meta);

    const std::string body = render(t, o, meta);
    if (o.output.empty()) {
      std::cout << body;
    } else {
      std::ofstream out(o.output, std::ios::binary);
      out << body;
      if (!out) throw ConfigError("cannot write " + o.output);
    }
    return rc;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
