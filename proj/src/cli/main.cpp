// cknsym: optimal constants, symmetry regions, and cylinder minimization
// for a family of weighted interpolation inequalities.
//
// Commands: constants, classify, figure, minimize, sweep.
// Exit codes: 0 success, 2 invalid parameters, 3 I/O failure,
//             4 solver non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cknsym/io.hpp"
#include "cknsym/minimize.hpp"
#include "cknsym/params.hpp"
#include "cknsym/radial_constants.hpp"
#include "cknsym/regions.hpp"

namespace {

namespace cs = cknsym;
using cknsym::io::Record;
using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  double d = kNaN, p = kNaN, theta = kNaN, gamma = kNaN, a = kNaN,
         lambda = kNaN, tol = kNaN;
  double smax = 20.0;
  int grid_ns = 1024, grid_nphi = 1;
  std::string out, format = "csv", config, profile_out, init = "perturbed";
  bool ckn = false, wlh = false, ls = false, sobolev = false, gauss_h = false,
       big_l = false;
  std::string axis1, axis2;
  std::vector<std::string> fix;
  int figure_id = 0;
};

double require(double v, const char* flag) {
  if (!std::isfinite(v))
    throw std::domain_error(std::string("missing required flag ") + flag);
  return v;
}

// lambda from --lambda or from --a (needs --d); prefers --lambda
double resolve_lambda(const Flags& f) {
  if (std::isfinite(f.lambda)) {
    if (!(f.lambda > 0)) throw std::domain_error("lambda must be positive");
    return f.lambda;
  }
  if (std::isfinite(f.a)) {
    const double d = require(f.d, "--d");
    if (!(f.a < cs::params::a_critical(d)))
      throw std::domain_error("a must satisfy a < (d-2)/2");
    return cs::params::lambda_of_a(d, f.a);
  }
  throw std::domain_error("missing required flag --lambda (or --a with --d)");
}

double resolve_a(const Flags& f, double d) {
  if (std::isfinite(f.a)) return f.a;
  if (std::isfinite(f.lambda)) return cs::params::a_of_lambda(d, f.lambda);
  throw std::domain_error("missing required flag --a (or --lambda)");
}

// ---------------------------------------------------------------------------
// output sink
// ---------------------------------------------------------------------------

struct Sink {
  std::string format;  // "csv" or "json"
  std::string path;    // empty: stdout
  std::string buffer;
  bool header_done = false;

  void put(const Record& r) {
    if (format == "csv") {
      if (!header_done) {
        buffer += cs::io::csv_header(r);
        header_done = true;
      }
      buffer += cs::io::csv_row(r);
    } else {
      buffer += cs::io::json_line(r);
    }
  }

  void flush() const {
    if (path.empty()) {
      std::cout << buffer;
      if (!std::cout) throw IoError("failed to write to stdout");
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open output file: " + path);
    os << buffer;
    os.flush();
    if (!os) throw IoError("failed while writing: " + path);
  }
};

Sink make_sink(const Flags& f) {
  if (f.format != "csv" && f.format != "json")
    throw std::domain_error("format must be csv or json");
  return Sink{f.format, f.out, {}, false};
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

void add_param_fields(Record& r, const Flags& f) {
  r.add("d", f.d);
  r.add("theta", f.theta);
  r.add("p", f.p);
  r.add("gamma", f.gamma);
}

int run_constants(const Flags& f) {
  Sink sink = make_sink(f);
  bool any = false;
  auto emit = [&](const char* which, double lambda_used,
                  const cs::radial::ConstantValue& cv) {
    Record r;
    r.add_text("constant", which);
    add_param_fields(r, f);
    r.add("lambda", lambda_used);
    r.add("value", cv.value);
    r.add("log_value", cv.log_value);
    r.add_text("formula_id", cv.formula_id);
    sink.put(r);
    any = true;
  };

  if (f.ckn) {
    const double lam = resolve_lambda(f);
    emit("c_ckn_star", lam,
         cs::radial::c_ckn_star(require(f.theta, "--theta"),
                                require(f.p, "--p"), lam));
  }
  if (f.wlh) {
    const double gamma = require(f.gamma, "--gamma");
    const double d = require(f.d, "--d");
    const double lam =
        (gamma == 0.25) ? (std::isfinite(f.lambda) ? f.lambda : 1.0)
                        : resolve_lambda(f);
    emit("c_wlh_star", lam, cs::radial::c_wlh_star(gamma, lam, d));
  }
  if (f.ls) emit("c_ls", kNaN, cs::radial::c_ls(require(f.d, "--d")));
  if (f.sobolev)
    emit("sobolev_star", kNaN, cs::radial::sobolev_star(require(f.d, "--d")));
  if (f.gauss_h)
    emit("gaussian_h", kNaN,
         cs::radial::gaussian_h(require(f.p, "--p"), require(f.d, "--d")));
  if (f.big_l)
    emit("big_l", kNaN,
         cs::radial::big_l(require(f.p, "--p"), require(f.d, "--d")));

  if (!any)
    throw std::domain_error(
        "constants: select at least one of --ckn --wlh --ls --sobolev "
        "--gaussian-h --big-l");
  sink.flush();
  return 0;
}

void add_verdict_fields(Record& r, const cs::regions::RegionVerdict& v) {
  r.add_text("verdict", cs::regions::verdict_name(v.verdict));
  std::string mechs, margins;
  for (size_t i = 0; i < v.fired.size(); ++i) {
    if (i) {
      mechs += ';';
      margins += ';';
    }
    mechs += cs::regions::mechanism_name(v.fired[i].mechanism);
    margins += cs::io::fmt17(v.fired[i].margin);
  }
  r.add_text("mechanisms", mechs);
  r.add_text("margins", margins);
  std::string bounds;
  for (size_t i = 0; i < v.boundaries.size(); ++i) {
    if (i) bounds += ';';
    bounds += v.boundaries[i].first + "=" + cs::io::fmt17(v.boundaries[i].second);
  }
  r.add_text("boundaries", bounds);
}

int run_classify(const Flags& f) {
  if (f.ckn == f.wlh)
    throw std::domain_error("classify: pass exactly one of --ckn / --wlh");
  Sink sink = make_sink(f);
  const double d = require(f.d, "--d");
  const double a = resolve_a(f, d);

  Record r;
  r.add_text("kind", f.ckn ? "ckn" : "wlh");
  add_param_fields(r, f);
  r.add("a", a);
  r.add("lambda", cs::params::lambda_of_a(d, a));
  const cs::regions::RegionVerdict v =
      f.ckn ? cs::regions::classify_ckn(require(f.theta, "--theta"),
                                        require(f.p, "--p"), a, d)
            : cs::regions::classify_wlh(require(f.gamma, "--gamma"), a, d);
  add_verdict_fields(r, v);
  sink.put(r);
  sink.flush();
  return 0;
}

int run_figure(const Flags& f) {
  Sink sink = make_sink(f);
  switch (f.figure_id) {
    case 1: {
      // Schwarz-curve map: a_bar and a0 over (p, theta) at fixed d.
      const double d = std::isfinite(f.d) ? f.d : 5.0;
      for (int ip = 0; ip <= 11; ++ip) {
        const double p = 2.1 + 0.1 * ip;
        const double vt = cs::params::theta_min(d, p);
        std::vector<double> thetas;
        for (int k = 1; k <= 24; ++k) thetas.push_back(vt + (1 - vt) * k / 25.0);
        thetas.push_back(0.999);
        for (double theta : thetas) {
          Record r;
          r.add("d", d);
          r.add("p", p);
          r.add("theta", theta);
          r.add("a_bar", cs::regions::a_bar(theta, p, d));
          const cs::regions::SchwarzRoot root = cs::regions::schwarz_a0(theta, p, d);
          const char* status =
              root.status == cs::regions::SchwarzStatus::bracketed_root
                  ? "bracketed_root"
                  : (root.status == cs::regions::SchwarzStatus::all_positive
                         ? "all_positive"
                         : "all_negative");
          r.add_text("a0_status", status);
          r.add("a0", root.a0);
          sink.put(r);
        }
      }
      break;
    }
    case 2: {
      // Gagliardo-Nirenberg comparison quotient L(p, d).
      for (int d = 3; d <= 10; ++d) {
        const double pc = cs::params::p_critical(d);
        const double phi = std::min(6.0, pc - 0.02);
        const int n = 140;
        for (int k = 0; k <= n; ++k) {
          const double p = 2.001 + (phi - 2.001) * k / n;
          Record r;
          r.add("d", d);
          r.add("p", p);
          r.add("big_l", cs::radial::big_l(p, d).value);
          sink.put(r);
        }
      }
      break;
    }
    case 3: {
      // Radial log-Hardy constant at gamma = d/4 against the log-Sobolev one.
      for (int d = 3; d <= 10; ++d) {
        const double lam = std::pow((d - 1.0) / 2.0, 2);  // Lambda at a = -1/2
        const double cw = cs::radial::c_wlh_star(d / 4.0, lam, d).value;
        const double cl = cs::radial::c_ls(d).value;
        Record r;
        r.add("d", d);
        r.add("lambda", lam);
        r.add("c_wlh_star", cw);
        r.add("c_ls", cl);
        r.add("ratio", cw / cl);
        sink.put(r);
      }
      break;
    }
    case 4: {
      // lambda_sb / lambda_tilde across gamma for small dimensions.
      for (int d = 2; d <= 6; ++d) {
        const double lo = (d == 2 ? 0.5 : d / 4.0) + 1e-3;
        const int n = 240;
        for (int k = 0; k <= n; ++k) {
          const double gamma = lo + (8.0 - lo) * k / n;
          const double lsb = cs::regions::lambda_sb(gamma, d);
          const double lt = cs::regions::lambda_tilde(gamma, d);
          Record r;
          r.add("d", d);
          r.add("gamma", gamma);
          r.add("lambda_sb", lsb);
          r.add("lambda_tilde", lt);
          r.add("ratio", lsb / lt);
          sink.put(r);
        }
      }
      break;
    }
    default:
      throw std::domain_error("figure: id must be 1, 2, 3, or 4");
  }
  sink.flush();
  return 0;
}

int run_minimize(const Flags& f) {
  if (f.ckn == f.wlh)
    throw std::domain_error("minimize: pass exactly one of --ckn / --wlh");
  const double d = require(f.d, "--d");
  const double lam = resolve_lambda(f);

  cs::cylinder::MinimizeOptions opts;
  if (std::isfinite(f.tol)) opts.value_stall_tol = f.tol;
  const auto grid =
      cs::cylinder::build_grid<double>(f.smax, f.grid_ns, f.grid_nphi, d);

  cs::cylinder::Init init;
  if (f.init == "radial")
    init = cs::cylinder::Init::radial;
  else if (f.init == "perturbed")
    init = cs::cylinder::Init::perturbed;
  else
    throw std::domain_error("minimize: --init must be radial or perturbed");

  cs::cylinder::MinimizationResult<double> res;
  if (f.ckn) {
    const double theta = require(f.theta, "--theta");
    const double p = require(f.p, "--p");
    res = (f.grid_nphi == 1)
              ? cs::cylinder::minimize_radial_f(grid, theta, p, lam, opts)
              : cs::cylinder::minimize_f(grid, theta, p, lam, init, nullptr, opts);
  } else {
    const double gamma = require(f.gamma, "--gamma");
    res = (f.grid_nphi == 1)
              ? cs::cylinder::minimize_radial_g(grid, gamma, lam, opts)
              : cs::cylinder::minimize_g(grid, gamma, lam, init, nullptr, opts);
  }

  Sink sink = make_sink(f);
  Record r;
  r.add_text("kind", f.ckn ? "ckn" : "wlh");
  add_param_fields(r, f);
  r.add("lambda", lam);
  r.add("s_max", f.smax);
  r.add("n_s", f.grid_ns);
  r.add("n_phi", f.grid_nphi);
  r.add("value", res.value);
  r.add("log_value", res.log_value);
  r.add("t", res.t);
  r.add("iterations", static_cast<double>(res.iterations));
  r.add_text("converged", res.converged ? "true" : "false");
  r.add("angular_fraction", res.angular_fraction);
  r.add("s_symmetry_residual", res.s_symmetry_residual);
  r.add("el_residual", res.el_residual);
  sink.put(r);
  sink.flush();

  if (!f.profile_out.empty()) {
    std::string prof = "s,phi,w\n";
    for (int i = 0; i < grid.n_s; ++i)
      for (int j = 0; j < grid.n_phi; ++j)
        prof += cs::io::fmt17(grid.s_nodes[i]) + "," +
                cs::io::fmt17(grid.phi_nodes[j]) + "," +
                cs::io::fmt17(res.profile(i, j)) + "\n";
    std::ofstream os(f.profile_out, std::ios::binary);
    if (!os) throw IoError("cannot open profile output: " + f.profile_out);
    os << prof;
    if (!os) throw IoError("failed while writing: " + f.profile_out);
  }
  return res.converged ? 0 : 4;
}

cs::regions::SweepAxis parse_axis(const std::string& spec) {
  // name=lo:hi:n
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw std::domain_error("sweep: axis spec must be name=lo:hi:n");
  cs::regions::SweepAxis ax;
  ax.name = spec.substr(0, eq);
  const std::string rest = spec.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = rest.find(':', c1 == std::string::npos ? 0 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw std::domain_error("sweep: axis spec must be name=lo:hi:n");
  try {
    ax.lo = std::stod(rest.substr(0, c1));
    ax.hi = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
    ax.count = std::stoi(rest.substr(c2 + 1));
  } catch (const std::exception&) {
    throw std::domain_error("sweep: malformed axis spec: " + spec);
  }
  if (ax.count < 1) throw std::domain_error("sweep: axis count must be >= 1");
  return ax;
}

int sweep_threads() {
  if (const char* env = std::getenv("CKNSYM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

int run_sweep(const Flags& f) {
  if (f.ckn == f.wlh)
    throw std::domain_error("sweep: pass exactly one of --ckn / --wlh");
  if (f.axis1.empty() || f.axis2.empty())
    throw std::domain_error("sweep: --axis1 and --axis2 are required");

  cs::regions::SweepRequest req;
  req.kind = f.ckn ? "ckn" : "wlh";
  req.axis1 = parse_axis(f.axis1);
  req.axis2 = parse_axis(f.axis2);
  for (const std::string& kv : f.fix) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::domain_error("sweep: --fix expects name=value");
    try {
      req.fixed.emplace_back(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
    } catch (const std::exception&) {
      throw std::domain_error("sweep: malformed --fix: " + kv);
    }
  }
  // flags provide implicit fixed values when present
  auto add_fixed = [&](const char* name, double v) {
    if (!std::isfinite(v)) return;
    if (name == req.axis1.name || name == req.axis2.name) return;
    for (const auto& [k, unused] : req.fixed)
      if (k == name) return;
    req.fixed.emplace_back(name, v);
  };
  add_fixed("d", f.d);
  add_fixed("theta", f.theta);
  add_fixed("p", f.p);
  add_fixed("gamma", f.gamma);
  add_fixed("a", f.a);
  add_fixed("lambda", f.lambda);

  const std::vector<cs::regions::SweepRow> rows =
      cs::regions::sweep(req, sweep_threads());

  Sink sink = make_sink(f);
  for (const auto& row : rows) {
    Record r;
    r.add(req.axis1.name, row.v1);
    r.add(req.axis2.name, row.v2);
    r.add_text("ok", row.ok ? "true" : "false");
    r.add_text("error", row.error);
    if (row.ok) {
      add_verdict_fields(r, row.verdict);
    } else {
      r.add_text("verdict", "");
      r.add_text("mechanisms", "");
      r.add_text("margins", "");
      r.add_text("boundaries", "");
    }
    sink.put(r);
  }
  sink.flush();
  return 0;
}

// ---------------------------------------------------------------------------
// config file merge (CLI flags take precedence)
// ---------------------------------------------------------------------------

void merge_config(const CLI::App* sub, Flags& f) {
  if (f.config.empty()) return;
  std::ifstream is(f.config);
  if (!is) throw IoError("cannot open config file: " + f.config);
  json doc;
  try {
    is >> doc;
  } catch (const json::exception& e) {
    throw std::domain_error(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("flags")) return;
  const json& jf = doc["flags"];

  auto num = [&](const char* name, double& slot) {
    if (sub->count(std::string("--") + name) == 0 && jf.contains(name))
      slot = jf[name].get<double>();
  };
  auto integer = [&](const char* name, int& slot) {
    if (sub->count(std::string("--") + name) == 0 && jf.contains(name))
      slot = jf[name].get<int>();
  };
  auto text = [&](const char* name, std::string& slot) {
    if (sub->count(std::string("--") + name) == 0 && jf.contains(name))
      slot = jf[name].get<std::string>();
  };
  auto flag = [&](const char* name, bool& slot) {
    if (sub->count(std::string("--") + name) == 0 && jf.contains(name))
      slot = jf[name].get<bool>();
  };

  num("d", f.d);
  num("p", f.p);
  num("theta", f.theta);
  num("gamma", f.gamma);
  num("a", f.a);
  num("lambda", f.lambda);
  num("tol", f.tol);
  num("smax", f.smax);
  integer("grid-ns", f.grid_ns);
  integer("grid-nphi", f.grid_nphi);
  text("out", f.out);
  text("format", f.format);
  text("profile-out", f.profile_out);
  text("init", f.init);
  text("axis1", f.axis1);
  text("axis2", f.axis2);
  flag("ckn", f.ckn);
  flag("wlh", f.wlh);
  flag("ls", f.ls);
  flag("sobolev", f.sobolev);
  flag("gaussian-h", f.gauss_h);
  flag("big-l", f.big_l);
  if (jf.contains("fix") && f.fix.empty())
    for (const auto& item : jf["fix"]) f.fix.push_back(item.get<std::string>());
}

void add_common_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--d", f.d, "dimension d");
  sub->add_option("--p", f.p, "exponent p");
  sub->add_option("--theta", f.theta, "interpolation parameter theta");
  sub->add_option("--gamma", f.gamma, "log-Hardy exponent gamma");
  sub->add_option("--a", f.a, "weight parameter a");
  sub->add_option("--lambda", f.lambda, "Lambda = (a - a_c)^2");
  sub->add_option("--grid-ns", f.grid_ns, "number of s nodes");
  sub->add_option("--grid-nphi", f.grid_nphi, "number of phi nodes");
  sub->add_option("--smax", f.smax, "s truncation half-width");
  sub->add_option("--out", f.out, "output path (default stdout)");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_option("--tol", f.tol, "minimizer value-stall tolerance override");
  sub->add_option("--config", f.config, "JSON config file (flags object)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal constants and symmetry regions of weighted "
               "interpolation inequalities on the cylinder"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* c_const = app.add_subcommand("constants", "closed-form constants");
  add_common_flags(c_const, f);
  c_const->add_flag("--ckn", f.ckn, "interpolation constant c_ckn_star");
  c_const->add_flag("--wlh", f.wlh, "log-Hardy constant c_wlh_star");
  c_const->add_flag("--ls", f.ls, "log-Sobolev constant");
  c_const->add_flag("--sobolev", f.sobolev, "sharp Sobolev constant");
  c_const->add_flag("--gaussian-h", f.gauss_h, "Gaussian quotient h(p, d)");
  c_const->add_flag("--big-l", f.big_l, "comparison quotient L(p, d)");

  CLI::App* c_classify = app.add_subcommand("classify", "classify a parameter point");
  add_common_flags(c_classify, f);
  c_classify->add_flag("--ckn", f.ckn, "classify a CKN point");
  c_classify->add_flag("--wlh", f.wlh, "classify a WLH point");

  CLI::App* c_figure = app.add_subcommand("figure", "emit figure data (CSV)");
  add_common_flags(c_figure, f);
  c_figure->add_option("id", f.figure_id, "figure id (1-4)")->required();

  CLI::App* c_min = app.add_subcommand("minimize", "cylinder functional minimization");
  add_common_flags(c_min, f);
  c_min->add_flag("--ckn", f.ckn, "minimize the interpolation functional");
  c_min->add_flag("--wlh", f.wlh, "minimize the log-Hardy functional");
  c_min->add_option("--init", f.init, "initialization: radial or perturbed");
  c_min->add_option("--profile-out", f.profile_out, "write profile CSV (s,phi,w)");

  CLI::App* c_sweep = app.add_subcommand("sweep", "rectangular parameter sweep");
  add_common_flags(c_sweep, f);
  c_sweep->add_flag("--ckn", f.ckn, "sweep the CKN classifier");
  c_sweep->add_flag("--wlh", f.wlh, "sweep the WLH classifier");
  c_sweep->add_option("--axis1", f.axis1, "outer axis: name=lo:hi:n");
  c_sweep->add_option("--axis2", f.axis2, "inner axis: name=lo:hi:n");
  c_sweep->add_option("--fix", f.fix, "fixed parameter name=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    merge_config(sub, f);
    if (sub == c_const) return run_constants(f);
    if (sub == c_classify) return run_classify(f);
    if (sub == c_figure) return run_figure(f);
    if (sub == c_min) return run_minimize(f);
    if (sub == c_sweep) return run_sweep(f);
    return 2;
  } catch (const cs::cylinder::NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
