#include "cli.hpp"

#include "stein/convexify.hpp"
#include "stein/criteria.hpp"
#include "stein/domains.hpp"
#include "stein/errors.hpp"
#include "stein/estimators.hpp"
#include "stein/riccati.hpp"
#include "stein/sampling.hpp"
#include "stein/selftest.hpp"
#include "stein/worm.hpp"

#include "CLI11.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stein::cli {
namespace {

using nlohmann::json;

/// A malformed flag or config entry; the message names the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Param {
  std::string name;  ///< JSON key; the flag is --name with '_' spelled '-'
  json fallback;     ///< default, which also fixes the accepted type; null = optional number
  std::string help;
};

struct Outcome {
  json results = json::array();
  int status = kExitPass;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Param> params;
  std::function<Outcome(const json&)> run;
};

std::string flag_of(const std::string& name) {
  std::string f = "--" + name;
  for (auto& c : f)
    if (c == '_') c = '-';
  return f;
}

bool same_kind(const json& fallback, const json& v) {
  if (fallback.is_null()) return v.is_null() || v.is_number();
  if (fallback.is_number_integer()) return v.is_number_integer();
  if (fallback.is_number()) return v.is_number();
  if (fallback.is_array()) return v.is_array();
  return fallback.type() == v.type();
}

const char* kind_name(const json& fallback) {
  if (fallback.is_null() || fallback.is_number_float()) return "a number";
  if (fallback.is_number_integer()) return "an integer";
  if (fallback.is_array()) return "an array";
  if (fallback.is_boolean()) return "a boolean";
  return "a string";
}

json parse_flag(const Param& p, const std::string& text) {
  const std::string where = "flag " + flag_of(p.name) + ": expected " + kind_name(p.fallback) + ", got '" + text + "'";
  try {
    std::size_t used = 0;
    if (p.fallback.is_null() || p.fallback.is_number_float()) {
      const double v = std::stod(text, &used);
      if (used != text.size()) throw ConfigError(where);
      return v;
    }
    if (p.fallback.is_number_integer()) {
      const long long v = std::stoll(text, &used);
      if (used != text.size()) throw ConfigError(where);
      return v;
    }
    if (p.fallback.is_boolean()) {
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw ConfigError(where);
    }
    if (p.fallback.is_array()) {
      json v = json::parse(text.front() == '[' ? text : "[" + text + "]");
      if (!v.is_array()) throw ConfigError(where);
      return v;
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError(where);
  } catch (const std::out_of_range&) {
    throw ConfigError(where);
  } catch (const json::exception&) {
    throw ConfigError(where);
  }
  return text;
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON (") + e.what() + ")");
  }
}

/// defaults <- config file <- explicit flags.
json resolve(const Command& cmd, const CLI::App& sub, const std::map<std::string, std::string>& raw,
             const std::string& config_path) {
  json cfg = json::object();
  for (const auto& p : cmd.params) cfg[p.name] = p.fallback;
  if (!config_path.empty()) {
    json file = read_config_file(config_path);
    // A full report's embedded config can be fed back in.
    if (file.contains("config") && file["config"].is_object()) file = file["config"];
    for (const auto& [key, value] : file.items()) {
      if (key == "command") {
        if (value != cmd.name) throw ConfigError("command: config is for '" + value.dump() + "', not '" + cmd.name + "'");
        continue;
      }
      const auto it = std::find_if(cmd.params.begin(), cmd.params.end(), [&](const Param& p) { return p.name == key; });
      if (it == cmd.params.end()) throw ConfigError(key + ": unknown field for '" + cmd.name + "'");
      if (!same_kind(it->fallback, value)) throw ConfigError(key + ": expected " + std::string(kind_name(it->fallback)));
      cfg[key] = value;
    }
  }
  for (const auto& p : cmd.params)
    if (sub.count(flag_of(p.name)) > 0) cfg[p.name] = parse_flag(p, raw.at(p.name));
  cfg["command"] = cmd.name;
  return cfg;
}

// --- typed access -----------------------------------------------------------

double number(const json& cfg, const std::string& key) {
  const json& v = cfg.at(key);
  if (!v.is_number()) throw ConfigError(key + ": required number is missing");
  return v.get<double>();
}

double number_or(const json& cfg, const std::string& key, double fallback) {
  const json& v = cfg.at(key);
  return v.is_null() ? fallback : v.get<double>();
}

int positive_int(const json& cfg, const std::string& key) {
  const auto v = cfg.at(key).get<long long>();
  if (v < 1) throw ConfigError(key + ": must be at least 1");
  return static_cast<int>(v);
}

std::string choice(const json& cfg, const std::string& key, const std::vector<std::string>& allowed) {
  const auto v = cfg.at(key).get<std::string>();
  for (const auto& a : allowed)
    if (v == a) return v;
  std::string list;
  for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
  throw ConfigError(key + ": expected one of " + list + ", got '" + v + "'");
}

std::vector<double> positive_list(const json& cfg, const std::string& key) {
  std::vector<double> out;
  for (const auto& v : cfg.at(key)) {
    if (!v.is_number() || !(v.get<double>() > 0.0)) throw ConfigError(key + ": entries must be positive numbers");
    out.push_back(v.get<double>());
  }
  if (out.empty()) throw ConfigError(key + ": must not be empty");
  return out;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  body(f);
}

constexpr double kPi = std::numbers::pi;

// --- commands ---------------------------------------------------------------

Outcome worm_report_cmd(const json& cfg) {
  const double beta = number(cfg, "beta");
  WormReportOptions opt;
  opt.sigma_samples = positive_int(cfg, "m");
  opt.eta2 = number(cfg, "eta2");
  opt.psi = choice(cfg, "psi", {"auto", "riccati", "none"});
  const WormReport report = worm_report(beta, opt);

  write_file(cfg["csv"].get<std::string>(), [&](std::ostream& o) {
    write_criterion_csv_header(o, 2);
    for (const auto& row : report.criterion_rows) write_criterion_csv_row(o, row);
  });
  const int sweep_points = positive_int(cfg, "sweep_points");
  const double lo = number(cfg, "sweep_min");
  const double hi = number(cfg, "sweep_max");
  write_file(cfg["sweep_csv"].get<std::string>(), [&](std::ostream& o) {
    std::vector<double> betas;
    for (int k = 0; k < sweep_points; ++k) betas.push_back(sweep_points == 1 ? lo : lo + (hi - lo) * k / (sweep_points - 1));
    write_beta_sweep_csv(o, betas);
  });
  Outcome out;
  out.results.push_back(to_json(report));
  return out;
}

DefiningFunction build_domain(const json& cfg) {
  const std::string name = choice(cfg, "domain", {"ball", "ellipsoid", "complex_ellipsoid", "worm"});
  if (name == "ball") return make_ball(positive_int(cfg, "n"));
  if (name == "ellipsoid") return make_ellipsoid(positive_list(cfg, "axes"));
  if (name == "complex_ellipsoid") {
    std::vector<int> exps;
    for (const auto& v : cfg.at("exponents")) {
      if (!v.is_number_integer() || v.get<int>() < 1) throw ConfigError("exponents: entries must be positive integers");
      exps.push_back(v.get<int>());
    }
    return make_complex_ellipsoid(exps);
  }
  return make_worm(number_or(cfg, "beta", 0.6 * kPi));
}

Outcome estimate_cmd(const json& cfg) {
  const DefiningFunction rho = build_domain(cfg);
  const Side side = choice(cfg, "side", {"inner", "outer"}) == "inner" ? Side::Inner : Side::Outer;
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const int anchors_count = positive_int(cfg, "anchors");

  std::vector<Eigen::VectorXd> anchors;
  if (rho.name == "worm") {
    for (const auto& p : worm_sigma(rho, anchors_count)) anchors.push_back(p.point);
  } else {
    anchors = radial_boundary_samples(rho, Eigen::VectorXd::Zero(2 * rho.n), static_cast<std::size_t>(anchors_count), seed);
  }
  ShellSpec spec;
  spec.depth_min = number(cfg, "depth_min");
  spec.depth_max = number(cfg, "depth_max");
  spec.samples = static_cast<std::size_t>(positive_int(cfg, "samples"));
  spec.seed = seed;
  const auto shell = sample_shell(rho, anchors, spec, side);

  EtaGrid grid = side == Side::Inner ? EtaGrid::inner_default() : EtaGrid::outer_default();
  grid.lo = number_or(cfg, "grid_lo", grid.lo);
  grid.hi = number_or(cfg, "grid_hi", grid.hi);
  grid.step = number(cfg, "grid_step");
  const ExponentEstimate e =
      side == Side::Inner ? df_exponent_lower(rho, shell, grid) : steinness_exponent_upper(rho, shell, grid);

  write_file(cfg["csv"].get<std::string>(), [&](std::ostream& o) { write_margin_csv(o, shell, e.margins); });
  Outcome out;
  json r = to_json(e);
  r["domain"] = {{"name", rho.name}, {"n", rho.n}, {"params", rho.params}};
  r["grid"] = {{"lo", grid.lo}, {"hi", grid.hi}, {"step", grid.step}};
  if (rho.name == "worm") {
    const IndexFormulas f = index_formulas(rho.params.at("beta").get<double>());
    r["reference"] = {{"df_formula", f.df},
                      {"steinness_formula", std::isfinite(f.steinness) ? json(f.steinness) : json("inf")}};
  }
  out.results.push_back(r);
  out.status = e.certified ? kExitPass : kExitUncertified;
  return out;
}

Outcome criterion_cmd(const json& cfg) {
  choice(cfg, "domain", {"worm"});
  const double beta = number(cfg, "beta");
  const double eta2 = number(cfg, "eta2");
  const std::string psi_kind = choice(cfg, "psi", {"none", "riccati", "linear"});
  const double tolerance = number(cfg, "tolerance");
  const DefiningFunction worm = make_worm(beta);
  const auto sigma = worm_sigma(worm, positive_int(cfg, "m"));

  PsiField fixed = PsiField::zero();
  if (psi_kind == "riccati") fixed = PsiField::real("riccati", worm_psi_field(beta, eta2));
  std::vector<CriterionSample> rows;
  for (const auto& p : sigma) {
    const PsiField psi = psi_kind == "linear" ? linear_psi(worm, p.point).field() : fixed;
    rows.push_back(evaluate_criterion(worm, psi, p, sigma_kernel(p), eta2));
  }

  write_file(cfg["csv"].get<std::string>(), [&](std::ostream& o) {
    write_criterion_csv_header(o, 2);
    for (const auto& row : rows) write_criterion_csv_row(o, row);
  });
  double max_q = -std::numeric_limits<double>::infinity();
  double max_abs_q = 0.0;
  json samples = json::array();
  for (const auto& row : rows) {
    max_q = std::max(max_q, row.Q);
    max_abs_q = std::max(max_abs_q, std::abs(row.Q));
    samples.push_back(to_json(row));
  }
  Outcome out;
  out.results.push_back({{"beta", beta},
                         {"eta2", eta2},
                         {"psi", psi_kind},
                         {"threshold", std::isfinite(worm_threshold(beta)) ? json(worm_threshold(beta)) : json("inf")},
                         {"max_Q", max_q},
                         {"max_abs_Q", max_abs_q},
                         {"tolerance", tolerance},
                         {"holds", max_q <= tolerance},
                         {"samples", samples}});
  out.status = max_q <= tolerance ? kExitPass : kExitUncertified;
  return out;
}

Outcome riccati_cmd(const json& cfg) {
  const RiccatiCheck c = riccati_check(number(cfg, "a"), number(cfg, "b"), number(cfg, "phi"), number(cfg, "t0"),
                                       number(cfg, "t1"), number(cfg, "step"));
  write_file(cfg["csv"].get<std::string>(), [&](std::ostream& o) { write_trajectory_csv(o, c); });
  const bool pass = c.sup_error <= 1e-6 && c.ode_residual <= 1e-8;
  Outcome out;
  json r = to_json(c);
  r["pass"] = pass;
  out.results.push_back(r);
  out.status = pass ? kExitPass : kExitUncertified;
  return out;
}

Outcome convexify_cmd(const json& cfg) {
  const std::string kind = choice(cfg, "body", {"disc", "ellipse", "ellipsoid"});
  StarBody body;
  if (kind == "disc") {
    const int n_real = positive_int(cfg, "n_real");
    if (n_real != 2 && n_real != 4) throw ConfigError("n_real: must be 2 or 4");
    body = make_disc(number(cfg, "radius"), n_real);
  } else if (kind == "ellipse") {
    const auto axes = positive_list(cfg, "axes");
    if (axes.size() != 2) throw ConfigError("axes: an ellipse needs two semi-axes");
    body = make_ellipse(axes[0], axes[1]);
  } else {
    body = make_ellipsoid_body(positive_list(cfg, "axes"));
  }
  ConvexifyOptions opt;
  opt.seed = cfg.at("seed").get<std::uint64_t>();
  const Convexified c = convexify(body, positive_int(cfg, "k"), opt);
  const ConvexCertificate cert =
      certify_convexified(c, static_cast<std::size_t>(positive_int(cfg, "hessian_points")),
                          static_cast<std::size_t>(positive_int(cfg, "boundary_points")), opt.seed + 2);
  Outcome out;
  out.results.push_back({{"construction", to_json(c)}, {"certificate", to_json(cert)}});
  out.status = cert.passed ? kExitPass : kExitUncertified;
  return out;
}

Outcome selftest_cmd(const json& cfg) {
  const SelftestReport r = run_selftest(cfg.at("seed").get<std::uint64_t>(), positive_int(cfg, "psi_count"),
                                        positive_int(cfg, "sigma_points"), positive_int(cfg, "fd_points"));
  Outcome out;
  out.results.push_back(to_json(r));
  out.status = r.passed() ? kExitPass : kExitUncertified;
  return out;
}

std::vector<Command> commands() {
  return {
      {"worm-report",
       "Index formulas, threshold and Sigma criterion rows for a worm domain",
       {{"beta", nullptr, "worm parameter beta > pi/2 (required)"},
        {"m", 50, "number of Sigma samples"},
        {"eta2", 2.0, "Steinness exponent for the criterion rows"},
        {"psi", "none", "weight: none|riccati|auto"},
        {"csv", "", "criterion rows CSV path"},
        {"sweep_csv", "", "beta sweep CSV path"},
        {"sweep_points", 20, "beta values in the sweep"},
        {"sweep_min", 1.6, "first beta of the sweep"},
        {"sweep_max", 4.5, "last beta of the sweep"}},
       worm_report_cmd},
      {"estimate",
       "Sample-certified DF (inner) or Steinness (outer) exponent of a defining function",
       {{"domain", "ball", "ball|ellipsoid|complex_ellipsoid|worm"},
        {"side", "inner", "inner|outer"},
        {"n", 2, "complex dimension of the ball"},
        {"axes", json::array({2.0, 1.0}), "ellipsoid semi-axes"},
        {"exponents", json::array({1, 2}), "complex ellipsoid exponents"},
        {"beta", nullptr, "worm beta (default 0.6 pi)"},
        {"anchors", 256, "boundary anchors for the shell"},
        {"samples", 2000, "shell samples"},
        {"depth_min", 1e-3, "smallest |rho| in the shell"},
        {"depth_max", 5e-2, "largest |rho| in the shell"},
        {"grid_lo", nullptr, "smallest grid eta (default 0.01 inner, 1.01 outer)"},
        {"grid_hi", nullptr, "largest grid eta (default 0.99 inner, 4 outer)"},
        {"grid_step", 1e-3, "grid spacing"},
        {"seed", 1, "sampling seed"},
        {"csv", "", "per-sample margins CSV path"}},
       estimate_cmd},
      {"criterion",
       "Steinness criterion on the worm's Sigma, optionally with a weight",
       {{"domain", "worm", "worm"},
        {"beta", nullptr, "worm parameter beta > pi/2 (required)"},
        {"eta2", 2.0, "Steinness exponent eta2 > 1"},
        {"psi", "none", "weight: none|riccati|linear"},
        {"m", 50, "number of Sigma samples"},
        {"tolerance", 1e-5, "the criterion holds when max Q <= tolerance"},
        {"csv", "", "criterion rows CSV path"}},
       criterion_cmd},
      {"riccati",
       "RK4 integration of the Riccati equation against its closed form",
       {{"a", 1.0, "coefficient a > 0"},
        {"b", 1.0, "coefficient b > 0"},
        {"phi", kPi / 2.0, "phase of the closed form"},
        {"t0", 1.0, "start"},
        {"t1", 1.5, "end"},
        {"step", 1e-3, "RK4 step"},
        {"csv", "", "trajectory CSV path"}},
       riccati_cmd},
      {"convexify",
       "Defining function strictly convex off the boundary of a convex body",
       {{"body", "ellipse", "disc|ellipse|ellipsoid"},
        {"axes", json::array({2.0, 1.0}), "semi-axes (ellipse, ellipsoid)"},
        {"radius", 1.0, "disc radius"},
        {"n_real", 2, "disc dimension, 2 or 4"},
        {"k", 4, "number of terms K >= 2"},
        {"hessian_points", 500, "Hessian test points with |delta| > 1/K"},
        {"boundary_points", 200, "boundary test points"},
        {"seed", 1, "sampling seed"}},
       convexify_cmd},
      {"selftest",
       "Keylemma residuals and AD/FD consistency",
       {{"seed", 1, "seed for the random weights and points"},
        {"psi_count", 10, "random weights"},
        {"sigma_points", 20, "worm Sigma points"},
        {"fd_points", 100, "points per built-in domain"}},
       selftest_cmd},
  };
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical toolkit for Diederich-Fornaess and Steinness exponents"};
  app.require_subcommand(1);
  const auto cmds = commands();
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::string> config_path;
  std::map<std::string, std::string> output_path;
  std::vector<std::pair<const Command*, CLI::App*>> subs;
  for (const auto& cmd : cmds) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_path[cmd.name], "JSON config; flags override its fields");
    sub->add_option("--output", output_path[cmd.name], "JSON report path (default: stdout)");
    auto& storage = raw[cmd.name];
    for (const auto& p : cmd.params) sub->add_option(flag_of(p.name), storage[p.name], p.help);
    subs.emplace_back(&cmd, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitError;
  }

  for (const auto& [cmd, sub] : subs) {
    if (!app.got_subcommand(sub)) continue;
    try {
      const json cfg = resolve(*cmd, *sub, raw[cmd->name], config_path[cmd->name]);
      const auto start = std::chrono::steady_clock::now();
      Outcome result = cmd->run(cfg);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const json report = {{"version", kReportVersion},
                           {"config", cfg},
                           {"results", result.results},
                           {"status", result.status == kExitPass ? "pass" : "uncertified"},
                           {"timing", {{"seconds", seconds}}}};
      const std::string& path = output_path[cmd->name];
      if (path.empty()) {
        out << report.dump(2) << "\n";
      } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ConfigError("output: cannot open '" + path + "' for writing");
        f << report.dump(2) << "\n";
      }
      return result.status;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitError;
    }
  }
  return kExitError;
}

}  // namespace stein::cli
