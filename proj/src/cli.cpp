#include "robustdp/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "robustdp/dp.hpp"
#include "robustdp/oracle.hpp"
#include "robustdp/report.hpp"

namespace robustdp {

namespace {

constexpr const char* kVersion = "robustdp 0.1.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SolveError("cannot write report file '" + path + "'");
  out << text;
}

std::vector<double> parse_csv_doubles(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(what + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

void fill_common(ReportBuilder& rb, const std::string& command,
                 const std::string& config_text) {
  rb.set("command", command);
  rb.set("config.digest", content_digest(config_text));
  rb.set("version", std::string(kVersion));
}

void fill_na(ReportBuilder& rb, const ScenarioTree& tree, const NAReport& na) {
  rb.set("na.verdict", std::string(na.pass ? "PASS" : "FAIL"));
  rb.set("na.exact", na.all_exact);
  for (const auto& nc : na.nodes) {
    const std::string key = "na.node." + tree.node(nc.node).id;
    rb.set(key + ".linear", nc.linear);
    rb.set(key + ".exact", nc.exact);
    if (nc.certificate) rb.set_vector(key + ".certificate", *nc.certificate);
  }
}

struct CommandArgs {
  std::string config_path;
  double tol = -1.0;  // <0: use the config value
  bool full_policy = false;
  int jobs = 1;
  std::string grid;
  int refine = -1;
  double compare_tol = 1e-5;
  std::string path;
  std::string ray;
};

int cmd_validate(const CommandArgs& a, std::ostream& out) {
  const std::string text = read_file(a.config_path);
  const Config cfg = load_config(text);
  ReportBuilder rb;
  fill_common(rb, "validate", text);
  rb.set("verdict", std::string("valid"));
  rb.set("tree.nodes", cfg.tree.node_count());
  rb.set("tree.depth", cfg.tree.depth());
  rb.set("tree.leaves", static_cast<int>(cfg.tree.leaves().size()));
  rb.set("tree.price_dim", cfg.tree.price_dim());
  rb.set("model.preset", preset_name(cfg.model.preset));
  rb.set("model.d", cfg.model.d);
  write_file(a.config_path + ".report", rb.text());
  out << "valid: " << cfg.tree.node_count() << " nodes, depth " << cfg.tree.depth()
      << ", preset " << preset_name(cfg.model.preset) << "\n";
  return kExitOk;
}

int cmd_check_na(const CommandArgs& a, std::ostream& out) {
  const std::string text = read_file(a.config_path);
  const Config cfg = load_config(text);
  const NAReport na = check_global_na(cfg.tree, cfg.model, a.jobs);
  ReportBuilder rb;
  fill_common(rb, "check-na", text);
  fill_na(rb, cfg.tree, na);
  write_file(a.config_path + ".report", rb.text());
  out << "no-arbitrage: " << (na.pass ? "PASS" : "FAIL");
  if (!na.all_exact) out << " (sampled verdict at some node)";
  out << "\n";
  for (const auto& nc : na.nodes) {
    if (!nc.linear && nc.certificate) {
      out << "  certificate at node '" << cfg.tree.node(nc.node).id << "': ray";
      for (double v : *nc.certificate) out << ' ' << fmt_short(v);
      out << "\n";
    }
  }
  if (!na.pass) return kExitNoArbitrage;
  return na.all_exact ? kExitOk : kExitSampledNA;
}

int cmd_solve(const CommandArgs& a, std::ostream& out) {
  const std::string text = read_file(a.config_path);
  const Config cfg = load_config(text);
  SolveOptions opt;
  opt.tol = a.tol > 0.0 ? a.tol : cfg.solver.tol;
  opt.full_policy = a.full_policy;
  opt.memo_cap = cfg.solver.caps.memo;
  opt.jobs = a.jobs;

  const auto t0 = std::chrono::steady_clock::now();
  ReportBuilder rb;
  fill_common(rb, "solve", text);
  rb.set("tol", opt.tol);
  try {
    SolveReport report = backward_solve(cfg.tree, cfg.model, opt);
    report.verify = forward_verify(cfg.tree, cfg.model, report, 10.0 * opt.tol);

    fill_na(rb, cfg.tree, report.na);
    rb.set("value", report.value);
    for (const auto& [node, h] : report.policy.decisions)
      rb.set_vector("policy." + cfg.tree.node(node).id, h);
    for (const auto& [node, mi] : report.worst_measure)
      rb.set("worst_measure." + cfg.tree.node(node).id, mi);
    rb.set_vector("cert.h0", report.certificate.h0);
    rb.set("cert.eps", report.certificate.eps);
    rb.set("cert.c", report.certificate.c);
    rb.set("cert.value", report.certificate_value);
    rb.set("stats.one_step_solves", static_cast<long long>(report.stats.one_step_solves));
    rb.set("stats.memo_hits", static_cast<long long>(report.stats.memo_hits));
    rb.set("stats.leaf_evals", static_cast<long long>(report.stats.leaf_evals));
    const VerifyRecord& vr = *report.verify;
    rb.set("verify.verdict", std::string(vr.pass ? "PASS" : "FAIL"));
    rb.set("verify.eps", vr.eps);
    rb.set("verify.margin_measures", vr.margin_measures);
    rb.set("verify.margin_alternatives", vr.margin_alternatives);
    rb.set("verify.measures_sampled", vr.measures_sampled);
    write_file(a.config_path + ".report", rb.text());

    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    out << "value = " << fmt_g17(report.value) << "\n";
    out << "verify: " << (vr.pass ? "PASS" : "FAIL")
        << " (margins " << fmt_short(vr.margin_measures) << ", "
        << fmt_short(vr.margin_alternatives) << ")\n";
    out << "solved in " << fmt_short(dt.count()) << "s, "
        << report.stats.one_step_solves << " one-step solves, "
        << report.stats.memo_hits << " memo hits\n";
    if (!vr.pass) return kExitVerification;
    return report.na.all_exact ? kExitOk : kExitSampledNA;
  } catch (const NoArbitrageError& e) {
    fill_na(rb, cfg.tree, e.report);
    write_file(a.config_path + ".report", rb.text());
    throw;
  }
}

int cmd_oracle(const CommandArgs& a, std::ostream& out) {
  const std::string text = read_file(a.config_path);
  const Config cfg = load_config(text);
  GridSpec grid{cfg.solver.grid_lo, cfg.solver.grid_hi, cfg.solver.grid_step,
                cfg.solver.grid_refine};
  if (!a.grid.empty()) {
    const auto g = parse_csv_doubles(a.grid, "--grid");
    if (g.size() != 3) throw ConfigError("--grid: expected lo,hi,step");
    grid.lo = g[0];
    grid.hi = g[1];
    grid.step = g[2];
  }
  if (a.refine >= 0) grid.refine = a.refine;

  const OracleResult res = brute_force_value(cfg.tree, cfg.model, grid,
                                             cfg.solver.caps.grid);
  ReportBuilder rb;
  fill_common(rb, "oracle", text);
  rb.set("oracle.value", res.value);
  rb.set("oracle.evaluations", static_cast<long long>(res.evaluations));
  for (const auto& [node, h] : res.policy.decisions)
    rb.set_vector("oracle.policy." + cfg.tree.node(node).id, h);
  out << "oracle value = " << fmt_g17(res.value) << " (" << res.evaluations
      << " grid evaluations)\n";

  // Cross-check against an existing solve report, when present.
  int code = kExitOk;
  std::ifstream existing(a.config_path + ".report");
  if (existing) {
    std::ostringstream ss;
    ss << existing.rdbuf();
    const auto kv = parse_report(ss.str());
    const auto it = kv.find("value");
    if (it != kv.end() && kv.count("command") && kv.at("command") == "solve") {
      SolveReport dp;
      dp.value = std::stod(it->second);
      for (const auto& [k, v] : kv) {
        if (k.rfind("policy.", 0) != 0) continue;
        const std::string id = k.substr(7);
        for (int i = 0; i < cfg.tree.node_count(); ++i) {
          if (cfg.tree.node(i).id != id) continue;
          std::vector<double> h;
          std::stringstream vs(v);
          double x;
          while (vs >> x) h.push_back(x);
          dp.policy.decisions[i] = std::move(h);
        }
      }
      const DiffRecord diff = compare(dp, res, cfg.tree, cfg.model, a.compare_tol);
      rb.set("compare.value_gap", diff.value_gap);
      rb.set("compare.policy_phi_gap", diff.policy_phi_gap);
      rb.set("compare.tol", a.compare_tol);
      rb.set("compare.verdict", std::string(diff.pass ? "PASS" : "FAIL"));
      out << "compare vs solve report: " << (diff.pass ? "PASS" : "FAIL")
          << " (value gap " << fmt_short(diff.value_gap) << ", policy gap "
          << fmt_short(diff.policy_phi_gap) << ")\n";
      if (!diff.pass) code = kExitVerification;
    }
  }
  write_file(a.config_path + ".oracle.report", rb.text());
  return code;
}

int cmd_horizon(const CommandArgs& a, std::ostream& out) {
  const std::string text = read_file(a.config_path);
  const Config cfg = load_config(text);
  if (a.path.empty() || a.ray.empty())
    throw ConfigError("horizon requires --path and --ray");
  PathPrefix prefix;
  for (double v : parse_csv_doubles(a.path, "--path"))
    prefix.push_back(static_cast<int>(v));
  if (static_cast<int>(prefix.size()) != cfg.tree.depth())
    throw ConfigError("--path: expected " + std::to_string(cfg.tree.depth()) +
                      " steps to reach a leaf");
  std::vector<double> ray = parse_csv_doubles(a.ray, "--ray");
  const int n = cfg.model.d * cfg.tree.depth();
  if (static_cast<int>(ray.size()) != n)
    throw ConfigError("--ray: expected " + std::to_string(n) + " coordinates");

  const ConcaveExpr psi = compile_preset(cfg.model, cfg.tree, prefix);
  const double value = psi.horizon().evaluate(ray);
  ReportBuilder rb;
  fill_common(rb, "horizon", text);
  rb.set("horizon.value", value);
  rb.set_vector("horizon.ray", ray);
  write_file(a.config_path + ".report", rb.text());
  out << fmt_g17(value) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust scenario-tree utility maximization"};
  app.require_subcommand(1);

  CommandArgs a;
  auto* validate = app.add_subcommand("validate", "Load and validate a configuration");
  validate->add_option("config", a.config_path, "configuration file")->required();

  auto* checkna = app.add_subcommand("check-na", "Check the no-arbitrage condition");
  checkna->add_option("config", a.config_path)->required();
  checkna->add_option("--jobs", a.jobs, "worker cap for per-node checks");

  auto* solve = app.add_subcommand("solve", "Solve the robust maximization problem");
  solve->add_option("config", a.config_path)->required();
  solve->add_option("--tol", a.tol, "value tolerance (overrides the config)");
  solve->add_flag("--full-policy", a.full_policy,
                  "also record decisions inside polar subtrees");
  solve->add_option("--jobs", a.jobs, "worker cap");

  auto* oracle = app.add_subcommand("oracle", "Brute-force grid cross-check");
  oracle->add_option("config", a.config_path)->required();
  oracle->add_option("--grid", a.grid, "lo,hi,step");
  oracle->add_option("--refine", a.refine, "refinement passes");
  oracle->add_option("--compare-tol", a.compare_tol,
                     "tolerance for comparison against a solve report");

  auto* horizon = app.add_subcommand("horizon", "Evaluate a payoff horizon along a ray");
  horizon->add_option("config", a.config_path)->required();
  horizon->add_option("--path", a.path, "comma-separated child positions to a leaf");
  horizon->add_option("--ray", a.ray, "comma-separated ray coordinates");

  std::vector<const char*> argv{"robustdp"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (validate->parsed()) return cmd_validate(a, out);
    if (checkna->parsed()) return cmd_check_na(a, out);
    if (solve->parsed()) return cmd_solve(a, out);
    if (oracle->parsed()) return cmd_oracle(a, out);
    if (horizon->parsed()) return cmd_horizon(a, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NoArbitrageError& e) {
    err << "no-arbitrage check failed:\n";
    for (const auto& nc : e.report.nodes)
      if (!nc.linear && nc.certificate) {
        err << "  node index " << nc.node << ": certificate ray";
        for (double v : *nc.certificate) err << ' ' << fmt_short(v);
        err << "\n";
      }
    return kExitNoArbitrage;
  } catch (const NonlinearConeError& e) {
    err << "nonlinear one-step cone at node '" << e.node_id << "', certificate:";
    for (double v : e.certificate) err << ' ' << fmt_short(v);
    err << "\n";
    return kExitNoArbitrage;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return kExitCaps;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << "\n";
    return kExitVerification;
  } catch (const SolveError& e) {
    err << "solve error: " << e.what() << "\n";
    return kExitVerification;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  }
  err << "no subcommand\n";
  return kExitConfig;
}

}  // namespace robustdp
