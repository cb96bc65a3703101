#include "nldirac/workbench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "nldirac/branch.hpp"
#include "nldirac/clifford.hpp"
#include "nldirac/constants.hpp"
#include "nldirac/testspinor.hpp"

namespace nld {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

json config_json(const RunConfig& c) {
  json j;
  j["operation"] = c.operation;
  j["dimension"] = c.m;
  j["cutoff"] = c.K;
  j["n_grid"] = c.n_grid;
  j["nonlinearity"] = {{"kind", c.nl.kind}, {"alpha", c.nl.alpha}, {"p", c.nl.p}, {"q", c.nl.q}};
  j["lambda"] = c.lambda ? json(*c.lambda) : json(nullptr);
  j["lambda_grid"] = c.lambda_grid;
  j["lambdas"] = c.lambdas;
  j["second_near"] = c.second_near;
  j["eps_sweep"] = c.eps_sweep;
  j["weyl_lambda"] = c.weyl_lambda;
  j["suite"] = c.suite;
  j["tolerances"] = {{"grad_tol", c.tol.grad_tol}, {"fiber_tol", c.tol.fiber_tol},
                     {"max_iter", c.tol.max_iter}};
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["guard"] = c.guard;
  return j;
}

DescentOptions descent_options(const RunConfig& c) {
  DescentOptions o;
  o.grad_tol = c.tol.grad_tol;
  o.max_iter = c.tol.max_iter;
  o.fiber.inner_tol = c.tol.fiber_tol;
  o.guard = false;  // reported through flags and the exit code
  return o;
}

EigenTable make_table(const RunConfig& c) { return EigenTable(c.m, c.K, c.n_grid); }

const std::vector<std::string> kBranchColumns{"lambda", "level", "energy", "residual",
                                              "below_gamma_crit", "flags"};

struct Outcome {
  CsvTable results{{}};
  std::vector<std::pair<std::string, CsvTable>> plots;
  json diagnostics = json::array();
  json verdicts;
  bool guard = false;
  bool failure = false;
  std::string summary;
};

void branch_row(CsvTable& t, const BranchPoint& p, const std::vector<std::string>& extra = {}) {
  std::vector<std::string> flags = p.flags;
  flags.insert(flags.end(), extra.begin(), extra.end());
  t.row().add(p.lambda).add(level_name(p)).add(p.energy).add(p.residual_l2).add(p.below_gamma_crit)
      .add(join(flags, ";"));
}

json point_json(const BranchPoint& p) {
  return {{"lambda", p.lambda},       {"level", level_name(p)},      {"energy", p.energy},
          {"residual", p.residual_l2}, {"iterations", p.iterations}, {"gradient_norm", p.gradient_norm},
          {"init", p.init},           {"kernel_point", p.kernel_point}, {"unique", p.unique},
          {"flags", p.flags}};
}

Outcome op_solve(const RunConfig& c) {
  Outcome o;
  o.results = CsvTable(kBranchColumns);
  CsvTable plot({"lambda", "branch_id", "energy"});
  const EigenTable t = make_table(c);
  const Nonlinearity nl = make_nonlinearity(c.m, c.nl);
  std::vector<double> lams = c.lambdas;
  if (c.lambda) lams.insert(lams.begin(), *c.lambda);
  int guards = 0;
  for (double lam : lams) {
    try {
      BranchPoint p = minimize_M(split(t, lam), nl, descent_options(c));
      std::vector<std::string> extra;
      if (!p.below_gamma_crit) {
        extra.push_back("guard-violation");
        ++guards;
      }
      if (p.kernel_point) extra.push_back("kernel-point");
      branch_row(o.results, p, extra);
      plot.row().add(lam).add(level_name(p)).add(p.energy);
      o.diagnostics.push_back(point_json(p));
    } catch (const Error& e) {
      o.failure = true;
      o.results.row().add(lam).add("least").add(std::nan("")).add(std::nan("")).add(false)
          .add("solver-failure");
      o.diagnostics.push_back({{"lambda", lam}, {"error", e.what()}});
    }
  }
  o.guard = guards > 0;
  o.plots.emplace_back("branch.csv", std::move(plot));
  o.summary = std::to_string(lams.size()) + " point(s), " + std::to_string(guards) +
              " guard violation(s)";
  return o;
}

Outcome op_branch(const RunConfig& c) {
  Outcome o;
  o.results = CsvTable(kBranchColumns);
  CsvTable plot({"lambda", "branch_id", "energy"});
  SweepConfig s;
  s.m = c.m;
  s.K = c.K;
  s.n_grid = c.n_grid;
  s.lambdas = c.lambdas;
  if (c.lambda) s.lambdas.push_back(*c.lambda);
  s.second_near = c.second_near;
  s.threads = c.threads;
  s.descent = descent_options(c);
  const SweepTable tab = branch_sweep(s, make_nonlinearity(c.m, c.nl));
  int guards = 0, fails = 0;
  for (const auto& r : tab.rows) {
    if (!r.ok) {
      ++fails;
      o.results.row().add(r.point.lambda).add(level_name(r.point)).add(std::nan(""))
          .add(std::nan("")).add(false).add("solver-failure");
      o.diagnostics.push_back({{"lambda", r.point.lambda}, {"level", level_name(r.point)},
                               {"error", r.error}});
      continue;
    }
    if (!r.point.below_gamma_crit) ++guards;
    branch_row(o.results, r.point);
    plot.row().add(r.point.lambda).add(level_name(r.point)).add(r.point.energy);
    json d = point_json(r.point);
    d["interval"] = r.interval;
    o.diagnostics.push_back(d);
  }
  o.guard = guards > 0;
  o.failure = fails > 0;
  o.plots.emplace_back("branch.csv", std::move(plot));
  o.summary = std::to_string(tab.rows.size()) + " row(s), " + std::to_string(guards) +
              " guard violation(s), " + std::to_string(fails) + " failure(s), monotone " +
              (tab.monotone ? "yes" : "no");
  return o;
}

Outcome op_testspinor(const RunConfig& c) {
  Outcome o;
  o.results = CsvTable({"eps", "l2", "l2star", "dirac_energy", "free_energy", "dual_phi",
                        "dual_residual", "resolution_flag"});
  CsvTable plot({"eps", "gamma_crit_gap", "l2_ratio"});
  const EigenTable t = make_table(c);
  const SpectralSplit sp = split(t, c.lambda.value_or(0.5));
  const std::vector<double> sweep = c.eps_sweep.empty() ? default_eps_sweep() : c.eps_sweep;
  std::vector<std::pair<double, double>> l2, dphi, dres, gap;
  const double gc = gamma_crit(c.m);
  for (double eps : sweep) {
    TestSpinorParams p;
    p.eps = eps;
    const EnergyReport r = energy_report(t, sp, build_test_spinor(t, p), eps);
    o.results.row().add(eps).add(r.l2).add(r.l2star).add(r.dirac_energy).add(r.free_energy)
        .add(r.dual_phi).add(r.dual_residual).add(r.resolution_flag);
    plot.row().add(eps).add(gc - r.free_energy).add(r.l2 / (eps * std::abs(std::log(eps))));
    l2.push_back({eps, r.l2});
    dphi.push_back({eps, r.dual_phi});
    dres.push_back({eps, r.dual_residual});
    gap.push_back({eps, std::abs(gc - r.free_energy)});
  }
  if (sweep.size() >= 6) {
    auto fit_json = [](const AsymptoticFit& f) {
      return json{{"a", f.a}, {"b", f.b}, {"c", f.c}, {"residual", f.residual}};
    };
    o.diagnostics.push_back({{"fit", "l2"}, {"value", fit_json(asymptotic_fit(l2))}});
    o.diagnostics.push_back({{"fit", "dual_phi"}, {"value", fit_json(asymptotic_fit(dphi, 0))}});
    o.diagnostics.push_back({{"fit", "dual_residual"}, {"value", fit_json(asymptotic_fit(dres, 0))}});
    o.diagnostics.push_back({{"fit", "gamma_crit_gap"}, {"value", fit_json(asymptotic_fit(gap, 0))}});
  }
  o.plots.emplace_back("testspinor.csv", std::move(plot));
  o.summary = std::to_string(sweep.size()) + " eps value(s)";
  return o;
}

Outcome op_multiplicity(const RunConfig& c) {
  Outcome o;
  o.results = CsvTable({"lambda", "nu", "count"});
  const EigenTable t = make_table(c);
  const double nu = nu_window(c.m, t.grid().volume());
  std::vector<double> lams = c.lambdas;
  if (c.lambda) lams.insert(lams.begin(), *c.lambda);
  for (double lam : lams) o.results.row().add(lam).add(nu).add(multiplicity_count(t, lam, nu));
  o.summary = std::to_string(lams.size()) + " window(s), nu = " + csv_number(nu);
  return o;
}

Outcome op_spectrum(const RunConfig& c) {
  Outcome o;
  o.results = CsvTable({"value", "multiplicity"});
  const EigenTable t = make_table(c);
  for (const auto& e : t.spectrum()) o.results.row().add(e.value).add(e.multiplicity);
  o.summary = std::to_string(t.spectrum().size()) + " distinct eigenvalue(s)";
  return o;
}

Outcome op_weyl(const RunConfig& c) {
  Outcome o;
  o.results = CsvTable({"Lambda", "d_plus", "d_minus", "ratio", "c_m_vol"});
  CsvTable plot({"Lambda", "d_plus", "ratio"});
  const EigenTable t = make_table(c);
  const WeylCounts w = weyl_counts(t, c.weyl_lambda);
  o.results.row().add(c.weyl_lambda).add(w.d_plus).add(w.d_minus).add(w.ratio).add(w.c_m_vol);
  for (int L = 1; L <= static_cast<int>(c.weyl_lambda); ++L) {
    const WeylCounts s = weyl_counts(t, L);
    plot.row().add(static_cast<double>(L)).add(s.d_plus).add(s.ratio);
  }
  o.plots.emplace_back("weyl.csv", std::move(plot));
  o.summary = "d+ = " + std::to_string(w.d_plus) + ", ratio " + csv_number(w.ratio);
  return o;
}

Outcome op_clifford(const RunConfig& c) {
  Outcome o;
  o.results = CsvTable({"m", "N", "anticommutator", "skew", "unitarity", "norm_identity"});
  const CliffordRep rep = build_rep(c.m);
  const CliffordResiduals r = check_rep(rep, 1000, c.seed);
  o.results.row().add(c.m).add(rep.N).add(r.anticommutator).add(r.skew).add(r.unitarity)
      .add(r.norm_identity);
  o.summary = "worst residual " + csv_number(r.worst());
  return o;
}

Outcome op_accept(const RunConfig& c, const AcceptOptions& opt) {
  Outcome o;
  o.results = CsvTable({"criterion", "check", "pass", "measured", "tolerance", "relation"});
  AcceptOptions a = opt;
  a.threads = c.threads;
  const AcceptReport rep = accept(c.suite, a);
  o.verdicts = json::array();
  for (const auto& cr : rep.criteria) {
    json checks = json::array();
    for (const auto& k : cr.checks) {
      o.results.row().add(cr.id).add(k.name).add(k.pass).add(k.measured).add(k.tolerance)
          .add(k.relation);
      checks.push_back({{"name", k.name}, {"pass", k.pass}, {"measured", k.measured},
                        {"tolerance", k.tolerance}, {"relation", k.relation}, {"detail", k.detail}});
    }
    o.verdicts.push_back({{"criterion", cr.id}, {"title", cr.title}, {"pass", cr.pass()},
                          {"seconds", cr.seconds}, {"checks", checks}, {"info", cr.info}});
  }
  o.failure = !rep.all_pass();
  o.summary = join(format_report(rep), "\n");
  return o;
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << body;
}

}  // namespace

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) v = 0;  // no negative zero
  char b[40];
  std::snprintf(b, sizeof b, "%.11e", v);
  return b;
}

CsvTable::CsvTable(std::vector<std::string> columns) : cols_(std::move(columns)) {}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}
CsvTable& CsvTable::add(double v) {
  rows_.back().push_back(csv_number(v));
  return *this;
}
CsvTable& CsvTable::add(long long v) {
  rows_.back().push_back(std::to_string(v));
  return *this;
}
CsvTable& CsvTable::add(bool v) {
  rows_.back().push_back(v ? "true" : "false");
  return *this;
}
CsvTable& CsvTable::add(const std::string& s) {
  rows_.back().push_back(quote(s));
  return *this;
}

std::string CsvTable::str() const {
  std::string out = join(cols_, ",") + "\n";
  for (const auto& r : rows_) {
    if (r.size() != cols_.size()) throw ShapeError("csv row width does not match the header");
    out += join(r, ",") + "\n";
  }
  return out;
}

fs::path resolve_output(const std::string& output) {
  fs::path p(output);
  if (p.is_relative())
    if (const char* root = std::getenv("NLD_OUTPUT_ROOT"); root && *root) p = fs::path(root) / p;
  return p;
}

RunResult run(const RunConfig& cfg, const AcceptOptions& accept_opt) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  res.dir = resolve_output(cfg.output);
  fs::create_directories(res.dir / "plotdata");

  Outcome o;
  std::string error;
  try {
    const std::string& op = cfg.operation;
    if (op == "solve") o = op_solve(cfg);
    else if (op == "branch") o = op_branch(cfg);
    else if (op == "testspinor") o = op_testspinor(cfg);
    else if (op == "multiplicity") o = op_multiplicity(cfg);
    else if (op == "spectrum") o = op_spectrum(cfg);
    else if (op == "weyl") o = op_weyl(cfg);
    else if (op == "clifford") o = op_clifford(cfg);
    else o = op_accept(cfg, accept_opt);
  } catch (const std::exception& e) {
    error = e.what();
    o.failure = true;
  }
  res.exit_code = o.failure ? kExitSolver : o.guard && cfg.guard ? kExitGuard : kExitOk;
  res.summary = error.empty() ? o.summary : "error: " + error;

  if (error.empty()) {
    write_file(res.dir / "results.csv", o.results.str());
    res.files.push_back(res.dir / "results.csv");
    for (const auto& [name, table] : o.plots) {
      write_file(res.dir / "plotdata" / name, table.str());
      res.files.push_back(res.dir / "plotdata" / name);
    }
  }
  json m;
  m["tool"] = "nldirac";
  m["version"] = kToolVersion;
  m["csv_schema"] = kCsvSchema;
  m["config"] = config_json(cfg);
  m["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m["exit_code"] = res.exit_code;
  if (!error.empty()) m["error"] = error;
  m["diagnostics"] = o.diagnostics;
  m["verdicts"] = o.verdicts.is_null() ? json::array() : o.verdicts;
  json files = json::array();
  for (const auto& f : res.files) files.push_back(fs::relative(f, res.dir).generic_string());
  m["files"] = files;
  write_file(res.dir / "manifest.json", m.dump(2) + "\n");
  res.files.push_back(res.dir / "manifest.json");
  return res;
}

RunResult run_file(const std::string& config_path) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    RunResult r;
    r.exit_code = kExitConfig;
    r.summary = e.what();
    return r;
  }
  return run(cfg);
}

}  // namespace nld
