#include "nldirac/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace nld {

namespace {

std::string position(const std::string& origin, int line, int column) {
  std::ostringstream os;
  os << origin;
  if (line > 0) os << ':' << line << ':' << column;
  return os.str();
}

struct Violation {
  std::string key;
  std::string msg;
};

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::optional<Violation> check(const RunConfig& c) {
  const auto ops = operations();
  if (std::find(ops.begin(), ops.end(), c.operation) == ops.end())
    return Violation{"operation", "unknown operation '" + c.operation + "'"};
  if (c.m < 2 || c.m > 6) return Violation{"dimension", "dimension must be in [2, 6]"};
  if (c.K < 1) return Violation{"cutoff", "cutoff must be >= 1"};
  if (c.n_grid != 0 && (c.n_grid % 2 != 0 || c.n_grid < 2 * c.K + 2))
    return Violation{"n_grid", "n_grid must be 0 or even and >= 2*cutoff+2 = " +
                                   std::to_string(2 * c.K + 2)};
  const double two_star = 2.0 * c.m / (c.m - 1.0);
  const auto& nl = c.nl;
  if (nl.kind != "bnd" && nl.kind != "power" && nl.kind != "log_critical")
    return Violation{"nonlinearity.kind", "unknown nonlinearity kind '" + nl.kind +
                                              "' (bnd, power, log_critical)"};
  if (nl.kind != "bnd" && !(nl.alpha > 0))
    return Violation{"nonlinearity.alpha", "nonlinearity.alpha = " + num(nl.alpha) + " must be > 0"};
  if (nl.kind == "power" && !(nl.p > 2 && nl.p < two_star))
    return Violation{"nonlinearity.p", "nonlinearity.p = " + num(nl.p) + " violates 2 < p < 2* = " +
                                           num(two_star) + " at dimension " + std::to_string(c.m)};
  if (nl.kind == "log_critical" && !(nl.q > 0 && nl.q <= 2.0 / (c.m - 1)))
    return Violation{"nonlinearity.q", "nonlinearity.q = " + num(nl.q) + " violates 0 < q <= 2/(m-1) = " +
                                           num(2.0 / (c.m - 1))};
  auto finite = [](double v) { return std::isfinite(v); };
  if (c.lambda && !finite(*c.lambda)) return Violation{"lambda", "lambda must be finite"};
  std::vector<double> all = c.lambdas;
  if (c.lambda) all.push_back(*c.lambda);
  if (std::any_of(all.begin(), all.end(), [](double l) { return l <= 0; }) &&
      (c.operation == "solve" || c.operation == "branch")) {
    const Nonlinearity n = make_nonlinearity(c.m, nl);
    if (!check_hypotheses(n, c.m).passes("f5"))
      return Violation{c.lambda && *c.lambda <= 0 ? "lambda" : "lambda_grid",
                       "lambda <= 0 needs a nonlinearity satisfying (f5); " + n.name() +
                           " does not"};
  }
  for (double l : all)
    if (l > c.K) return Violation{c.lambda ? "lambda" : "lambda_grid", "lambda exceeds cutoff"};
  if ((c.operation == "solve") && all.empty())
    return Violation{"lambda", "solve needs lambda or lambda_grid"};
  if (c.operation == "branch" && c.lambdas.empty())
    return Violation{"lambda_grid", "branch needs lambda_grid"};
  if (c.operation == "multiplicity" && all.empty())
    return Violation{"lambda", "multiplicity needs lambda or lambda_grid"};
  for (int k : c.second_near)
    if (k < 1) return Violation{"second_near", "second_near entries must be >= 1"};
  for (std::size_t i = 0; i < c.eps_sweep.size(); ++i) {
    const double e = c.eps_sweep[i];
    if (!(e > 0 && e <= std::numbers::pi / 4))
      return Violation{"eps_sweep", "eps_sweep entries must lie in (0, pi/4]"};
    if (i > 0 && !(e < c.eps_sweep[i - 1]))
      return Violation{"eps_sweep", "eps_sweep must be strictly decreasing"};
  }
  if (c.operation == "testspinor" && !c.eps_sweep.empty() && c.eps_sweep.size() < 6)
    return Violation{"eps_sweep", "eps_sweep needs at least 6 entries for the fits"};
  if (c.operation == "weyl" && (!(c.weyl_lambda > 0) || c.weyl_lambda > c.K))
    return Violation{"weyl_lambda", "weyl_lambda must lie in (0, cutoff]"};
  const std::set<std::string> suites{"clifford", "spectral", "testspinor", "variational", "branch",
                                     "all"};
  if (!suites.count(c.suite)) return Violation{"suite", "unknown suite '" + c.suite + "'"};
  if (!(c.tol.grad_tol > 0)) return Violation{"tolerances.grad_tol", "grad_tol must be > 0"};
  if (!(c.tol.fiber_tol > 0)) return Violation{"tolerances.fiber_tol", "fiber_tol must be > 0"};
  if (c.tol.max_iter < 1) return Violation{"tolerances.max_iter", "max_iter must be >= 1"};
  if (c.threads < 1) return Violation{"threads", "threads must be >= 1"};
  if (c.output.empty()) return Violation{"output", "output must not be empty"};
  return std::nullopt;
}

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& n, const std::string& msg) const {
    const auto mk = n.Mark();
    throw ConfigError(origin_, mk.line + 1, mk.column + 1, msg);
  }

  template <class T>
  T scalar(const YAML::Node& n, const std::string& key, const char* type) const {
    if (!n.IsScalar()) fail(n, key + ": expected " + type);
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, key + ": expected " + type + ", got '" + n.Scalar() + "'");
    }
  }

  template <class T>
  std::vector<T> list(const YAML::Node& n, const std::string& key, const char* type) const {
    if (!n.IsSequence()) fail(n, key + ": expected a list of " + type);
    std::vector<T> out;
    for (const auto& e : n) out.push_back(scalar<T>(e, key, type));
    return out;
  }

  void remember(const std::string& key, const YAML::Node& n) {
    const auto mk = n.Mark();
    marks_[key] = {mk.line + 1, mk.column + 1};
  }
  std::pair<int, int> mark(const std::string& key) const {
    auto it = marks_.find(key);
    return it == marks_.end() ? std::pair{0, 0} : it->second;
  }
  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::map<std::string, std::pair<int, int>> marks_;
};

}  // namespace

ConfigError::ConfigError(const std::string& origin, int line, int column, const std::string& msg)
    : Error(position(origin, line, column) + ": " + msg), line_(line), column_(column) {}

Nonlinearity make_nonlinearity(int m, const NonlinearitySpec& s) {
  if (s.kind == "bnd") return Nonlinearity::zero(m);
  if (s.kind == "power") return Nonlinearity::power(m, s.alpha, s.p);
  if (s.kind == "log_critical") return Nonlinearity::log_critical(m, s.alpha, s.q);
  throw InvalidArgument("unknown nonlinearity kind '" + s.kind + "'");
}

std::vector<std::string> operations() {
  return {"solve", "branch", "testspinor", "multiplicity", "spectrum", "weyl", "clifford", "accept"};
}

std::vector<double> parse_lambda_grid(const std::string& expr) {
  std::vector<double> parts;
  std::stringstream ss(expr);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("lambda grid '" + expr + "': bad number '" + tok + "'");
    }
    if (used != tok.size()) throw InvalidArgument("lambda grid '" + expr + "': bad number '" + tok + "'");
    parts.push_back(v);
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw InvalidArgument("lambda grid '" + expr + "': expected a:b:step");
  const double a = parts[0], b = parts[1], s = parts[2];
  if (!(s > 0) || b < a) throw InvalidArgument("lambda grid '" + expr + "': need step > 0 and b >= a");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double v = a + static_cast<double>(i) * s;
    if (v > b + 1e-12 * std::max(1.0, std::abs(b))) break;
    // snap to 12 significant digits so 0.1 + 3 * 0.05 prints as 0.25
    out.push_back(std::stod(num(std::round(v * 1e12) / 1e12)));
    if (out.size() > 100000) throw InvalidArgument("lambda grid '" + expr + "': too many points");
  }
  if (std::abs(out.back() - b) > 1e-12 * std::max(1.0, std::abs(b))) out.push_back(b);
  return out;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  Reader rd(origin);
  RunConfig c;
  if (root.IsNull()) throw ConfigError(origin, 1, 1, "empty config");
  if (!root.IsMap()) rd.fail(root, "config must be a mapping of keys to values");

  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    rd.remember(key, kv.first);
    if (key == "operation") c.operation = rd.scalar<std::string>(v, key, "a string");
    else if (key == "dimension") c.m = rd.scalar<int>(v, key, "an integer");
    else if (key == "cutoff") c.K = rd.scalar<int>(v, key, "an integer");
    else if (key == "n_grid") c.n_grid = rd.scalar<int>(v, key, "an integer");
    else if (key == "lambda") c.lambda = rd.scalar<double>(v, key, "a number");
    else if (key == "lambda_grid") {
      if (v.IsSequence()) {
        c.lambdas = rd.list<double>(v, key, "numbers");
        std::ostringstream os;
        for (std::size_t i = 0; i < c.lambdas.size(); ++i) os << (i ? "," : "") << c.lambdas[i];
        c.lambda_grid = os.str();
      } else {
        c.lambda_grid = rd.scalar<std::string>(v, key, "a:b:step or a list");
        try {
          c.lambdas = parse_lambda_grid(c.lambda_grid);
        } catch (const InvalidArgument& e) {
          rd.fail(v, e.what());
        }
      }
    } else if (key == "second_near") {
      c.second_near = v.IsSequence() ? rd.list<int>(v, key, "integers")
                                     : std::vector<int>{rd.scalar<int>(v, key, "an integer")};
    } else if (key == "eps_sweep") c.eps_sweep = rd.list<double>(v, key, "numbers");
    else if (key == "weyl_lambda") c.weyl_lambda = rd.scalar<double>(v, key, "a number");
    else if (key == "suite") c.suite = rd.scalar<std::string>(v, key, "a string");
    else if (key == "output") c.output = rd.scalar<std::string>(v, key, "a string");
    else if (key == "seed") c.seed = rd.scalar<std::uint64_t>(v, key, "a non-negative integer");
    else if (key == "threads") c.threads = rd.scalar<int>(v, key, "an integer");
    else if (key == "guard") c.guard = rd.scalar<bool>(v, key, "a boolean");
    else if (key == "nonlinearity" || key == "tolerances") {
      if (!v.IsMap()) rd.fail(v, key + ": expected a section of key: value pairs");
      for (const auto& sub : v) {
        const std::string sk = sub.first.as<std::string>();
        const std::string full = key + "." + sk;
        const YAML::Node& sv = sub.second;
        rd.remember(full, sub.first);
        if (full == "nonlinearity.kind") c.nl.kind = rd.scalar<std::string>(sv, full, "a string");
        else if (full == "nonlinearity.alpha") c.nl.alpha = rd.scalar<double>(sv, full, "a number");
        else if (full == "nonlinearity.p") c.nl.p = rd.scalar<double>(sv, full, "a number");
        else if (full == "nonlinearity.q") c.nl.q = rd.scalar<double>(sv, full, "a number");
        else if (full == "tolerances.grad_tol") c.tol.grad_tol = rd.scalar<double>(sv, full, "a number");
        else if (full == "tolerances.fiber_tol") c.tol.fiber_tol = rd.scalar<double>(sv, full, "a number");
        else if (full == "tolerances.max_iter") c.tol.max_iter = rd.scalar<int>(sv, full, "an integer");
        else rd.fail(sub.first, "unknown key '" + full + "'");
      }
    } else {
      rd.fail(kv.first, "unknown key '" + key + "'");
    }
  }
  if (auto bad = check(c)) {
    auto [line, col] = rd.mark(bad->key);
    if (line == 0 && bad->key.rfind("nonlinearity.", 0) == 0) std::tie(line, col) = rd.mark("nonlinearity");
    if (line == 0 && bad->key.rfind("tolerances.", 0) == 0) std::tie(line, col) = rd.mark("tolerances");
    throw ConfigError(origin, line, col, bad->msg);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, 0, "cannot read config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void validate(const RunConfig& cfg) {
  if (auto bad = check(cfg)) throw ConfigError(bad->key, 0, 0, bad->msg);
}

}  // namespace nld
