#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace nhtopo::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

// Recursive-descent evaluator over doubles.
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  double run() {
    const double v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_) + "' in expression '" + s_ + "'");
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  double sum() {
    double v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  double product() {
    double v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else return v;
    }
  }
  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    const double base = atom();
    if (eat('^')) return std::pow(base, unary());
    return base;
  }
  double atom() {
    skip();
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) fail("missing ')' in '" + s_ + "'");
      return v;
    }
    if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "pi") return kPi;
      if (name == "sqrt" || name == "cos" || name == "sin" || name == "exp" || name == "log") {
        if (!eat('(')) fail("expected '(' after " + name);
        const double a = sum();
        if (!eat(')')) fail("missing ')' after " + name + " argument");
        if (name == "sqrt") return std::sqrt(a);
        if (name == "cos") return std::cos(a);
        if (name == "sin") return std::sin(a);
        if (name == "exp") return std::exp(a);
        return std::log(a);
      }
      fail("unknown name '" + name + "' in '" + s_ + "'");
    }
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number in '" + s_ + "'");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double number(const RawConfig& raw, const std::string& sec, const std::string& key, double fallback) {
  const auto v = raw.get(sec, key);
  if (!v) return fallback;
  try {
    return evaluate(*v);
  } catch (const Error& e) {
    fail(sec + "." + key + ": " + e.what());
  }
}

std::vector<double> list(const RawConfig& raw, const std::string& sec, const std::string& key) {
  const auto v = raw.get(sec, key);
  if (!v) return {};
  try {
    return evaluate_list(*v);
  } catch (const Error& e) {
    fail(sec + "." + key + ": " + e.what());
  }
}

int integer(const RawConfig& raw, const std::string& sec, const std::string& key, int fallback) {
  const double v = number(raw, sec, key, fallback);
  if (v != std::round(v)) fail(sec + "." + key + " must be an integer");
  return static_cast<int>(v);
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"model", {"L", "lambda", "lambda_phase", "cooperativity", "theta", "delta", "gamma_eff"}},
      {"raw", {"J", "Gamma", "theta", "gamma", "kappa", "omega_c", "omega_d"}},
      {"analysis",
       {"tasks", "N", "N_k", "omega", "gamma", "drive_sites", "N_list", "delta_list", "w", "realizations",
        "tol_zero", "tol_area", "tol_norm", "tol_rec"}},
      {"output", {"dir", "formats", "seed"}},
  };
  return s;
}

}  // namespace

double evaluate(const std::string& expr) {
  const std::string t = trim(expr);
  if (t.empty()) fail("empty expression");
  return Parser(t).run();
}

std::vector<double> evaluate_list(const std::string& text) {
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') fail("unterminated list '" + t + "'");
    t = trim(t.substr(1, t.size() - 2));
    if (t.empty()) return {};
    std::vector<double> out;
    for (const auto& item : split_top(t, ',')) out.push_back(evaluate(item));
    return out;
  }
  const auto parts = split_top(t, ':');
  if (parts.size() == 3) {
    const double lo = evaluate(parts[0]), hi = evaluate(parts[1]), step = evaluate(parts[2]);
    if (!(step > 0.0)) fail("range step must be positive in '" + t + "'");
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long j = 0; j <= count; ++j) out.push_back(lo + static_cast<double>(j) * step);
    return out;
  }
  if (parts.size() != 1) fail("malformed list or range '" + t + "'");
  std::vector<double> out;
  for (const auto& item : split_top(t, ',')) out.push_back(evaluate(item));
  return out;
}

RawConfig RawConfig::parse(const std::string& text) {
  RawConfig c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) fail("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      c.data_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty()) fail("line " + std::to_string(lineno) + ": key outside of a section");
    c.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

RawConfig RawConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::optional<std::string> RawConfig::get(const std::string& section, const std::string& key) const {
  const auto s = data_.find(section);
  if (s == data_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

void RawConfig::set(const std::string& section, const std::string& key, const std::string& value) {
  const auto s = schema().find(section);
  if (s == schema().end()) fail("unknown section '" + section + "'");
  if (!s->second.count(key)) fail("unknown key '" + section + "." + key + "'");
  data_[section][key] = value;
}

void RawConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) fail("override '" + assignment + "' must look like path.key=value");
  const std::string path = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const auto dot = path.find('.');
  if (dot == std::string::npos) {
    if (path != "analysis") fail("override path '" + path + "' needs the form section.key");
    set("analysis", "tasks", value);
    return;
  }
  std::string section = path.substr(0, dot);
  // Parameter overrides address "model" even when the file uses [raw].
  if (section == "model" && !has_section("model") && has_section("raw")) section = "raw";
  set(section, path.substr(dot + 1), value);
}

const char* to_string(Task t) noexcept {
  switch (t) {
    case Task::spectrum: return "spectrum";
    case Task::winding: return "winding";
    case Task::svd: return "svd";
    case Task::gssh: return "gssh";
    case Task::response: return "response";
    case Task::disorder: return "disorder";
    case Task::sweep: return "sweep";
    case Task::eigen: return "eigen";
    case Task::gain: return "gain";
  }
  return "unknown";
}

bool RunConfig::wants(Task t) const { return std::find(tasks.begin(), tasks.end(), t) != tasks.end(); }

bool RunConfig::format(const std::string& f) const {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

int RunConfig::grid() const {
  const int want = nk > 0 ? nk : default_grid_size(n);
  return want + (want % 2);
}

RunConfig resolve(const RawConfig& raw) {
  RunConfig rc;
  const bool reduced = raw.has_section("model");
  const bool physical = raw.has_section("raw");
  if (reduced == physical) fail("exactly one of [model] or [raw] must be present");

  if (reduced) {
    const int range = integer(raw, "model", "L", 1);
    if (range < 1) fail("model.L must be >= 1");
    const auto lam = list(raw, "model", "lambda");
    const auto phase = list(raw, "model", "lambda_phase");
    const auto coop = list(raw, "model", "cooperativity");
    const auto theta = list(raw, "model", "theta");
    const auto need = static_cast<std::size_t>(range);
    if (lam.size() != need) fail("model.lambda must have L = " + std::to_string(range) + " entries");
    if (coop.size() != need) fail("model.cooperativity must have L = " + std::to_string(range) + " entries");
    if (theta.size() != need) fail("model.theta must have L = " + std::to_string(range) + " entries");
    if (!phase.empty() && phase.size() != need) fail("model.lambda_phase must have L entries when given");
    rc.params.range = range;
    for (std::size_t l = 0; l < need; ++l) {
      rc.params.lambda.push_back(std::polar(lam[l], phase.empty() ? 0.0 : phase[l]));
      if (!(coop[l] >= 0.0)) fail("model.cooperativity entries must be >= 0");
    }
    rc.params.cooperativity = coop;
    rc.params.theta = theta;
    rc.params.delta = number(raw, "model", "delta", 0.0);
    rc.params.gamma_eff = number(raw, "model", "gamma_eff", 1.0);
    if (!(rc.params.gamma_eff > 0.0)) throw Error(ErrorCode::NonPositiveGammaEff, "model.gamma_eff must be > 0");
  } else {
    RawRates r;
    for (double x : list(raw, "raw", "J")) r.hopping.push_back(x);
    r.reservoir = list(raw, "raw", "Gamma");
    r.theta = list(raw, "raw", "theta");
    r.waveguide_decay = number(raw, "raw", "gamma", 0.0);
    r.pump = number(raw, "raw", "kappa", 0.0);
    r.omega_cavity = number(raw, "raw", "omega_c", 0.0);
    r.omega_drive = number(raw, "raw", "omega_d", 0.0);
    rc.params = reduce(r);
    rc.from_raw = true;
  }

  const std::string tasks = raw.get("analysis", "tasks").value_or("spectrum, winding");
  for (auto item : split_top(tasks, ',')) {
    if (!item.empty() && item.front() == '[') item.erase(0, 1);
    if (!item.empty() && item.back() == ']') item.pop_back();
    item = trim(item);
    bool found = false;
    for (Task t : {Task::spectrum, Task::winding, Task::svd, Task::gssh, Task::response, Task::disorder,
                   Task::sweep, Task::eigen, Task::gain}) {
      if (item == to_string(t)) {
        rc.tasks.push_back(t);
        found = true;
      }
    }
    if (!found) fail("analysis.tasks: unknown task '" + item + "'");
  }

  rc.n = integer(raw, "analysis", "N", 50);
  if (rc.n <= rc.params.range) fail("analysis.N must exceed L");
  rc.nk = integer(raw, "analysis", "N_k", 0);
  if (rc.nk != 0 && rc.nk < min_grid_size(rc.params.range)) {
    fail("analysis.N_k must be >= " + std::to_string(min_grid_size(rc.params.range)));
  }
  rc.omega = number(raw, "analysis", "omega", 0.0);
  rc.gamma = number(raw, "analysis", "gamma", 0.2);
  if (!(rc.gamma >= 0.0)) fail("analysis.gamma must be >= 0");
  if (raw.get("analysis", "drive_sites")) {
    rc.drive_sites.clear();
    for (double s : list(raw, "analysis", "drive_sites")) {
      if (s != std::round(s) || s < 1 || s > rc.n) fail("analysis.drive_sites entries must be integers in [1, N]");
      rc.drive_sites.push_back(static_cast<int>(s));
    }
  }
  for (double s : list(raw, "analysis", "N_list")) {
    if (s != std::round(s) || s <= rc.params.range) fail("analysis.N_list entries must be integers > L");
    rc.n_list.push_back(static_cast<int>(s));
  }
  rc.delta_list = list(raw, "analysis", "delta_list");
  rc.disorder.w = number(raw, "analysis", "w", 0.0);
  if (!(rc.disorder.w >= 0.0)) fail("analysis.w must be >= 0");
  rc.disorder.realizations = integer(raw, "analysis", "realizations", 100);
  if (rc.disorder.realizations < 1) fail("analysis.realizations must be >= 1");
  rc.tol.zero = number(raw, "analysis", "tol_zero", rc.tol.zero);
  rc.tol.area = number(raw, "analysis", "tol_area", rc.tol.area);
  rc.tol.norm = number(raw, "analysis", "tol_norm", rc.tol.norm);
  rc.tol.rec = number(raw, "analysis", "tol_rec", rc.tol.rec);

  if ((rc.wants(Task::sweep)) && rc.delta_list.empty()) fail("analysis.delta_list is required by the sweep task");
  if ((rc.wants(Task::sweep) || rc.wants(Task::gain)) && rc.n_list.empty()) {
    fail("analysis.N_list is required by the sweep and gain tasks");
  }

  rc.out_dir = raw.get("output", "dir").value_or("out");
  if (const auto f = raw.get("output", "formats")) {
    rc.formats.clear();
    for (auto item : split_top(*f, ',')) {
      if (item != "csv" && item != "json" && item != "svg") fail("output.formats: unknown format '" + item + "'");
      rc.formats.push_back(item);
    }
  }
  // Seeds are read as integers so that values above 2^53 survive intact.
  if (const auto s = raw.get("output", "seed")) {
    const bool digits = !s->empty() && std::all_of(s->begin(), s->end(), [](unsigned char ch) { return std::isdigit(ch); });
    if (!digits || s->size() > 20) fail("output.seed must be a non-negative integer");
    try {
      rc.seed = std::stoull(*s);
    } catch (const std::out_of_range&) {
      fail("output.seed must fit in 64 bits");
    }
  }
  rc.disorder.seed = rc.seed;
  return rc;
}

}  // namespace nhtopo::cli
