#include "phenopf/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace phenopf {

ConfigError::ConfigError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(line == 0 ? message
                                   : "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void expect_params(const FunctionSpec& spec, std::size_t n, std::string_view slot) {
  if (spec.params.size() != n) {
    throw ConfigError(std::string(slot) + ": " + spec.name + " takes " + std::to_string(n) +
                      " parameter(s), got " + std::to_string(spec.params.size()));
  }
}

PhenotypeFn phenotype_function(const FunctionSpec& spec, std::string_view slot) {
  const auto& p = spec.params;
  if (spec.name == "constant") {
    expect_params(spec, 1, slot);
    const double c = p[0];
    return [c](double) { return c; };
  }
  if (spec.name == "linear") {
    expect_params(spec, 2, slot);
    const double c0 = p[0], c1 = p[1];
    return [c0, c1](double y) { return c0 + c1 * y; };
  }
  if (spec.name == "quadratic_well") {
    expect_params(spec, 2, slot);
    const double y0 = p[0], s = p[1];
    return [y0, s](double y) { return s * (y - y0) * (y - y0); };
  }
  if (spec.name == "parabolic") {
    expect_params(spec, 3, slot);
    const double top = p[0], s = p[1], peak = p[2];
    return [top, s, peak](double y) { return top - s * (y - peak) * (y - peak); };
  }
  throw ConfigError(std::string(slot) + ": unknown function '" + spec.name +
                    "' (expected constant, linear, quadratic_well or parabolic)");
}

}  // namespace

std::string FunctionSpec::text() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(params[i]);
  }
  return out + ")";
}

ModelFunctions build_model_functions(const FunctionChoices& c, double y_min, double y_max) {
  if (!(y_min < y_max)) throw ConfigError("y_min < y_max required to build the kernel");
  ModelFunctions f;
  f.p_rate = phenotype_function(c.p_rate, "fn.p_rate");
  f.q_rate = phenotype_function(c.q_rate, "fn.q_rate");
  f.k_rate = phenotype_function(c.k_rate, "fn.k_rate");
  f.w_mob = phenotype_function(c.w_mob, "fn.w_mob");
  f.fitness = phenotype_function(c.fitness, "fn.fitness");

  if (c.kernel.name == "gaussian") {
    expect_params(c.kernel, 1, "fn.kernel");
    const double beta = c.kernel.params[0];
    if (!(beta > 0.0)) throw ConfigError("fn.kernel: gaussian width parameter must be > 0");
    const double rb = std::sqrt(beta);
    const double half_norm = 0.5 * std::sqrt(M_PI / beta);
    f.kernel = [=](double ys, double yd) {
      const double z = half_norm * (std::erf(rb * (y_max - ys)) - std::erf(rb * (y_min - ys)));
      return std::exp(-beta * (yd - ys) * (yd - ys)) / z;
    };
  } else if (c.kernel.name == "uniform") {
    expect_params(c.kernel, 0, "fn.kernel");
    const double inv_len = 1.0 / (y_max - y_min);
    f.kernel = [inv_len](double, double) { return inv_len; };
  } else {
    throw ConfigError("fn.kernel: unknown function '" + c.kernel.name +
                      "' (expected gaussian or uniform)");
  }

  if (c.truncation.name == "half_linear") {
    expect_params(c.truncation, 0, "fn.truncation");
    f.truncation = [](double r) { return std::clamp(0.5 * (1.0 + r), 0.0, 1.0); };
  } else if (c.truncation.name == "constant") {
    expect_params(c.truncation, 1, "fn.truncation");
    const double v = c.truncation.params[0];
    f.truncation = [v](double) { return v; };
  } else {
    throw ConfigError("fn.truncation: unknown function '" + c.truncation.name +
                      "' (expected half_linear or constant)");
  }

  if (c.potential.name != "quartic") {
    throw ConfigError("fn.potential: unknown function '" + c.potential.name +
                      "' (only quartic is available)");
  }
  expect_params(c.potential, 0, "fn.potential");
  f.potential_convex = [](double r) { return 0.25 * (r * r * r * r + 1.0); };
  f.potential_expansive = [](double r) { return -0.5 * r * r; };
  f.potential_convex_deriv = [](double r) { return r * r * r; };
  f.potential_expansive_deriv = [](double r) { return -r; };
  return f;
}

ModelFunctions default_paper_functions() { return build_model_functions({}, 0.0, 2.0); }

std::size_t SimulationConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

SolverControls SimulationConfig::newton_controls() const {
  SolverControls c;
  c.rel_tol = newton_tol;
  c.abs_tol = newton_abs_tol;
  c.max_iter = newton_max_iter;
  return c;
}

SolverControls SimulationConfig::linear_controls() const {
  SolverControls c;
  c.rel_tol = linear_tol;
  c.abs_tol = 1e-300;
  c.max_iter = linear_max_iter;
  c.preconditioner = linear_preconditioner;
  return c;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// A value and where it starts, for column reporting.
struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

double parse_double(std::string_view s, const Token& at, std::size_t offset = 0) {
  std::string_view body = s;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(body.data(), body.data() + body.size(), v);
  const std::size_t shift = s.size() - body.size();
  if (res.ec != std::errc() || body.empty()) {
    throw ConfigError("expected a number, found '" + std::string(s) + "'", at.line,
                      at.column + offset);
  }
  if (res.ptr != body.data() + body.size()) {
    const auto pos = static_cast<std::size_t>(res.ptr - body.data()) + shift;
    throw ConfigError("unexpected character '" + std::string(1, s[pos]) + "' in number", at.line,
                      at.column + offset + pos);
  }
  if (!std::isfinite(v)) throw ConfigError("number is not finite", at.line, at.column + offset);
  return v;
}

std::size_t parse_count(const Token& t) {
  std::size_t v = 0;
  const auto& s = t.text;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || s.empty()) {
    throw ConfigError("expected a nonnegative integer, found '" + s + "'", t.line, t.column);
  }
  if (res.ptr != s.data() + s.size()) {
    const auto pos = static_cast<std::size_t>(res.ptr - s.data());
    throw ConfigError("unexpected character '" + std::string(1, s[pos]) + "' in integer", t.line,
                      t.column + pos);
  }
  return v;
}

// Splits on commas, remembering each piece's offset within the token.
std::vector<std::pair<std::string, std::size_t>> split_list(std::string_view s) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    const auto piece = s.substr(start, comma == std::string_view::npos ? s.npos : comma - start);
    const auto lead = piece.find_first_not_of(" \t");
    out.emplace_back(trim(piece), start + (lead == std::string_view::npos ? 0 : lead));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Point2 parse_point(const Token& t) {
  const auto parts = split_list(t.text);
  if (parts.size() != 2) {
    throw ConfigError("expected two comma-separated numbers", t.line, t.column);
  }
  return {parse_double(parts[0].first, t, parts[0].second),
          parse_double(parts[1].first, t, parts[1].second)};
}

FunctionSpec parse_function(const Token& t) {
  const auto& s = t.text;
  FunctionSpec spec;
  const auto open = s.find('(');
  spec.name = trim(std::string_view(s).substr(0, open));
  if (spec.name.empty() ||
      !std::all_of(spec.name.begin(), spec.name.end(),
                   [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; })) {
    throw ConfigError("expected a function name such as constant(1.5)", t.line, t.column);
  }
  if (open == std::string::npos) return spec;
  if (s.back() != ')') throw ConfigError("missing ')'", t.line, t.column + s.size());
  const std::string_view inner = std::string_view(s).substr(open + 1, s.size() - open - 2);
  if (trim(inner).empty()) return spec;
  for (const auto& [piece, off] : split_list(inner)) {
    spec.params.push_back(parse_double(piece, t, open + 1 + off));
  }
  return spec;
}

Preconditioner parse_preconditioner(const Token& t) {
  if (t.text == "none") return Preconditioner::none;
  if (t.text == "diagonal") return Preconditioner::diagonal;
  if (t.text == "ilu0") return Preconditioner::ilu0;
  throw ConfigError("expected none, diagonal or ilu0, found '" + t.text + "'", t.line, t.column);
}

std::string preconditioner_name(Preconditioner p) {
  switch (p) {
    case Preconditioner::none:
      return "none";
    case Preconditioner::diagonal:
      return "diagonal";
    case Preconditioner::ilu0:
      return "ilu0";
  }
  return "diagonal";
}

struct KeyDef {
  std::string name;
  bool required;
  std::function<void(SimulationConfig&, const Token&)> set;
  std::function<std::string(const SimulationConfig&)> get;
};

template <typename Member>
KeyDef number_key(std::string name, bool required, Member member) {
  return {std::move(name), required,
          [member](SimulationConfig& c, const Token& t) { member(c) = parse_double(t.text, t); },
          [member](const SimulationConfig& c) {
            return format_number(member(c));
          }};
}

template <typename Member>
KeyDef count_key(std::string name, bool required, Member member) {
  return {std::move(name), required,
          [member](SimulationConfig& c, const Token& t) { member(c) = parse_count(t); },
          [member](const SimulationConfig& c) {
            return std::to_string(member(c));
          }};
}

template <typename Member>
KeyDef point_key(std::string name, bool required, Member member) {
  return {std::move(name), required,
          [member](SimulationConfig& c, const Token& t) { member(c) = parse_point(t); },
          [member](const SimulationConfig& c) {
            const Point2 p = member(c);
            return format_number(p.x) + ", " + format_number(p.y);
          }};
}

template <typename Member>
KeyDef function_key(std::string name, Member member) {
  return {std::move(name), false,
          [member](SimulationConfig& c, const Token& t) { member(c) = parse_function(t); },
          [member](const SimulationConfig& c) {
            return member(c).text();
          }};
}

const std::vector<KeyDef>& key_table() {
  using C = SimulationConfig;
  static const std::vector<KeyDef> table = {
      number_key("eps", true, [](auto& c) -> auto& { return c.eps; }),
      number_key("d_sigma", true, [](auto& c) -> auto& { return c.d_sigma; }),
      number_key("b", true, [](auto& c) -> auto& { return c.b; }),
      number_key("sigma_b", true, [](auto& c) -> auto& { return c.sigma_b; }),
      number_key("m_mob", true, [](auto& c) -> auto& { return c.m_mob; }),
      number_key("alpha", true, [](auto& c) -> auto& { return c.alpha; }),
      number_key("theta", true, [](auto& c) -> auto& { return c.theta; }),
      count_key("nx", true, [](auto& c) -> auto& { return c.nx; }),
      count_key("n_y", true, [](auto& c) -> auto& { return c.n_y; }),
      number_key("y_min", true, [](auto& c) -> auto& { return c.y_min; }),
      number_key("y_max", true, [](auto& c) -> auto& { return c.y_max; }),
      number_key("dt", true, [](auto& c) -> auto& { return c.dt; }),
      number_key("t_end", true, [](auto& c) -> auto& { return c.t_end; }),
      point_key("ic_phi.disk_center", true, [](auto& c) -> auto& { return c.ic_phi.disk_center; }),
      number_key("ic_phi.disk_radius_sq", true,
                 [](auto& c) -> auto& { return c.ic_phi.disk_radius_sq; }),
      number_key("ic_f.a", true, [](auto& c) -> auto& { return c.ic_f.a; }),
      number_key("ic_f.y_bar0", true, [](auto& c) -> auto& { return c.ic_f.y_bar0; }),
      number_key("newton_tol", false, [](auto& c) -> auto& { return c.newton_tol; }),
      number_key("newton_abs_tol", false, [](auto& c) -> auto& { return c.newton_abs_tol; }),
      count_key("newton_max_iter", false, [](auto& c) -> auto& { return c.newton_max_iter; }),
      number_key("linear_tol", false, [](auto& c) -> auto& { return c.linear_tol; }),
      count_key("linear_max_iter", false, [](auto& c) -> auto& { return c.linear_max_iter; }),
      {"linear_preconditioner", false,
       [](C& c, const Token& t) { c.linear_preconditioner = parse_preconditioner(t); },
       [](const C& c) { return preconditioner_name(c.linear_preconditioner); }},
      number_key("tumour_threshold", false, [](auto& c) -> auto& { return c.tumour_threshold; }),
      count_key("output.stride", false, [](auto& c) -> auto& { return c.output.stride; }),
      point_key("output.probe_a", false, [](auto& c) -> auto& { return c.output.probe_a; }),
      point_key("output.probe_b", false, [](auto& c) -> auto& { return c.output.probe_b; }),
      point_key("output.probe_c", false, [](auto& c) -> auto& { return c.output.probe_c; }),
      {"output.dir", false, [](C& c, const Token& t) { c.output.dir = t.text; },
       [](const C& c) { return c.output.dir; }},
      function_key("fn.p_rate", [](auto& c) -> auto& { return c.functions.p_rate; }),
      function_key("fn.q_rate", [](auto& c) -> auto& { return c.functions.q_rate; }),
      function_key("fn.k_rate", [](auto& c) -> auto& { return c.functions.k_rate; }),
      function_key("fn.w_mob", [](auto& c) -> auto& { return c.functions.w_mob; }),
      function_key("fn.fitness", [](auto& c) -> auto& { return c.functions.fitness; }),
      function_key("fn.kernel", [](auto& c) -> auto& { return c.functions.kernel; }),
      function_key("fn.truncation", [](auto& c) -> auto& { return c.functions.truncation; }),
      function_key("fn.potential", [](auto& c) -> auto& { return c.functions.potential; }),
  };
  return table;
}

const KeyDef* find_key(std::string_view name) {
  for (const auto& k : key_table()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

void require(bool ok, const std::string& what, double got) {
  if (!ok) throw ConfigError(what + " (got " + format_number(got) + ")");
}

bool in_unit_square(Point2 p) { return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0; }

}  // namespace

void check_config(const SimulationConfig& c) {
  require(c.eps > 0.0 && c.eps < 1.0, "eps must lie in (0, 1)", c.eps);
  require(c.d_sigma > 0.0, "d_sigma must satisfy d_sigma > 0", c.d_sigma);
  require(c.b >= 0.0, "b must satisfy b >= 0", c.b);
  require(c.sigma_b >= 0.0, "sigma_b must satisfy sigma_b >= 0", c.sigma_b);
  require(c.m_mob > 0.0, "m_mob must satisfy m_mob > 0", c.m_mob);
  require(c.alpha >= 0.0, "alpha must satisfy alpha >= 0", c.alpha);
  require(c.theta >= 0.0, "theta must satisfy theta >= 0", c.theta);
  require(c.nx >= 1, "nx must satisfy nx >= 1", static_cast<double>(c.nx));
  require(c.n_y >= 1, "n_y must satisfy n_y >= 1", static_cast<double>(c.n_y));
  if (!(c.y_min < c.y_max)) {
    throw ConfigError("y_min < y_max required (got " + format_number(c.y_min) + " and " +
                      format_number(c.y_max) + ")");
  }
  require(c.dt > 0.0, "dt must satisfy dt > 0", c.dt);
  require(c.t_end >= 0.0, "t_end must satisfy t_end >= 0", c.t_end);
  require(std::abs(static_cast<double>(c.step_count()) * c.dt - c.t_end) <= 1e-9 * std::max(1.0, c.t_end),
          "t_end must be a whole number of time steps", c.t_end);
  require(in_unit_square(c.ic_phi.disk_center), "ic_phi.disk_center must lie in [0,1]^2",
          c.ic_phi.disk_center.x);
  require(c.ic_phi.disk_radius_sq >= 0.0, "ic_phi.disk_radius_sq must be >= 0",
          c.ic_phi.disk_radius_sq);
  require(c.ic_f.a > 0.0, "ic_f.a must satisfy a > 0", c.ic_f.a);
  require(c.ic_f.y_bar0 >= c.y_min && c.ic_f.y_bar0 <= c.y_max,
          "ic_f.y_bar0 must lie in [y_min, y_max]", c.ic_f.y_bar0);
  require(c.newton_tol > 0.0, "newton_tol must be > 0", c.newton_tol);
  require(c.newton_abs_tol > 0.0, "newton_abs_tol must be > 0", c.newton_abs_tol);
  require(c.newton_max_iter >= 1, "newton_max_iter must be >= 1",
          static_cast<double>(c.newton_max_iter));
  require(c.linear_tol > 0.0, "linear_tol must be > 0", c.linear_tol);
  require(c.linear_max_iter >= 1, "linear_max_iter must be >= 1",
          static_cast<double>(c.linear_max_iter));
  require(c.output.stride >= 1, "output.stride must be >= 1", static_cast<double>(c.output.stride));
  for (const auto& [name, p] : {std::pair{"output.probe_a", c.output.probe_a},
                                std::pair{"output.probe_b", c.output.probe_b},
                                std::pair{"output.probe_c", c.output.probe_c}}) {
    if (!in_unit_square(p)) throw ConfigError(std::string(name) + " must lie in [0,1]^2");
  }
  const auto fns = build_model_functions(c.functions, c.y_min, c.y_max);
  const double bound = nonnegativity_bound(c, fns);
  if (!(bound < 1.0)) {
    throw ConfigError("step bound dt*alpha*h_max*(theta + max R - min R) < 1 violated (got " +
                      format_number(bound) + ")");
  }
}

SimulationConfig parse_config(std::string_view text) {
  SimulationConfig cfg;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected 'key = value'", line_no, first + 1);
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("missing key before '='", line_no, first + 1);
    for (std::size_t i = 0; i < key.size(); ++i) {
      const char ch = key[i];
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.')) {
        throw ConfigError("invalid character '" + std::string(1, ch) + "' in key", line_no,
                          first + i + 1);
      }
    }
    const auto rest = line.substr(eq + 1);
    const auto vfirst = rest.find_first_not_of(" \t\r");
    if (vfirst == std::string_view::npos) {
      throw ConfigError("missing value for '" + key + "'", line_no, eq + 2);
    }
    const Token tok{trim(rest), line_no, eq + 1 + vfirst + 1};
    const KeyDef* def = find_key(key);
    if (def == nullptr) throw ConfigError("unknown key: " + key, line_no, first + 1);
    if (!seen.insert(key).second) throw ConfigError("repeated key: " + key, line_no, first + 1);
    def->set(cfg, tok);
  }
  for (const auto& k : key_table()) {
    if (k.required && seen.count(k.name) == 0) throw ConfigError("missing required key: " + k.name);
  }
  check_config(cfg);
  return cfg;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_override(SimulationConfig& cfg, const std::string& key, const std::string& value) {
  const KeyDef* def = find_key(key);
  if (def == nullptr) throw ConfigError("unknown key: " + key);
  def->set(cfg, Token{trim(value), 0, 0});
  check_config(cfg);
}

std::string format_config(const SimulationConfig& cfg) {
  std::string out;
  for (const auto& k : key_table()) out += k.name + " = " + k.get(cfg) + "\n";
  return out;
}

SimulationConfig paper_config() { return SimulationConfig{}; }

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

namespace {

constexpr std::size_t kSamples = 1001;
constexpr double kTol = 1e-6;

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

// Composite Simpson on an odd number of equispaced samples.
double simpson(const std::vector<double>& f, double h) {
  double s = f.front() + f.back();
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return s * h / 3.0;
}

std::string fmt(double v) { return format_number(v); }

// Range of phi over which phi-functions are sampled.
constexpr double kPhiRange = 3.0;

}  // namespace

double nonnegativity_bound(const SimulationConfig& cfg, const ModelFunctions& fns) {
  double r_max = -INFINITY, r_min = INFINITY;
  for (std::size_t i = 0; i <= cfg.n_y; ++i) {
    const double y = i == cfg.n_y ? cfg.y_max
                                  : cfg.y_min + (cfg.y_max - cfg.y_min) * static_cast<double>(i) /
                                                    static_cast<double>(cfg.n_y);
    const double r = fns.fitness(y);
    r_max = std::max(r_max, r);
    r_min = std::min(r_min, r);
  }
  double h_max = 0.0;
  for (double r : linspace(-kPhiRange, kPhiRange, kSamples)) {
    h_max = std::max(h_max, std::abs(fns.truncation(r)));
  }
  return cfg.dt * cfg.alpha * h_max * (cfg.theta + (r_max - r_min));
}

ValidationReport validate_assumptions(const SimulationConfig& cfg, const ModelFunctions& fns) {
  ValidationReport rep;
  const auto ys = linspace(cfg.y_min, cfg.y_max, kSamples);
  const double hy = (cfg.y_max - cfg.y_min) / static_cast<double>(kSamples - 1);
  const auto rs = linspace(-kPhiRange, kPhiRange, kSamples);
  const double hr = 2.0 * kPhiRange / static_cast<double>(kSamples - 1);

  rep.checks.push_back({"A1", "mobility is a positive finite constant",
                        cfg.m_mob > 0.0 && std::isfinite(cfg.m_mob), "m = " + fmt(cfg.m_mob)});

  {
    AssumptionCheck c{"A2", "potential: F >= 0, convex part convex, expansive part concave, "
                            "quadratic perturbation bound, coercive for |r| >= 2",
                      true, ""};
    double worst_f = INFINITY, worst_convex = INFINITY, worst_concave = -INFINITY;
    double c0 = 0.0, c1 = INFINITY;
    for (std::size_t i = 0; i < kSamples; ++i) {
      const double r = rs[i];
      worst_f = std::min(worst_f, fns.potential(r));
      c0 = std::max(c0, std::abs(fns.potential_expansive(r)) / (r * r + 1.0));
      if (std::abs(r) >= 2.0) c1 = std::min(c1, fns.potential(r) / (1.0 + r * r));
      if (i > 0 && i + 1 < kSamples) {
        const double d2c = (fns.potential_convex(rs[i + 1]) - 2.0 * fns.potential_convex(r) +
                            fns.potential_convex(rs[i - 1])) / (hr * hr);
        const double d2e = (fns.potential_expansive(rs[i + 1]) -
                            2.0 * fns.potential_expansive(r) +
                            fns.potential_expansive(rs[i - 1])) / (hr * hr);
        worst_convex = std::min(worst_convex, d2c);
        worst_concave = std::max(worst_concave, d2e);
      }
    }
    c.passed = worst_f >= -kTol && worst_convex >= -kTol && worst_concave <= kTol &&
               std::isfinite(c0) && c1 > 0.0;
    c.detail = "min F = " + fmt(worst_f) + ", min F_c'' = " + fmt(worst_convex) +
               ", max F_e'' = " + fmt(worst_concave) + ", c0 = " + fmt(c0) +
               ", c1(|r|>=2) = " + fmt(c1);
    rep.checks.push_back(c);
  }

  {
    AssumptionCheck c{"A3", "kernel nonnegative with unit integral per source phenotype, theta >= 0",
                      true, ""};
    double worst = 0.0, min_val = INFINITY;
    std::vector<double> col(kSamples);
    for (double ys_src : ys) {
      for (std::size_t k = 0; k < kSamples; ++k) {
        col[k] = fns.kernel(ys_src, ys[k]);
        min_val = std::min(min_val, col[k]);
      }
      worst = std::max(worst, std::abs(simpson(col, hy) - 1.0));
    }
    c.passed = min_val >= 0.0 && worst <= kTol && cfg.theta >= 0.0;
    c.detail = "max |integral - 1| = " + fmt(worst) + ", min value = " + fmt(min_val);
    rep.checks.push_back(c);
  }

  {
    AssumptionCheck c{"A4", "p, q, k, w nonnegative and bounded on the phenotype domain", true, ""};
    double lo = INFINITY, hi = 0.0;
    for (const auto* fn : {&fns.p_rate, &fns.q_rate, &fns.k_rate, &fns.w_mob}) {
      for (double y : ys) {
        const double v = (*fn)(y);
        lo = std::min(lo, v);
        hi = std::max(hi, std::abs(v));
      }
    }
    c.passed = lo >= -kTol && std::isfinite(hi);
    c.detail = "min = " + fmt(lo) + ", max |value| = " + fmt(hi);
    rep.checks.push_back(c);
  }

  {
    AssumptionCheck c{"A5", "fitness bounded on the phenotype domain", true, ""};
    double hi = 0.0;
    for (double y : ys) hi = std::max(hi, std::abs(fns.fitness(y)));
    c.passed = std::isfinite(hi);
    c.detail = "max |R| = " + fmt(hi);
    rep.checks.push_back(c);
  }

  {
    AssumptionCheck c{"A6", "truncation nonnegative, bounded, continuous; h(-1) = 0, h(1) = 1, "
                            "0 <= h <= 1 on [-1, 1]",
                      true, ""};
    double lo = INFINITY, hi = -INFINITY, jump = 0.0, lo_in = INFINITY, hi_in = -INFINITY;
    for (std::size_t i = 0; i < kSamples; ++i) {
      const double v = fns.truncation(rs[i]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      if (std::abs(rs[i]) <= 1.0) {
        lo_in = std::min(lo_in, v);
        hi_in = std::max(hi_in, v);
      }
      if (i > 0) jump = std::max(jump, std::abs(v - fns.truncation(rs[i - 1])));
    }
    const double at_m1 = fns.truncation(-1.0);
    const double at_p1 = fns.truncation(1.0);
    c.passed = lo >= 0.0 && std::isfinite(hi) && jump <= 100.0 * hr && lo_in >= -kTol &&
               hi_in <= 1.0 + kTol && std::abs(at_m1) <= kTol && std::abs(at_p1 - 1.0) <= kTol;
    c.detail = "range [" + fmt(lo) + ", " + fmt(hi) + "], h(-1) = " + fmt(at_m1) +
               ", h(1) = " + fmt(at_p1) + ", max jump = " + fmt(jump);
    rep.checks.push_back(c);
  }

  rep.checks.push_back({"A7", "boundary supply level is a nonnegative finite constant",
                        cfg.sigma_b >= 0.0 && std::isfinite(cfg.sigma_b),
                        "sigma_B = " + fmt(cfg.sigma_b)});
  return rep;
}

}  // namespace phenopf
