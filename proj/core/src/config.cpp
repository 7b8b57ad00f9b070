#include "fracmem/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace fracmem {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad(std::string_view key, const std::string& message) {
  throw ConfigError("", 0, std::string(key), message);
}

double to_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) bad(key, "expected a number, got '" + std::string(text) + "'");
  if (!std::isfinite(v)) bad(key, "must be finite");
  return v;
}

long long to_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  long long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) bad(key, "expected an integer, got '" + std::string(text) + "'");
  return v;
}

int to_int(std::string_view key, std::string_view text) {
  const long long v = to_integer(key, text);
  if (v < -1000000000LL || v > 1000000000LL) bad(key, "integer out of range");
  return static_cast<int>(v);
}

bool to_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  bad(key, "expected true or false, got '" + std::string(text) + "'");
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  text = trim(text);
  if (text.empty()) return parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(sep, pos);
    parts.push_back(trim(text.substr(pos, next == std::string_view::npos ? next : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::vector<double> to_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) out.push_back(to_double(key, item));
  return out;
}

// "t_start:t_end:amplitude, ..."; an empty value means no pulses at all.
std::vector<Pulse> to_pulses(std::string_view key, std::string_view text) {
  std::vector<Pulse> out;
  for (auto item : split(text, ',')) {
    const auto f = split(item, ':');
    if (f.size() != 3) bad(key, "expected t_start:t_end:amplitude, got '" + std::string(item) + "'");
    out.push_back({to_double(key, f[0]), to_double(key, f[1]), to_double(key, f[2])});
  }
  return out;
}

// Shortest text that parses back to the same double.
std::string num(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + num(v[k]);
  return s;
}

using Setter = void (*)(RunConfig&, std::string_view, std::string_view);
using Getter = std::string (*)(const RunConfig&);

struct Field {
  std::string_view key;
  Setter set;
  Getter get;
};

#define FRACMEM_REAL(name, member)                                                                \
  Field {                                                                                         \
    name, [](RunConfig& c, std::string_view k, std::string_view v) { c.member = to_double(k, v); }, \
        [](const RunConfig& c) { return num(c.member); }                                          \
  }
#define FRACMEM_INT(name, member)                                                                 \
  Field {                                                                                         \
    name, [](RunConfig& c, std::string_view k, std::string_view v) { c.member = to_int(k, v); },   \
        [](const RunConfig& c) { return std::to_string(c.member); }                               \
  }
#define FRACMEM_BOOL(name, member)                                                                \
  Field {                                                                                         \
    name, [](RunConfig& c, std::string_view k, std::string_view v) { c.member = to_bool(k, v); },  \
        [](const RunConfig& c) { return std::string(c.member ? "true" : "false"); }               \
  }
#define FRACMEM_TEXT(name, member)                                                                \
  Field {                                                                                         \
    name, [](RunConfig& c, std::string_view, std::string_view v) { c.member = std::string(trim(v)); }, \
        [](const RunConfig& c) { return c.member; }                                               \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      FRACMEM_TEXT("command", command),
      FRACMEM_REAL("A", device.A),
      FRACMEM_REAL("B", device.B),
      FRACMEM_REAL("kappa", device.kappa),
      {"alpha",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         const double a = to_double(k, v);
         try {
           c.device.alpha = FractionalOrder(a);
         } catch (const std::exception& e) {
           bad(k, e.what());
         }
       },
       [](const RunConfig& c) { return num(c.device.alpha.value()); }},
      FRACMEM_REAL("beta", device.beta),
      FRACMEM_REAL("x0", task.x0),
      FRACMEM_REAL("x1", task.x1),
      FRACMEM_REAL("t1", task.t1),
      FRACMEM_REAL("min_pulse_width", optimizer.min_pulse_width),
      {"i1_upper",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         if (trim(v) == "none" || trim(v).empty()) {
           c.optimizer.i1_upper.reset();
         } else {
           c.optimizer.i1_upper = to_double(k, v);
         }
       },
       [](const RunConfig& c) { return c.optimizer.i1_upper ? num(*c.optimizer.i1_upper) : std::string("none"); }},
      FRACMEM_INT("restarts", optimizer.restarts),
      FRACMEM_REAL("tol", optimizer.tol),
      FRACMEM_INT("max_iters", optimizer.max_iters),
      {"seed",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         const long long s = to_integer(k, v);
         if (s < 0) bad(k, "must be non-negative");
         c.optimizer.seed = static_cast<std::uint64_t>(s);
       },
       [](const RunConfig& c) { return std::to_string(c.optimizer.seed); }},
      {"alphas", [](RunConfig& c, std::string_view k, std::string_view v) { c.alphas = to_list(k, v); },
       [](const RunConfig& c) { return join(c.alphas); }},
      {"betas", [](RunConfig& c, std::string_view k, std::string_view v) { c.betas = to_list(k, v); },
       [](const RunConfig& c) { return join(c.betas); }},
      {"pulses", [](RunConfig& c, std::string_view k, std::string_view v) { c.pulses = to_pulses(k, v); },
       [](const RunConfig& c) {
         std::string s;
         for (std::size_t i = 0; i < c.pulses.size(); ++i) {
           const auto& p = c.pulses[i];
           s += (i ? ", " : "") + num(p.t_start) + ":" + num(p.t_end) + ":" + num(p.amplitude);
         }
         return s;
       }},
      FRACMEM_BOOL("solve_amplitude", solve_amplitude),
      FRACMEM_REAL("step", step),
      FRACMEM_INT("output_every", output_every),
      FRACMEM_REAL("tolerance", tolerance),
      FRACMEM_REAL("t_st", t_st),
      FRACMEM_REAL("t_e", t_e),
      FRACMEM_REAL("width_lo", widths.lo),
      FRACMEM_REAL("width_hi", widths.hi),
      FRACMEM_REAL("width_step", widths.step),
      FRACMEM_BOOL("trajectories", trajectories),
      FRACMEM_INT("trajectory_samples", trajectory_samples),
      FRACMEM_REAL("alpha_lo", alpha_range.lo),
      FRACMEM_REAL("alpha_hi", alpha_range.hi),
      FRACMEM_REAL("alpha_step", alpha_range.step),
      FRACMEM_REAL("beta_lo", beta_range.lo),
      FRACMEM_REAL("beta_hi", beta_range.hi),
      FRACMEM_REAL("beta_step", beta_range.step),
      FRACMEM_TEXT("summary", summary),
      FRACMEM_INT("jobs", jobs),
      FRACMEM_TEXT("out", out),
  };
  return table;
}

#undef FRACMEM_REAL
#undef FRACMEM_INT
#undef FRACMEM_BOOL
#undef FRACMEM_TEXT

// Validation messages start with "<field>:"; recover the field for diagnostics.
std::string leading_field(const std::string& message) {
  const auto colon = message.find(':');
  if (colon == std::string::npos || message.find(' ') < colon) return {};
  return message.substr(0, colon);
}

} // namespace

ConfigError::ConfigError(std::string origin, int line, std::string key, const std::string& message)
    : std::invalid_argument([&] {
        std::string where = origin;
        if (line > 0) where += (where.empty() ? "line " : ":") + std::to_string(line);
        std::string head = where.empty() ? std::string() : where + ": ";
        if (!key.empty() && message.rfind(key + ":", 0) != 0) head += key + ": ";
        return head + message;
      }()),
      origin_(std::move(origin)), line_(line), key_(std::move(key)) {}

std::vector<double> RunConfig::alpha_values() const {
  return alphas.empty() ? std::vector<double>{device.alpha.value()} : alphas;
}

std::vector<double> RunConfig::beta_values() const {
  return betas.empty() ? std::vector<double>{device.beta} : betas;
}

void RunConfig::validate() const {
  auto fail = [](const char* key, const std::string& msg) { throw ConfigError("", 0, key, msg); };
  device.validate();
  task.validate();
  optimizer.validate(task.t1);
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 1.0)) fail("alphas", "every entry must lie in (0, 1], got " + num(a));
  }
  for (double b : betas) {
    if (!(b > 0.0)) fail("betas", "every entry must be positive, got " + num(b));
  }
  try {
    PulseTrain train(pulses, task.t1);
  } catch (const std::exception& e) {
    fail("pulses", e.what());
  }
  if (solve_amplitude && pulses.size() != 1) fail("solve_amplitude", "needs exactly one pulse");
  if (!(step > 0.0 && step < task.t1)) fail("step", "must satisfy 0 < step < t1");
  if (output_every < 1) fail("output_every", "must be >= 1");
  if (!(tolerance > 0.0)) fail("tolerance", "must be positive");
  if (!(widths.step > 0.0)) fail("width_step", "must be positive");
  if (!(widths.lo > 0.0)) fail("width_lo", "must be positive");
  if (!(widths.lo <= widths.hi)) fail("width_lo", "must not exceed width_hi");
  if (!(widths.hi <= task.t1)) fail("width_hi", "must not exceed t1");
  if (trajectory_samples < 2) fail("trajectory_samples", "must be >= 2");
  if (jobs < 1) fail("jobs", "must be >= 1");
  SweepSpec spec;
  spec.alpha = alpha_range;
  spec.beta = beta_range;
  spec.cfg = optimizer;
  spec.params = device;
  spec.task = task;
  spec.jobs = jobs;
  spec.validate();
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(cfg, key, value);
      return;
    }
  }
  bad(key, "unknown key");
}

RunConfig parse_config(std::string_view text, const std::string& origin) {
  RunConfig cfg;
  std::map<std::string, int, std::less<>> line_of;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(origin, line_no, "", "expected key = value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin, line_no, "", "missing key before '='");
    try {
      apply_setting(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin, line_no, std::string(key), e.what());
    }
    line_of[std::string(key)] = line_no;
  }
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    const auto* ce = dynamic_cast<const ConfigError*>(&e);
    const std::string key = ce ? ce->key() : leading_field(e.what());
    const auto it = line_of.find(key);
    throw ConfigError(origin, it == line_of.end() ? 0 : it->second, key, ce ? ce->what() : e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, "", "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) {
    out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  }
  return out;
}

} // namespace fracmem
