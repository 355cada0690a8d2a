#include "heatflow/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "heatflow/csv.hpp"
#include "heatflow/functionals.hpp"

namespace heatflow {

namespace {

constexpr std::array<std::string_view, 9> kModeNames = {"qcurve", "qprime",          "residual",
                                                        "weighted", "lemma",         "hausdorff_young",
                                                        "limits", "constants",       "verify"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> plain_number(std::string_view s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

class Parser {
 public:
  explicit Parser(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(line_, what); }

  double number(std::string_view s, std::string_view key) const {
    const auto v = parse_number(s);
    if (!v) fail("malformed number '" + std::string(s) + "' for " + std::string(key));
    return *v;
  }

  std::vector<double> numbers(std::string_view s, std::string_view key) const {
    std::vector<double> out;
    for (auto part : split_commas(s)) out.push_back(number(part, key));
    return out;
  }

  std::array<double, 2> pair(std::string_view s, std::string_view key) const {
    const std::vector<double> v = numbers(s, key);
    if (v.size() != 2) fail(std::string(key) + " needs two values");
    return {v[0], v[1]};
  }

  std::size_t count(std::string_view s, std::string_view key) const {
    const double v = number(s, key);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) fail(std::string(key) + " must be a nonnegative integer");
    return static_cast<std::size_t>(v);
  }

  bool flag(std::string_view s, std::string_view key) const {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail(std::string(key) + " must be true or false");
  }

 private:
  std::size_t line_;
};

std::string join(std::span<const double> v) { return join_numbers(v); }

}  // namespace

std::string_view mode_name(Mode m) { return kModeNames[static_cast<std::size_t>(m)]; }

Mode parse_mode(std::string_view name) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == name) return static_cast<Mode>(i);
  }
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

ConfigError::ConfigError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return plain_number(text);
  const auto num = plain_number(trim(text.substr(0, slash)));
  const auto den = plain_number(trim(text.substr(slash + 1)));
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

FlowDatum FlowConfig::datum(int dim) const {
  if (!atoms.empty()) return AtomicMeasure(atoms, dim);
  return GaussianMixture(gaussians);
}

std::vector<double> ExperimentSpec::time_grid() const {
  if (!times.empty()) return times;
  if (count == 1) return {t_min};
  return spacing == Spacing::log ? log_spaced(t_min, t_max, count) : linear_spaced(t_min, t_max, count);
}

std::vector<FlowDatum> ExperimentSpec::initial_data() const {
  std::vector<FlowDatum> out;
  for (const auto& f : flows) out.push_back(f.datum(dimension));
  return out;
}

std::string ExperimentSpec::echo() const {
  std::ostringstream os;
  os << "name=" << name << " mode=" << mode_name(mode) << " dimension=" << dimension;
  os << " L=" << (period ? format_number(*period) : std::string("auto")) << " N=" << points;
  if (exponents) os << " p=" << join(exponents->p_list()) << " p_target=" << format_number(exponents->p());
  if (p_target && !exponents) os << " p_target=" << format_number(*p_target);
  if (alpha) os << " alpha=" << join(*alpha);
  if (rho) os << " rho=" << join(*rho);
  if (lambda) os << " lambda=" << join(*lambda);
  if (!sigma.empty()) os << " sigma=" << join(sigma);
  if (beta != 0.0) os << " beta=" << format_number(beta);
  if (times.empty()) {
    os << " t_min=" << format_number(t_min) << " t_max=" << format_number(t_max) << " count=" << count
       << " spacing=" << (spacing == Spacing::log ? "log" : "linear");
  } else {
    os << " time=" << join(times);
  }
  if (tolerance) os << " tolerance=" << format_number(*tolerance);
  if (mode == Mode::lemma) os << " x=" << format_number(x[0]);
  for (std::size_t j = 0; j < flows.size(); ++j) {
    os << " flow" << j + 1 << "=";
    if (!flows[j].atoms.empty()) {
      for (std::size_t i = 0; i < flows[j].atoms.size(); ++i) {
        const Atom& a = flows[j].atoms[i];
        os << (i ? ";" : "") << "atom(" << format_number(a.weight) << ',' << format_number(a.location[0]);
        if (dimension == 2) os << ',' << format_number(a.location[1]);
        os << ')';
      }
    } else {
      for (std::size_t i = 0; i < flows[j].gaussians.size(); ++i) {
        const IsotropicGaussian& g = flows[j].gaussians[i];
        os << (i ? ";" : "") << "gaussian(" << format_number(g.amplitude()) << ',' << format_number(g.decay()) << ','
           << format_number(g.center()[0]);
        if (dimension == 2) os << ',' << format_number(g.center()[1]);
        os << ')';
      }
    }
  }
  return os.str();
}

ExperimentSpec parse_config(std::string_view text, std::optional<Mode> mode) {
  ExperimentSpec spec;
  if (mode) spec.mode = *mode;
  bool in_flow = false;
  std::size_t line_no = 0;
  std::size_t p_line = 0, flow_line = 0, sigma_line = 0;

  struct PendingTerm {
    std::size_t line;
    std::vector<double> values;
    bool atom;
  };
  std::vector<std::vector<PendingTerm>> pending;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const Parser P(line_no);

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line != "[flow]") P.fail("unknown section " + std::string(line));
      in_flow = true;
      pending.emplace_back();
      flow_line = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) P.fail("expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) P.fail("missing value for " + std::string(key));

    if (in_flow) {
      if (key == "atom" || key == "gaussian") {
        pending.back().push_back({line_no, P.numbers(value, key), key == "atom"});
        continue;
      }
      P.fail("unknown key '" + std::string(key) + "' in [flow]");
    }

    if (key == "name") {
      if (value.find_first_of("/\\ \t") != std::string_view::npos) P.fail("name must not contain spaces or slashes");
      spec.name = value;
    } else if (key == "mode") {
      try {
        spec.mode = parse_mode(value);
      } catch (const std::invalid_argument& e) {
        P.fail(e.what());
      }
      if (mode && spec.mode != *mode) {
        P.fail("config declares mode " + std::string(value) + " but " + std::string(mode_name(*mode)) +
               " was requested");
      }
    } else if (key == "dimension") {
      const std::size_t d = P.count(value, key);
      if (d != 1 && d != 2) P.fail("dimension must be 1 or 2");
      spec.dimension = static_cast<int>(d);
    } else if (key == "L") {
      const double L = P.number(value, key);
      if (!(L > 0.0)) P.fail("L must be positive");
      spec.period = L;
    } else if (key == "N") {
      spec.points = P.count(value, key);
      spec.points_given = true;
      if (spec.points < 16 || (spec.points & (spec.points - 1)) != 0) P.fail("N must be a power of two >= 16");
    } else if (key == "p") {
      spec.p_list = P.numbers(value, key);
      p_line = line_no;
    } else if (key == "p_target") {
      spec.p_target = P.number(value, key);
    } else if (key == "alpha") {
      spec.alpha = P.pair(value, key);
    } else if (key == "rho") {
      spec.rho = P.pair(value, key);
    } else if (key == "lambda") {
      spec.lambda = P.pair(value, key);
    } else if (key == "sigma") {
      spec.sigma = P.numbers(value, key);
      sigma_line = line_no;
    } else if (key == "beta") {
      spec.beta = P.number(value, key);
    } else if (key == "t_min") {
      spec.t_min = P.number(value, key);
    } else if (key == "t_max") {
      spec.t_max = P.number(value, key);
    } else if (key == "count") {
      spec.count = P.count(value, key);
      if (spec.count == 0) P.fail("count must be positive");
    } else if (key == "spacing") {
      if (value == "log") {
        spec.spacing = Spacing::log;
      } else if (value == "linear") {
        spec.spacing = Spacing::linear;
      } else {
        P.fail("spacing must be log or linear");
      }
    } else if (key == "time") {
      spec.times = P.numbers(value, key);
      for (std::size_t i = 0; i < spec.times.size(); ++i) {
        if (!(spec.times[i] > 0.0)) P.fail("times must be positive");
        if (i > 0 && !(spec.times[i] > spec.times[i - 1])) P.fail("times must be increasing");
      }
    } else if (key == "tolerance") {
      const double tol = P.number(value, key);
      if (!(tol >= 0.0)) P.fail("tolerance must be nonnegative");
      spec.tolerance = tol;
    } else if (key == "x") {
      const std::vector<double> v = P.numbers(value, key);
      if (v.empty() || v.size() > 2) P.fail("x needs one or two coordinates");
      spec.x = {v[0], v.size() > 1 ? v[1] : 0.0};
    } else if (key == "dump_fields") {
      spec.dump_fields = P.flag(value, key);
    } else {
      P.fail("unknown key '" + std::string(key) + "'");
    }
  }

  // Flows, now that the dimension is known.
  for (const auto& terms : pending) {
    FlowConfig f;
    for (const auto& t : terms) {
      const Parser P(t.line);
      const std::size_t want = (t.atom ? 2u : 3u) + (spec.dimension == 2 ? 1u : 0u);
      if (t.values.size() != want) {
        P.fail(std::string(t.atom ? "atom" : "gaussian") + " needs " + std::to_string(want) + " values in d = " +
               std::to_string(spec.dimension));
      }
      if (t.atom != (terms.front().atom)) P.fail("a flow mixes atoms and gaussians");
      const Point c = {t.values[want - (spec.dimension == 2 ? 2 : 1)], spec.dimension == 2 ? t.values[want - 1] : 0.0};
      try {
        if (t.atom) {
          if (!(t.values[0] > 0.0)) P.fail("atom weight must be positive");
          f.atoms.push_back({c, t.values[0]});
        } else {
          f.gaussians.emplace_back(t.values[0], t.values[1], c, spec.dimension);
        }
      } catch (const std::invalid_argument& e) {
        P.fail(e.what());
      }
    }
    if (terms.empty()) Parser(flow_line).fail("empty [flow] section");
    spec.flows.push_back(std::move(f));
  }

  const Parser end(line_no);
  if (spec.mode == Mode::verify) return spec;

  if (!spec.p_list.empty()) {
    const Parser P(p_line);
    try {
      if (spec.mode == Mode::hausdorff_young) {
        if (spec.p_list.size() != 1) P.fail("hausdorff_young takes a single even exponent p");
      } else if (spec.p_target) {
        spec.exponents = ExponentTuple(spec.p_list, *spec.p_target);
      } else {
        spec.exponents = complete_p(spec.p_list);
      }
    } catch (const std::invalid_argument& e) {
      P.fail(e.what());
    }
  }

  const bool needs_tuple = spec.mode == Mode::qcurve || spec.mode == Mode::qprime || spec.mode == Mode::residual ||
                           spec.mode == Mode::limits || spec.mode == Mode::constants;
  if (needs_tuple && !spec.exponents) end.fail("mode " + std::string(mode_name(spec.mode)) + " needs p");
  if (spec.mode == Mode::hausdorff_young) {
    if (spec.p_list.size() != 1) end.fail("hausdorff_young needs p");
    const double p = spec.p_list[0];
    if (p < 2 || p != std::floor(p) || static_cast<long>(p) % 2 != 0) Parser(p_line).fail("p must be an even integer");
  }
  if (spec.mode == Mode::weighted) {
    if (!spec.alpha || !spec.rho || !spec.p_target) end.fail("weighted mode needs alpha, rho and p_target");
    try {
      extended_params((*spec.alpha)[0], (*spec.alpha)[1], (*spec.rho)[0], (*spec.rho)[1], *spec.p_target,
                      spec.dimension);
    } catch (const std::invalid_argument& e) {
      end.fail(e.what());
    }
  }
  if (spec.mode == Mode::lemma) {
    if (!spec.alpha || !spec.lambda) end.fail("lemma mode needs alpha and lambda");
    if (spec.dimension != 1) end.fail("lemma mode is one-dimensional");
  }

  if (!spec.sigma.empty()) {
    const Parser P(sigma_line);
    for (double s : spec.sigma)
      if (!(s >= 0.0)) P.fail("sigma must be nonnegative");
    if (spec.exponents && spec.sigma.size() != spec.exponents->folds()) P.fail("one sigma per exponent required");
  }

  std::size_t want_flows = 0;
  if (spec.exponents) want_flows = spec.exponents->folds();
  if (spec.mode == Mode::weighted || spec.mode == Mode::lemma) want_flows = 2;
  if (spec.mode == Mode::hausdorff_young) want_flows = 1;
  if (spec.mode != Mode::constants && spec.flows.size() != want_flows) {
    end.fail("expected " + std::to_string(want_flows) + " [flow] sections, found " + std::to_string(spec.flows.size()));
  }
  if (spec.mode == Mode::limits) {
    for (const auto& f : spec.flows)
      if (!f.atoms.empty()) end.fail("limits mode needs gaussian (function) data");
  }

  if (spec.times.empty() && spec.mode != Mode::constants) {
    if (!(spec.t_min > 0.0)) end.fail("t_min must be positive");
    if (spec.count > 1 && !(spec.t_max > spec.t_min)) end.fail("t_max must exceed t_min");
  }
  return spec;
}

}  // namespace heatflow
