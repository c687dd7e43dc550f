#pragma once

// Flat key = value run configuration. Lines starting with # are comments;
// later assignments override earlier ones.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "platefsi/errors.hpp"
#include "platefsi/grid.hpp"
#include "platefsi/newton_polygon.hpp"
#include "platefsi/symbol.hpp"

namespace platefsi {

inline const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys{
      "alpha", "beta", "gamma", "phi", "theta", "n_moduli", "n_args", "threshold", "symbol",
      "n", "p", "L", "N", "X", "M", "T", "dt", "grading", "amplitude", "max_iter", "tol", "radius",
      "grid", "lambda", "z", "stream_amplitude", "eta0_amplitude", "v0t_boundary", "v0n_boundary",
      "g_perturbation"};
  return keys;
}

namespace detail {
inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}
}  // namespace detail

inline double parse_double(const std::string& key, const std::string& text) {
  std::string s = detail::trim(text);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw InvalidArgument(key, "expected a number, got '" + text + "'");
  if (!std::isfinite(v)) throw InvalidArgument(key, "must be finite");
  return v;
}

inline long parse_int(const std::string& key, const std::string& text) {
  std::string s = detail::trim(text);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw InvalidArgument(key, "expected an integer, got '" + text + "'");
  return v;
}

/// "3/2", "2", "1.4" (decimals are converted exactly).
inline Rational parse_rational(const std::string& key, const std::string& text) {
  const std::string s = detail::trim(text);
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const long num = parse_int(key, s.substr(0, slash));
    const long den = parse_int(key, s.substr(slash + 1));
    if (den == 0) throw InvalidArgument(key, "zero denominator");
    return Rational(num, den);
  }
  const auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(parse_int(key, s));
  const std::string frac = s.substr(dot + 1);
  if (frac.size() > 12) throw InvalidArgument(key, "too many decimal digits");
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::string intpart = s.substr(0, dot);
  const bool neg = !intpart.empty() && intpart[0] == '-';
  const long ip = intpart.empty() || intpart == "-" || intpart == "+" ? 0 : parse_int(key, intpart);
  const long fp = frac.empty() ? 0 : parse_int(key, frac);
  if (fp < 0) throw InvalidArgument(key, "malformed decimal");
  Rational r(std::abs(ip));
  r += Rational(fp, den);
  return neg ? -r : r;
}

/// "1+2i", "-0.5-3i", "2i", "1.5", "1+0i".
inline cplx parse_complex(const std::string& key, const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw InvalidArgument(key, "empty complex value");
  if (s.back() != 'i') return {parse_double(key, s), 0.0};
  s.pop_back();
  // split at the last sign that is not part of an exponent or the leading sign
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(key, t);
  };
  if (split == std::string::npos) return {0.0, imag_part(s)};
  return {parse_double(key, s.substr(0, split)), imag_part(s.substr(split))};
}

class RunConfig {
 public:
  /// Parses key = value text. Unknown keys and malformed lines are errors.
  static RunConfig parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw InvalidArgument("line " + std::to_string(lineno), "expected key = value");
      cfg.set(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return cfg;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidArgument("config", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
  }

  void set(const std::string& key, const std::string& value) {
    if (!known_config_keys().count(key)) throw InvalidArgument(key, "unknown configuration key");
    values_[key] = value;
  }

  /// "key=value" override.
  void set_assignment(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidArgument(kv, "expected key=value");
    set(detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  double real(const std::string& key, double fallback) const {
    return has(key) ? parse_double(key, values_.at(key)) : fallback;
  }
  long integer(const std::string& key, long fallback) const {
    return has(key) ? parse_int(key, values_.at(key)) : fallback;
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? values_.at(key) : fallback;
  }

  PlateParams plate() const {
    PlateParams pp{real("alpha", 1.0), real("beta", 0.0), real("gamma", 1.0)};
    pp.validate();
    return pp;
  }

  Rational p_exponent() const {
    const Rational p = has("p") ? parse_rational("p", values_.at("p")) : Rational(2);
    if (!(p > 1)) throw InvalidArgument("p", "must exceed 1");
    return p;
  }

  int dimension() const {
    const long n = integer("n", 2);
    if (n < 2) throw InvalidArgument("n", "must be at least 2");
    return int(n);
  }

  /// Sector angles; defaults are phi = (phi0 + pi/2)/2 and theta = (phi - phi0)/8.
  std::pair<double, double> sector(const PlateParams& pp) const {
    const double phi0 = sector_angle_phi0(pp);
    const double phi = real("phi", 0.5 * (phi0 + std::numbers::pi / 2));
    if (!(phi > 0.0 && phi < std::numbers::pi / 2)) throw InvalidArgument("phi", "must lie in (0, pi/2)");
    const double theta = real("theta", std::max((phi - phi0) / 8, 1e-6));
    if (!(theta > 0.0)) throw InvalidArgument("theta", "must be positive");
    return {phi, theta};
  }

  SamplingSpec sampling() const {
    SamplingSpec s;
    const long nm = integer("n_moduli", long(s.n_moduli));
    const long na = integer("n_args", long(s.n_args));
    if (nm < 2) throw InvalidArgument("n_moduli", "must be at least 2");
    if (na < 2) throw InvalidArgument("n_args", "must be at least 2");
    s.n_moduli = std::size_t(nm);
    s.n_args = std::size_t(na);
    s.threshold = real("threshold", s.threshold);
    if (!(s.threshold > 0.0)) throw InvalidArgument("threshold", "must be positive");
    return s;
  }

  Grid grid() const {
    Grid g;
    g.n = dimension();
    g.L = real("L", g.L);
    g.N = int(integer("N", g.N));
    g.X = real("X", 8.0 * g.L);
    g.M = int(integer("M", g.M));
    g.T = real("T", g.T);
    g.dt = real("dt", g.dt);
    g.grading = real("grading", g.grading);
    g.validate();
    return g;
  }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace platefsi
