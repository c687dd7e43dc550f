// platefsi command-line front end.
//
// Exit codes: 0 ok, 1 config error, 2 sector, 3 residual/check failure,
// 4 no contraction.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "platefsi.hpp"

using json = nlohmann::ordered_json;
using namespace platefsi;

namespace {

enum Exit { kOk = 0, kConfig = 1, kSector = 2, kResidual = 3, kNoContraction = 4 };

struct Common {
  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
  bool json_out = false;
  bool check = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config_path, "key = value configuration file");
  sub->add_option("--set", c.sets, "override, key=value (repeatable)");
  for (const auto& key : known_config_keys()) sub->add_option("--" + key, c.flags[key], "override " + key);
  sub->add_flag("--json", c.json_out, "machine-readable JSON output");
  sub->add_flag("--check", c.check, "run the invariant checks only");
}

RunConfig build_config(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : RunConfig::load(c.config_path);
  for (const auto& s : c.sets) cfg.set_assignment(s);
  for (const auto& [k, v] : c.flags)
    if (!v.empty()) cfg.set(k, v);
  return cfg;
}

json to_json(const Rational& q) { return to_string(q); }

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

/// Prints check lines and returns the exit code.
int report_checks(const std::vector<std::pair<std::string, bool>>& checks, bool as_json) {
  bool all = true;
  json j = json::array();
  for (const auto& [name, ok] : checks) {
    all = all && ok;
    if (as_json)
      j.push_back({{"check", name}, {"pass", ok}});
    else
      std::cout << "check " << name << ": " << (ok ? "PASS" : "FAIL") << "\n";
  }
  if (as_json) std::cout << json{{"checks", j}, {"pass", all}}.dump(2) << "\n";
  return all ? kOk : kResidual;
}

std::vector<MixedTerm> select_terms(const RunConfig& cfg, const PlateParams& pp) {
  const std::string s = cfg.text("symbol", "NL");
  if (s == "NL") return nl_terms(pp);
  if (s == "m") return m_terms(pp);
  throw InvalidArgument("symbol", "expected NL or m, got '" + s + "'");
}

json polygon_json(const NewtonPolygon& poly) {
  json v = json::array(), e = json::array();
  for (const auto& p : poly.vertices) v.push_back({to_double(p.b), to_double(p.a)});
  for (const auto& ed : poly.edges)
    e.push_back({{"from", {to_double(poly.vertices[ed.from].b), to_double(poly.vertices[ed.from].a)}},
                 {"to", {to_double(poly.vertices[ed.to].b), to_double(poly.vertices[ed.to].a)}},
                 {"r", to_json(ed.r)}});
  return {{"vertices", v}, {"edges", e}};
}

bool nl_vertices_ok(const NewtonPolygon& poly) {
  const std::vector<ExponentPoint> want{{Rational{6}, Rational{0}}, {Rational{2}, Rational{2}},
                                        {Rational{0}, Rational(5, 2)}};
  return poly.vertices == want;
}

// ---------------------------------------------------------------- analyze-symbol

int cmd_analyze_symbol(const Common& c) {
  const RunConfig cfg = build_config(c);
  const PlateParams pp = cfg.plate();
  const auto terms = select_terms(cfg, pp);
  const auto [phi, theta] = cfg.sector(pp);
  const NewtonPolygon poly = build_polygon(terms);

  if (c.check) {
    const double phi0 = sector_angle_phi0(pp);
    std::vector<std::pair<std::string, bool>> checks{
        {"phi0_below_pi_over_2", phi0 < std::numbers::pi / 2},
        {"m0_roots_outside_sector", phi > phi0 && m0_roots_outside_sector(pp, phi, theta)}};
    if (cfg.text("symbol", "NL") == "NL") checks.push_back({"polygon_vertices", nl_vertices_ok(poly)});
    return report_checks(checks, c.json_out);
  }

  const ParabolicityReport rep = check_parabolicity(terms, pp, phi, theta, cfg.sampling());
  json per_r = json::array();
  for (const auto& r : rep.per_r)
    per_r.push_back({{"r", r.r.str()},
                     {"min_modulus", r.min_modulus},
                     {"argmin_lambda", cjson(r.argmin_lambda)},
                     {"argmin_z", cjson(r.argmin_z)},
                     {"samples", r.samples},
                     {"pass", r.pass}});
  json out = polygon_json(poly);
  out["phi0"] = rep.phi0;
  out["phi"] = rep.phi;
  out["theta"] = rep.theta;
  out["parabolicity"] = per_r;
  out["roots_outside_sector"] = rep.roots_outside_sector;
  out["status"] = to_string(rep.status);
  out["pass"] = rep.pass();
  std::cout << out.dump(2) << "\n";
  switch (rep.status) {
    case ParabolicityStatus::Pass: return kOk;
    case ParabolicityStatus::SectorTooWide:
    case ParabolicityStatus::ThetaTooWide: return kSector;
    case ParabolicityStatus::Fail: break;
  }
  return kResidual;
}

// ---------------------------------------------------------------- polygon

int cmd_polygon(const Common& c) {
  const RunConfig cfg = build_config(c);
  const PlateParams pp = cfg.plate();
  const auto terms = select_terms(cfg, pp);
  const NewtonPolygon poly = build_polygon(terms);

  if (c.check) {
    bool degrees = true;
    for (const auto& e : poly.edges)
      degrees = degrees && quasi_degree(poly.vertices[e.from], e.r) == quasi_degree(poly.vertices[e.to], e.r);
    std::vector<std::pair<std::string, bool>> checks{{"edge_weights", degrees}};
    if (cfg.text("symbol", "NL") == "NL") checks.push_back({"polygon_vertices", nl_vertices_ok(poly)});
    return report_checks(checks, c.json_out);
  }

  if (c.json_out) {
    json out = polygon_json(poly);
    json ws = json::array();
    for (const auto& w : relevant_weights(poly)) {
      json labels = json::array();
      for (const auto& t : principal_symbol(terms, w).terms) labels.push_back(t.label);
      ws.push_back({{"r", w.str()}, {"principal_terms", labels}});
    }
    out["principal_symbols"] = ws;
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  std::cout << "vertices (z-exponent, lambda-exponent):\n";
  for (const auto& p : poly.vertices) std::cout << "  (" << to_string(p.b) << ", " << to_string(p.a) << ")\n";
  std::cout << "edges:\n";
  for (const auto& e : poly.edges)
    std::cout << "  (" << to_string(poly.vertices[e.from].b) << ", " << to_string(poly.vertices[e.from].a)
              << ") - (" << to_string(poly.vertices[e.to].b) << ", " << to_string(poly.vertices[e.to].a)
              << ")  r = " << to_string(e.r) << "\n";
  std::cout << "principal symbols:\n";
  for (const auto& w : relevant_weights(poly)) {
    std::cout << "  r = " << w.str() << ":";
    for (const auto& t : principal_symbol(terms, w).terms) std::cout << " [" << t.label << "]";
    std::cout << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- solve-linear

struct LinearRow {
  cplx lambda{};
  double z = 0.0;
  cplx eta{}, p0{};
  double residual = 0.0;
  bool pass = false;
  std::string error{};
};

LinearRow solve_point(const PlateParams& pp, cplx lambda, double z, std::size_t tdim, bool corrupt) {
  LinearRow row{lambda, z};
  const cplx fhat{1.0};
  try {
    const Freq f = Freq::scalar(lambda, z);
    TraceSolution ts = solve_traces(pp, f, fhat, tdim);
    if (corrupt) ts.p0_hat *= 1.0 + 1e-3;
    const FieldProfile prof = build_field_profile(pp, f, ts);
    const ResidualReport rr = residual_check(pp, f, prof, fhat);
    row.eta = ts.eta_hat;
    row.p0 = ts.p0_hat;
    row.residual = rr.max();
    row.pass = rr.pass;
  } catch (const Error& e) {
    row.residual = std::numeric_limits<double>::quiet_NaN();
    row.error = e.what();
  }
  return row;
}

std::pair<int, int> parse_grid_spec(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw InvalidArgument("grid", "expected AxB, got '" + s + "'");
  const long a = parse_int("grid", s.substr(0, x)), b = parse_int("grid", s.substr(x + 1));
  if (a < 1 || b < 1) throw InvalidArgument("grid", "sizes must be positive");
  return {int(a), int(b)};
}

int cmd_solve_linear(const Common& c, bool corrupt) {
  const RunConfig cfg = build_config(c);
  const PlateParams pp = cfg.plate();
  const std::size_t tdim = std::size_t(cfg.dimension() - 1);

  std::vector<std::pair<cplx, double>> points;
  if (cfg.has("lambda") || cfg.has("z")) {
    points.push_back({parse_complex("lambda", cfg.text("lambda", "1")), cfg.real("z", 1.0)});
    if (!(points[0].second >= 0.0)) throw InvalidArgument("z", "must be non-negative");
  } else {
    const auto [na, nb] = parse_grid_spec(cfg.text("grid", "8x8"));
    const auto mods = log_space(0.1, 100.0, std::size_t(na));
    const auto args = lin_space(-std::numbers::pi / 4, std::numbers::pi / 4, std::size_t(na));
    const auto zs = log_space(0.1, 10.0, std::size_t(nb));
    for (int i = 0; i < na; ++i)
      for (double z : zs) points.push_back({std::polar(mods[i], args[i]), z});
  }

  if (c.check) {
    bool res = true, uniq = true;
    for (const auto& [l, z] : points) {
      res = res && solve_point(pp, l, z, tdim, corrupt).pass;
      uniq = uniq && uniqueness_probe(pp, Freq::scalar(l, z), tdim);
    }
    return report_checks({{"residuals", res}, {"uniqueness", uniq}}, c.json_out);
  }

  std::vector<LinearRow> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    rows[i] = solve_point(pp, points[i].first, points[i].second, tdim, corrupt);
  });
  bool all = true;
  for (const auto& r : rows) all = all && r.pass;

  if (c.json_out) {
    json arr = json::array();
    for (const auto& r : rows) {
      json row{{"re_lambda", r.lambda.real()}, {"im_lambda", r.lambda.imag()}, {"z", r.z},
               {"abs_eta", std::abs(r.eta)},   {"abs_p0", std::abs(r.p0)},      {"pass", r.pass}};
      row["residual_max"] = std::isnan(r.residual) ? json(nullptr) : json(r.residual);
      if (!r.error.empty()) row["error"] = r.error;
      arr.push_back(row);
    }
    std::cout << json{{"rows", arr}, {"pass", all}}.dump(2) << "\n";
  } else {
    std::cout << "# schema=1\nre_lambda,im_lambda,z,abs_eta,abs_p0,residual_max,pass\n";
    char buf[256];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.3e,%d\n", r.lambda.real(), r.lambda.imag(), r.z,
                    std::abs(r.eta), std::abs(r.p0), r.residual, r.pass ? 1 : 0);
      std::cout << buf;
      if (!r.error.empty()) std::cerr << "row lambda=" << r.lambda << " z=" << r.z << ": " << r.error << "\n";
    }
  }
  return all ? kOk : kResidual;
}

// ---------------------------------------------------------------- simulate

void write_outputs(const std::string& dir, const Grid& g, const FixedPointResult& res, const json& summary) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir + "/steps.csv");
    f << "# schema=1\nt,v_sup,eta_sup,residual\n";
    for (std::size_t k = 0; k < res.trajectory.size(); ++k) {
      const double r = k == 0 ? 0.0 : res.step_residuals[k - 1];
      f << k * g.dt << "," << sup_norm(res.trajectory[k].v) << "," << sup_norm(res.trajectory[k].eta) << "," << r
        << "\n";
    }
  }
  if (!res.trajectory.empty()) {
    const State& s = res.trajectory.back();
    std::ofstream f(dir + "/final_fields.csv");
    f << "# schema=1\n" << (g.n == 3 ? "x1,x2,xn" : "x1,xn");
    for (int c = 0; c < g.n; ++c) f << ",v" << c + 1;
    f << ",p,eta,eta_t\n";
    const auto y = g.xn_nodes();
    const std::size_t M = std::size_t(g.M);
    f.precision(12);
    for (std::size_t t = 0; t < g.tangential_points(); ++t) {
      const auto idx = g.tindex(t);
      for (std::size_t j = 0; j < M; ++j) {
        f << idx[0] * g.dx();
        if (g.n == 3) f << "," << idx[1] * g.dx();
        f << "," << y[j];
        for (int c = 0; c < g.n; ++c) f << "," << s.v[c][t * M + j];
        f << "," << s.p[t * M + j] << "," << s.eta[t] << "," << s.eta_t[t] << "\n";
      }
    }
  }
  std::ofstream(dir + "/summary.json") << summary.dump(2) << "\n";
}

int cmd_simulate(const Common& c, const std::string& out_dir) {
  const RunConfig cfg = build_config(c);
  const ProblemData data = make_problem(cfg);
  const FixedPointOptions opt = make_fixed_point_options(cfg);

  if (c.check) {
    const CompatReport cr = check_compatibility(data);
    return report_checks({{"p_threshold", data.p_exponent >= threshold_p(data.grid.n).quadratic},
                          {"compatibility", cr.pass()},
                          {"finite_data", std::isfinite(data_norm(data))}},
                         c.json_out);
  }

  try {
    const FixedPointResult res = fixed_point_solve(data, opt);
    json summary{{"converged", res.converged},
                 {"iterations", res.iterations},
                 {"contraction_ratios", res.contraction_ratios},
                 {"differences", res.differences},
                 {"residual", res.residual}};
    if (!out_dir.empty()) write_outputs(out_dir, data.grid, res, summary);
    if (c.json_out) {
      std::cout << summary.dump(2) << "\n";
    } else {
      std::cout << "converged: " << (res.converged ? "true" : "false") << "\niterations: " << res.iterations
                << "\nresidual: " << res.residual << "\ncontraction ratios:";
      for (double r : res.contraction_ratios) std::cout << " " << r;
      std::cout << "\n";
    }
    return kOk;
  } catch (const NoContraction& e) {
    const json summary{{"converged", false}, {"error", e.what()}};
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      std::ofstream(out_dir + "/summary.json") << summary.dump(2) << "\n";
    }
    if (c.json_out) std::cout << summary.dump(2) << "\n";
    std::cerr << "no contraction: " << e.what() << "\n";
    return kNoContraction;
  }
}

// ---------------------------------------------------------------- check-compat

int cmd_check_compat(const Common& c) {
  const RunConfig cfg = build_config(c);
  const ProblemData data = make_problem(cfg);
  const CompatReport rep = check_compatibility(data);

  if (c.check) {
    // integration by parts on divergence-free data with v'|bd = 0
    RunConfig clean;
    for (const auto& k : {"n", "L", "N", "X", "M", "T", "dt", "grading"})
      if (cfg.has(k)) clean.set(k, cfg.text(k, ""));
    clean.set("stream_amplitude", "0.1");
    const CompatReport ref = check_compatibility(make_problem(clean));
    return report_checks({{"C4_integration_by_parts", ref[3].status == CompatStatus::Pass},
                          {"C1_consistent_data", ref[0].status == CompatStatus::Pass}},
                         c.json_out);
  }

  if (c.json_out) {
    json items = json::array();
    for (const auto& i : rep.items)
      items.push_back({{"name", i.name}, {"status", to_string(i.status)}, {"violation", i.violation},
                       {"detail", i.detail}});
    std::cout << json{{"p", to_string(data.p_exponent)}, {"items", items}, {"pass", rep.pass()}}.dump(2) << "\n";
  } else {
    for (const auto& i : rep.items) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3e", i.violation);
      std::cout << i.name << ": " << to_string(i.status) << "  violation " << buf << "  (" << i.detail << ")\n";
    }
  }
  return rep.pass() ? kOk : kResidual;
}

// ---------------------------------------------------------------- index

int cmd_index(const Common& c) {
  const RunConfig cfg = build_config(c);
  const int n = cfg.dimension();
  const PThresholds th = threshold_p(n);

  if (c.check) {
    bool dominance = true;
    for (int k = 2; k <= 50; ++k) {
      const PThresholds t = threshold_p(k);
      dominance = dominance && t.quadratic >= t.multiplier && t.quadratic >= t.triple;
    }
    bool hold = true, fail_below = true;
    for (int k : {2, 3, 4}) {
      const Rational p = threshold_p(k).quadratic;
      for (const auto& e : nonlinear_embedding_catalog(k, p)) hold = hold && holds(e.verdict);
      bool any_fail = false;
      for (const auto& e : nonlinear_embedding_catalog(k, p - Rational(1, 10)))
        any_fail = any_fail || !holds(e.verdict);
      fail_below = fail_below && any_fail;
    }
    return report_checks({{"threshold_dominance", dominance},
                          {"catalog_holds_at_threshold", hold},
                          {"catalog_fails_below_threshold", fail_below}},
                         c.json_out);
  }

  const Rational p = cfg.has("p") ? cfg.p_exponent() : th.quadratic;
  const SpaceFactory F{n, p};
  const Rational bd = index(F.boundary(SpaceScale::BesselPotential, Rational{1}, "H^1 boundary"));
  const Rational dom = index(F.domain(SpaceScale::BesselPotential, Rational{2}, "H^2 domain"));
  json catalog = json::array();
  bool all = true;
  for (const auto& e : nonlinear_embedding_catalog(n, p)) {
    json fi = json::array();
    for (const auto& q : e.factor_indices) fi.push_back(to_json(q));
    catalog.push_back({{"name", e.name}, {"verdict", to_string(e.verdict)}, {"factor_indices", fi},
                       {"target_index", to_json(e.target_index)}});
    all = all && holds(e.verdict);
  }
  const json out{{"n", n},
                 {"p", to_json(p)},
                 {"index_boundary_s1", to_json(bd)},
                 {"index_domain_s2", to_json(dom)},
                 {"thresholds",
                  {{"quadratic", to_json(th.quadratic)},
                   {"multiplier", to_json(th.multiplier)},
                   {"triple", to_json(th.triple)}}},
                 {"catalog", catalog},
                 {"all_hold", all}};
  std::cout << out.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plate/Stokes interaction toolkit: symbol analysis, resolvent solves and simulation"};
  app.require_subcommand(1);

  Common c_sym, c_poly, c_lin, c_sim, c_compat, c_idx;
  auto* sym = app.add_subcommand("analyze-symbol", "Newton polygon and parabolicity of the boundary symbol");
  add_common(sym, c_sym);
  auto* poly = app.add_subcommand("polygon", "Newton polygon, edge weights and principal symbols");
  add_common(poly, c_poly);
  auto* lin = app.add_subcommand("solve-linear", "resolvent solves on a (lambda, z) grid");
  add_common(lin, c_lin);
  bool corrupt = false;
  lin->add_flag("--corrupt-p0", corrupt, "perturb the pressure trace (debugging the residual checks)");
  auto* sim = app.add_subcommand("simulate", "fixed-point iteration for the nonlinear problem");
  add_common(sim, c_sim);
  std::string out_dir;
  sim->add_option("-o,--out", out_dir, "directory for steps.csv, final_fields.csv, summary.json");
  auto* compat = app.add_subcommand("check-compat", "compatibility conditions C1-C4 of the configured data");
  add_common(compat, c_compat);
  auto* idx = app.add_subcommand("index", "Sobolev indices, p thresholds and the embedding catalog");
  add_common(idx, c_idx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*sym) return cmd_analyze_symbol(c_sym);
    if (*poly) return cmd_polygon(c_poly);
    if (*lin) return cmd_solve_linear(c_lin, corrupt);
    if (*sim) return cmd_simulate(c_sim, out_dir);
    if (*compat) return cmd_check_compat(c_compat);
    if (*idx) return cmd_index(c_idx);
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResidual;
  }
  return kOk;
}
