#include "pdclab/io/commands.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "pdclab/bell.hpp"
#include "pdclab/counting.hpp"
#include "pdclab/double_slit.hpp"
#include "pdclab/errors.hpp"
#include "pdclab/io/svg.hpp"
#include "pdclab/loophole.hpp"
#include "pdclab/photon_stats.hpp"
#include "pdclab/polarization.hpp"
#include "pdclab/units.hpp"

namespace pdclab::io {

namespace {

using Handler = std::function<CommandResult(const Inputs &, bool)>;

std::string fmt(double v) { return format_number(v); }
std::string fmt_i(std::int64_t v) { return format_integer(v); }

Json opt_json(const std::optional<double> &v) { return v ? Json(*v) : Json(nullptr); }
std::string opt_fmt(const std::optional<double> &v) { return v ? fmt(*v) : "nan"; }

int checked_steps(const Inputs &in, const std::string &key, int min) {
  const auto n = in.integer(key);
  if (n < min || n > 100000)
    throw InvalidInput("key '" + key + "' must lie in [" + std::to_string(min) + ", 100000]");
  return static_cast<int>(n);
}

EntangledState state_from(const Inputs &in) {
  return make_state(in.number("f"), deg_to_rad(in.number("f_phase_deg")));
}

Transmissions eps_from(const Inputs &in) {
  Transmissions e{in.number("eps_par"), in.number("eps_perp")};
  validate(e);
  return e;
}

double alignment_from(const Inputs &in) {
  const double a = in.number("alignment");
  if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("key 'alignment' must lie in [0, 1]");
  return a;
}

SlitGeometry geometry_from(const Inputs &in) {
  SlitGeometry g;
  g.separation_m = in.number("separation_m");
  g.width_m = in.number("width_m");
  g.wavelength_m = in.number("wavelength_m");
  g.incidence_a = deg_to_rad(in.number("incidence_a_deg"));
  g.incidence_b = deg_to_rad(in.number("incidence_b_deg"));
  g.det1_distance_m = in.number("det1_distance_m");
  g.det2_distance_m = in.number("det2_distance_m");
  g.aperture1_m = in.number("aperture1_m");
  g.aperture2_m = in.number("aperture2_m");
  validate(g);
  return g;
}

SourceModel source_from(const Inputs &in, SourceKind kind) {
  SourceModel s;
  s.kind = kind;
  if (in.has("mean_per_gate")) s.mean_per_gate = in.number("mean_per_gate");
  if (in.has("modes")) {
    const auto m = in.integer("modes");
    if (m < 1 || m > 1000000000) throw InvalidInput("key 'modes' must lie in [1, 1e9]");
    s.modes = static_cast<int>(m);
  }
  s.split_ratio = in.number("split_ratio");
  s.eta1 = in.number("eta1");
  s.eta2 = in.number("eta2");
  s.dark_per_gate_1 = in.number("dark_per_gate_1");
  s.dark_per_gate_2 = in.number("dark_per_gate_2");
  s.heralding_fidelity = in.number("heralding_fidelity");
  s.background_per_gate = in.number("background_per_gate");
  if (in.has("trigger_rate_hz")) s.trigger_rate_hz = in.number("trigger_rate_hz");
  s.trigger_efficiency = in.number("trigger_efficiency");
  s.gate_width_s = in.number("gate_width_s");
  validate(s);
  return s;
}

Json tally_json(const CountTally &t) {
  return {{"gates", t.gates_n},
          {"n1", t.n1},
          {"n2", t.n2},
          {"nc", t.nc},
          {"alpha", t.defined ? Json(t.alpha) : Json(nullptr)},
          {"alpha_sigma", t.defined ? Json(t.alpha_sigma) : Json(nullptr)}};
}

Json settings_json(const CHSettings &s) {
  auto deg = [](double r) { return rad_to_deg(r) + 0.0; };
  return {{"theta1_deg", deg(s.theta1)},
          {"theta2_deg", deg(s.theta2)},
          {"theta1p_deg", deg(s.theta1p)},
          {"theta2p_deg", deg(s.theta2p)}};
}

Json fit_json(const FitReport &r) {
  return {{"params", r.params},         {"chi2", r.chi2},
          {"dof", r.dof},               {"chi2_reduced", r.chi2_reduced},
          {"p_value", r.p_value},       {"rejected_at_5pct", r.rejected_at_5pct}};
}

// ---------------------------------------------------------------------------

CommandResult bell_scan(const Inputs &in, bool plot) {
  const auto state = state_from(in);
  const auto eps = eps_from(in);
  const double align = alignment_from(in);
  const int steps = checked_steps(in, "scan_steps", 2);
  const auto fixed = AnalyzerSetting::at(deg_to_rad(in.number("fixed_theta_deg")), eps);

  CommandResult r;
  r.table = CsvTable({"theta1_deg", "coincidence_prob", "single_prob"});
  Series curve{"coincidence", {}, {}};
  for (int i = 0; i < steps; ++i) {
    const double deg = 180.0 * i / (steps - 1);
    const auto a1 = AnalyzerSetting::at(deg_to_rad(deg), eps);
    const double pc = coincidence_prob(state, a1, fixed, align);
    r.table.add_row({fmt(deg), fmt(pc), fmt(single_prob(state, a1))});
    curve.x.push_back(deg);
    curve.y.push_back(pc);
  }
  const auto s = CHSettings::from_degrees(in.number("theta1_deg"), in.number("theta2_deg"),
                                          in.number("theta1p_deg"), in.number("theta2p_deg"));
  const auto ch = ch_sum(state, s, eps, align);
  r.outputs = {{"visibility", visibility(state, fixed, eps, align)},
               {"ch_per_pair", ch.ch_per_pair},
               {"ratio_r", ch.ratio_r},
               {"coincidence_sum", ch.coincidence_sum},
               {"marginal_sum", ch.marginal_sum}};
  if (plot)
    r.svg = line_plot_svg({"Coincidence probability per pair", "theta1 (deg)", "P"}, {curve});
  return r;
}

CommandResult bell_optimize(const Inputs &in, bool plot) {
  const auto state = state_from(in);
  const auto eps = eps_from(in);
  const double align = alignment_from(in);
  OptimizerOptions opt;
  opt.grid_step_deg = in.number("grid_step_deg");
  opt.resolution_deg = in.number("resolution_deg");
  if (!(opt.resolution_deg > 0.0 && opt.resolution_deg <= opt.grid_step_deg))
    throw InvalidInput("key 'resolution_deg' must lie in (0, grid_step_deg]");
  const auto best = optimize_settings(state, eps, align, opt);
  const auto &s = best.best.settings;

  CommandResult r;
  r.table = CsvTable({"theta1_deg", "theta2_deg", "theta1p_deg", "theta2p_deg", "ch_per_pair",
                      "ratio_r"});
  r.table.add_row({fmt(rad_to_deg(s.theta1)), fmt(rad_to_deg(s.theta2)),
                   fmt(rad_to_deg(s.theta1p)), fmt(rad_to_deg(s.theta2p)),
                   fmt(best.best.ch_per_pair), fmt(best.best.ratio_r)});
  r.outputs = settings_json(s);
  r.outputs["ch_per_pair"] = best.best.ch_per_pair;
  r.outputs["ratio_r"] = best.best.ratio_r;
  r.outputs["coarse_grid_ch"] = best.coarse_grid_value;
  r.outputs["violation"] = best.best.ch_per_pair > 0.0;
  if (plot) {
    // CH against theta1 with the other three optimal angles held
    Series curve{"CH per pair", {}, {}};
    for (int i = 0; i <= 180; ++i) {
      CHSettings t = s;
      t.theta1 = deg_to_rad(i);
      curve.x.push_back(i);
      curve.y.push_back(ch_sum(state, t, eps, align).ch_per_pair);
    }
    r.svg = line_plot_svg({"CH per pair near the optimum", "theta1 (deg)", "CH / N"}, {curve});
  }
  return r;
}

CommandResult loophole_map_cmd(const Inputs &in, bool plot) {
  const auto f = linspace(in.number("f_min"), in.number("f_max"), checked_steps(in, "f_steps", 2));
  const auto eta =
      linspace(in.number("eta_min"), in.number("eta_max"), checked_steps(in, "eta_steps", 2));
  LoopholeOptions opt;
  opt.background = in.number("background");
  opt.optimizer.grid_step_deg = in.number("grid_step_deg");
  const auto map = loophole_map(f, eta, eps_from(in), opt);

  CommandResult r;
  r.table = CsvTable({"f", "eta", "ch_per_pair"});
  double peak = -1e300;
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < eta.size(); ++j) {
      r.table.add_row({fmt(f[i]), fmt(eta[j]), fmt(map.ch_per_pair[i][j])});
      peak = std::max(peak, map.ch_per_pair[i][j]);
    }
  const auto levels = in.list("levels");
  Json reached = Json::array();
  for (double lv : levels) reached.push_back(lv < peak);
  r.outputs = {{"max_ch_per_pair", peak}, {"levels", levels}, {"level_reached", reached}};
  if (plot) {
    // rows over f (y axis), columns over eta (x axis)
    r.svg = contour_svg({"CH per pair, true singles", "eta", "f"}, eta, f, map.ch_per_pair, levels);
  }
  return r;
}

CommandResult loophole_critical(const Inputs &in, bool plot) {
  const auto fs = in.list("f_values");
  if (fs.empty()) throw InvalidInput("key 'f_values' must not be empty");
  const auto eps = eps_from(in);
  LoopholeOptions opt;
  opt.background = in.number("background");
  const double tol = in.number("tolerance");

  CommandResult r;
  r.table = CsvTable({"f", "critical_eta"});
  Json rows = Json::array();
  Series curve{"critical eta", {}, {}};
  for (double f : fs) {
    const auto eta = critical_efficiency(make_state(f), eps, opt, tol);
    r.table.add_row({fmt(f), opt_fmt(eta)});
    rows.push_back({{"f", f}, {"critical_eta", opt_json(eta)}});
    if (eta) {
      curve.x.push_back(f);
      curve.y.push_back(*eta);
    }
  }
  r.outputs = {{"critical", rows}};
  if (plot) r.svg = line_plot_svg({"Critical detection efficiency", "f", "eta"}, {curve});
  return r;
}

CommandResult loophole_santos(const Inputs &in, bool) {
  SantosParams p;
  p.eta = in.number("eta");
  p.focal_m = in.number("focal_m");
  p.radius_m = in.number("radius_m");
  p.distance_m = in.number("distance_m");
  p.coherence_s = in.number("coherence_s");
  p.wavelength_m = in.number("wavelength_m");
  p.depth_m = in.number("depth_m");
  p.absorb_s = in.number("absorb_s");
  p.singles_rate_hz = in.number("singles_rate_hz");
  const double rate = santos_min_rate(p);
  const double t_bound = santos_T_bound(p);
  SantosParams back = p;
  back.absorb_s = t_bound;
  const double round_trip = santos_min_rate(back) / p.singles_rate_hz - 1.0;

  CommandResult r;
  r.table = CsvTable({"min_rate_hz", "t_bound_s", "round_trip_rel_err"});
  r.table.add_row({fmt(rate), fmt(t_bound), fmt(round_trip)});
  r.outputs = {{"min_rate_hz", rate},
               {"t_bound_s", t_bound},
               {"round_trip_rel_err", round_trip},
               {"below_bound", p.singles_rate_hz < rate}};
  return r;
}

CommandResult loophole_visibility(const Inputs &in, bool) {
  const auto v = visibility_inequality(in.number("n0"), in.number("n90"), in.number("n22p5"),
                                       in.number("n67p5"), in.number("eta"));
  CommandResult r;
  r.table = CsvTable({"v_a", "v_b", "lhs", "rhs", "satisfied"});
  r.table.add_row({fmt(v.v_a), fmt(v.v_b), fmt(v.lhs), fmt(v.rhs), v.satisfied ? "1" : "0"});
  r.outputs = {{"v_a", v.v_a},
               {"v_b", v.v_b},
               {"lhs", v.lhs},
               {"rhs", v.rhs},
               {"satisfied", v.satisfied}};
  return r;
}

CommandResult slit_pattern(const Inputs &in, bool plot) {
  const auto g = geometry_from(in);
  const auto x1 = linspace(in.number("x1_min_m"), in.number("x1_max_m"),
                           checked_steps(in, "x1_steps", 2));
  const auto x2 = linspace(in.number("x2_min_m"), in.number("x2_max_m"),
                           checked_steps(in, "x2_steps", 2));
  CommandResult r;
  r.table = CsvTable({"x1_m", "x2_m", "coincidence"});
  std::vector<std::vector<double>> z(x2.size(), std::vector<double>(x1.size()));
  double peak = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i)
    for (std::size_t j = 0; j < x2.size(); ++j) {
      const double c = coincidence_pattern(g, x1[i], x2[j]);
      z[j][i] = c;
      peak = std::max(peak, c);
      r.table.add_row({fmt(x1[i]), fmt(x2[j]), fmt(c)});
    }
  r.outputs = {{"max_coincidence", peak}};
  if (plot)
    r.svg = contour_svg({"Coincidence pattern", "x1 (m)", "x2 (m)"}, x1, x2, z,
                        {0.25 * peak, 0.5 * peak, 0.75 * peak});
  return r;
}

/// Mean spacing of interior local maxima; 0 with fewer than two.
double peak_spacing(const std::vector<CurvePoint> &curve, int *count) {
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i)
    if (curve[i].y > curve[i - 1].y && curve[i].y >= curve[i + 1].y) peaks.push_back(curve[i].x);
  *count = static_cast<int>(peaks.size());
  if (peaks.size() < 2) return 0.0;
  return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

CommandResult slit_scan(const Inputs &in, bool plot) {
  const auto g = geometry_from(in);
  const auto x1 = linspace(in.number("x1_min_m"), in.number("x1_max_m"),
                           checked_steps(in, "x1_steps", 3));
  const auto curve = pattern_scan(g, in.number("x2_m"), x1);
  CommandResult r;
  r.table = CsvTable({"x1_m", "coincidence_norm"});
  Series s{"coincidence", {}, {}};
  for (const auto &p : curve) {
    r.table.add_row({fmt(p.x), fmt(p.y)});
    s.x.push_back(p.x);
    s.y.push_back(p.y);
  }
  int peaks = 0;
  const double period = peak_spacing(curve, &peaks);
  r.outputs = {{"fringe_period_m", period},
               {"expected_period_m", g.wavelength_m * g.det1_distance_m / g.separation_m},
               {"peaks", peaks}};
  if (plot) r.svg = line_plot_svg({"Coincidence scan", "x1 (m)", "C / C_max"}, {s});
  return r;
}

CommandResult slit_fit(const Inputs &in, bool plot) {
  const auto g = geometry_from(in);
  const double x2 = in.number("x2_m");
  std::vector<DataPoint> data;
  const std::string path = in.text("data_path");
  if (path.empty()) {
    const auto x1 = linspace(in.number("x1_min_m"), in.number("x1_max_m"),
                             checked_steps(in, "points", 3));
    const double peak = in.number("peak_counts");
    if (!(peak > 0.0)) throw InvalidInput("key 'peak_counts' must be > 0");
    std::vector<double> expected;
    for (const auto &p : pattern_scan(g, x2, x1)) expected.push_back(peak * p.y);
    data = with_poisson_sigmas(x1, poisson_counts(expected, in.seed()));
  } else {
    const auto cols = read_csv_columns(path, {"x1_m", "count"}, {"sigma"});
    data = with_poisson_sigmas(cols[0], cols[1]);
    if (!cols[2].empty())
      for (std::size_t i = 0; i < data.size(); ++i) data[i].sigma = cols[2][i];
  }
  if (data.empty()) throw InvalidInput("no data points to fit");

  std::vector<double> xs;
  for (const auto &d : data) xs.push_back(d.x);
  std::vector<double> shape;
  for (const auto &p : pattern_scan(g, x2, xs)) shape.push_back(p.y);
  const std::vector<double> ones(xs.size(), 1.0);

  std::vector<std::vector<double>> pattern_cols{shape};
  if (in.flag("free_offset")) pattern_cols.push_back(ones);
  const auto pattern = chi2_fit_columns(data, pattern_cols);
  const auto linear = chi2_fit_columns(data, {ones, xs});

  CommandResult r;
  r.table = CsvTable({"x1_m", "count", "sigma", "pattern_model", "linear_model"});
  Series obs{"data", {}, {}}, pm{"pattern fit", {}, {}}, lm{"linear fit", {}, {}};
  for (std::size_t i = 0; i < data.size(); ++i) {
    double mp = 0.0;
    for (std::size_t k = 0; k < pattern_cols.size(); ++k)
      mp += pattern.params[k] * pattern_cols[k][i];
    const double ml = linear.params[0] + linear.params[1] * xs[i];
    r.table.add_row({fmt(xs[i]), fmt(data[i].count), fmt(data[i].sigma), fmt(mp), fmt(ml)});
    obs.x.push_back(xs[i]);
    obs.y.push_back(data[i].count);
    pm.x.push_back(xs[i]);
    pm.y.push_back(mp);
    lm.x.push_back(xs[i]);
    lm.y.push_back(ml);
  }
  r.outputs = {{"pattern_fit", fit_json(pattern)},
               {"linear_fit", fit_json(linear)},
               {"pattern_runs_z", sign_runs_z(pattern.residuals)}};
  if (!std::isfinite(r.outputs["pattern_runs_z"].get<double>()))
    r.outputs["pattern_runs_z"] = nullptr;
  if (plot) r.svg = line_plot_svg({"Model comparison", "x1 (m)", "counts"}, {obs, pm, lm});
  return r;
}

CommandResult alpha_simulate(const Inputs &in, bool) {
  const auto src = source_from(in, source_kind_from_string(in.text("source")));
  const auto gates = in.integer("gates");
  if (gates <= 0) throw InvalidInput("key 'gates' must be > 0");
  const auto boot = in.integer("bootstrap");
  if (boot < 0 || boot > 100000) throw InvalidInput("key 'bootstrap' must lie in [0, 100000]");
  const auto t = simulate_gates(src, gates, in.seed());
  const auto expected = expected_alpha(src);
  const auto exact = exact_alpha(src);

  CommandResult r;
  r.table = CsvTable({"gates", "n1", "n2", "nc", "alpha", "alpha_sigma", "expected_alpha",
                      "exact_alpha"});
  r.table.add_row({fmt_i(t.gates_n), fmt_i(t.n1), fmt_i(t.n2), fmt_i(t.nc),
                   t.defined ? fmt(t.alpha) : "nan", t.defined ? fmt(t.alpha_sigma) : "nan",
                   opt_fmt(expected), opt_fmt(exact)});
  r.outputs = tally_json(t);
  r.outputs["expected_alpha"] = opt_json(expected);
  r.outputs["exact_alpha"] = opt_json(exact);
  if (boot > 0 && t.defined)
    r.outputs["bootstrap_sigma"] =
        bootstrap_alpha_sigma(t, static_cast<int>(boot), derive_seed(in.seed(), 0xb007));
  return r;
}

CommandResult alpha_expected(const Inputs &in, bool) {
  const auto src = source_from(in, source_kind_from_string(in.text("source")));
  const auto expected = expected_alpha(src);
  const auto exact = exact_alpha(src);
  CommandResult r;
  r.table = CsvTable({"source", "expected_alpha", "exact_alpha"});
  r.table.add_row({to_string(src.kind), opt_fmt(expected), opt_fmt(exact)});
  r.outputs = {{"expected_alpha", opt_json(expected)}, {"exact_alpha", opt_json(exact)}};
  return r;
}

CommandResult alpha_rate_scan(const Inputs &in, bool plot) {
  const auto src = source_from(in, SourceKind::heralded_pdc);
  const auto points =
      alpha_vs_rate_scan(src, in.list("rates_hz"), in.number("acquisition_s"), in.seed());
  CommandResult r;
  r.table = CsvTable({"trigger_rate_hz", "gates", "n1", "n2", "nc", "alpha", "alpha_sigma",
                      "exact_alpha"});
  Json rows = Json::array();
  Series sim{"simulated", {}, {}}, exp{"expected", {}, {}};
  for (const auto &p : points) {
    const auto &t = p.tally;
    r.table.add_row({fmt(p.trigger_rate_hz), fmt_i(t.gates_n), fmt_i(t.n1), fmt_i(t.n2),
                     fmt_i(t.nc), t.defined ? fmt(t.alpha) : "nan",
                     t.defined ? fmt(t.alpha_sigma) : "nan", fmt(p.expected)});
    Json row = tally_json(t);
    row["trigger_rate_hz"] = p.trigger_rate_hz;
    row["exact_alpha"] = p.expected;
    rows.push_back(row);
    if (t.defined) {
      sim.x.push_back(p.trigger_rate_hz);
      sim.y.push_back(t.alpha);
    }
    exp.x.push_back(p.trigger_rate_hz);
    exp.y.push_back(p.expected);
  }
  r.outputs = {{"points", rows}};
  if (plot) r.svg = line_plot_svg({"Alpha against trigger rate", "rate (Hz)", "alpha"}, {sim, exp});
  return r;
}

CommandResult counts_accidentals(const Inputs &in, bool) {
  RateConfig rc{in.number("rate1_hz"), in.number("rate2_hz"), in.number("window_s"),
                in.number("duration_s")};
  const double analytic = accidental_rate(rc);
  const auto mc = simulate_accidentals(rc, in.integer("mc_starts"), in.seed());
  CommandResult r;
  r.table = CsvTable({"analytic_rate_hz", "mc_rate_hz", "mc_starts", "mc_coincidences",
                      "expected_counts"});
  r.table.add_row({fmt(analytic), fmt(mc.rate_hz), fmt_i(mc.starts), fmt_i(mc.coincidences),
                   fmt(analytic * rc.duration_s)});
  r.outputs = {{"analytic_rate_hz", analytic},
               {"mc_rate_hz", mc.rate_hz},
               {"expected_counts", analytic * rc.duration_s}};
  return r;
}

const std::map<std::string, Handler> &handlers() {
  static const std::map<std::string, Handler> h{
      {"bell scan", bell_scan},
      {"bell optimize", bell_optimize},
      {"loophole map", loophole_map_cmd},
      {"loophole critical", loophole_critical},
      {"loophole santos", loophole_santos},
      {"loophole visibility", loophole_visibility},
      {"slit pattern", slit_pattern},
      {"slit scan", slit_scan},
      {"slit fit", slit_fit},
      {"alpha simulate", alpha_simulate},
      {"alpha expected", alpha_expected},
      {"alpha rate-scan", alpha_rate_scan},
      {"counts accidentals", counts_accidentals},
  };
  return h;
}

} // namespace

CommandResult execute_command(const CommandSpec &cmd, const Inputs &in, bool want_plot) {
  const auto it = handlers().find(cmd.full_name());
  if (it == handlers().end()) throw InvalidInput("unknown command '" + cmd.full_name() + "'");
  return it->second(in, want_plot);
}

} // namespace pdclab::io
