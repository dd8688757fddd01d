#include "whq/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "whq/apodization.hpp"
#include "whq/evolution.hpp"
#include "whq/mollifiers.hpp"
#include "whq/operator_analysis.hpp"
#include "whq/portrait.hpp"
#include "whq/quantizer.hpp"

namespace whq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

std::string config_hash(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void atomic_write(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

double parse_number(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) ++pos;
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' has a non-numeric value '" + value + "'");
  }
}

std::vector<double> parse_number_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("config: empty entry in list '" + key + "'");
    out.push_back(parse_number(key, item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ConfigError("config: key '" + key + "' has an empty list");
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "command",          "grid.x_min",   "grid.x_max",
      "grid.n",           "apodization.kind", "apodization.psi_preset",
      "set.alpha",        "set.beta",     "sigma",
      "sigma_sweep",      "scheme",       "output_dir",
      "emit_plots",       "weight",       "domain",
      "observable",       "eigen_count",  "times",
      "psi0.center",      "psi0.width",
  };
  return keys;
}

const std::set<std::string>& known_tolerances() {
  static const std::set<std::string> keys = {"edge_decay_floor"};
  return keys;
}

Command parse_command(const std::string& value) {
  if (value == "window") return Command::window;
  if (value == "quantize") return Command::quantize;
  if (value == "spectrum") return Command::spectrum;
  if (value == "deficiency") return Command::deficiency;
  if (value == "portrait") return Command::portrait;
  if (value == "evolve") return Command::evolve;
  if (value == "validate-apodization") return Command::validate_apodization;
  throw ConfigError("config: unknown command '" + value + "'");
}

void validate(const RunConfig& c) {
  if (!(c.x_max > c.x_min)) throw ConfigError("config: grid.x_max must exceed grid.x_min");
  if (c.n < 8 || (c.n & (c.n - 1)) != 0) {
    throw ConfigError("config: grid.n must be a power of two >= 8");
  }
  if (std::abs(c.x_min + c.x_max) > 1e-12 * (c.x_max - c.x_min)) {
    throw ConfigError("config: grid must be zero-centred (x_min = -x_max)");
  }
  if (c.apod_kind != "pure_state" && c.apod_kind != "weyl_wigner") {
    throw ConfigError("config: apodization.kind must be pure_state or weyl_wigner");
  }
  if (c.scheme != "spectral" && c.scheme != "central_diff") {
    throw ConfigError("config: scheme must be spectral or central_diff");
  }
  if (c.weight != "one" && c.weight != "example16" && c.weight != "indicator" &&
      c.weight != "smooth_indicator") {
    throw ConfigError("config: unknown weight '" + c.weight + "'");
  }
  if (c.domain != "whole_line" && c.domain != "interval") {
    throw ConfigError("config: domain must be whole_line or interval");
  }
  if (c.alpha.has_value() != c.beta.has_value()) {
    throw ConfigError("config: set.alpha and set.beta must be given together");
  }
  if (c.alpha.has_value() && !(*c.alpha < *c.beta)) {
    throw ConfigError("config: need set.alpha < set.beta");
  }
  for (double s : c.sigma_sweep) {
    if (s < 0) throw ConfigError("config: sigma must be nonnegative");
  }
  if (c.eigen_count < 1) throw ConfigError("config: eigen_count must be >= 1");
  for (size_t i = 1; i < c.times.size(); ++i) {
    if (!(c.times[i] > c.times[i - 1])) {
      throw ConfigError("config: times must be strictly increasing");
    }
  }

  const bool needs_set = c.command == Command::window || c.command == Command::quantize ||
                         c.command == Command::spectrum || c.command == Command::evolve ||
                         (c.command == Command::deficiency && c.weight != "one") ||
                         (c.command == Command::portrait && c.observable == "window");
  if (needs_set && !c.alpha.has_value()) {
    throw ConfigError("config: this command requires set.alpha and set.beta");
  }
  if (c.command == Command::evolve && c.sigma_sweep.empty()) {
    throw ConfigError("config: evolve requires sigma or sigma_sweep");
  }
  if (c.command == Command::portrait && c.observable != "window" &&
      c.observable != "q" && c.observable != "p" && c.observable != "gaussian" &&
      c.observable != "q_gaussian") {
    throw ConfigError("config: unknown observable '" + c.observable + "'");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  c.raw_text = text;
  bool have_command = false;
  bool have_sigma = false, have_sweep = false;

  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    auto trim = [](std::string s) {
      const auto i = s.find_first_not_of(" \t\r");
      if (i == std::string::npos) return std::string();
      const auto j = s.find_last_not_of(" \t\r");
      return s.substr(i, j - i + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    }

    if (key.rfind("tolerances.", 0) == 0) {
      const std::string name = key.substr(std::string("tolerances.").size());
      if (!known_tolerances().count(name)) {
        throw ConfigError("config: unknown tolerance override '" + name + "'");
      }
      c.tolerances[name] = parse_number(key, value);
      continue;
    }
    if (!known_keys().count(key)) {
      throw ConfigError("config: unknown key '" + key + "'");
    }

    if (key == "command") {
      c.command = parse_command(value);
      have_command = true;
    } else if (key == "grid.x_min") {
      c.x_min = parse_number(key, value);
    } else if (key == "grid.x_max") {
      c.x_max = parse_number(key, value);
    } else if (key == "grid.n") {
      c.n = static_cast<int>(parse_number(key, value));
    } else if (key == "apodization.kind") {
      c.apod_kind = value;
    } else if (key == "apodization.psi_preset") {
      c.psi_preset = value;
    } else if (key == "set.alpha") {
      c.alpha = parse_number(key, value);
    } else if (key == "set.beta") {
      c.beta = parse_number(key, value);
    } else if (key == "sigma") {
      c.sigma_sweep = {parse_number(key, value)};
      have_sigma = true;
    } else if (key == "sigma_sweep") {
      c.sigma_sweep = parse_number_list(key, value);
      have_sweep = true;
    } else if (key == "scheme") {
      c.scheme = value;
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "emit_plots") {
      if (value != "true" && value != "false") {
        throw ConfigError("config: emit_plots must be true or false");
      }
      c.emit_plots = value == "true";
    } else if (key == "weight") {
      c.weight = value;
    } else if (key == "domain") {
      c.domain = value;
    } else if (key == "observable") {
      c.observable = value;
    } else if (key == "eigen_count") {
      c.eigen_count = static_cast<int>(parse_number(key, value));
    } else if (key == "times") {
      c.times = parse_number_list(key, value);
    } else if (key == "psi0.center") {
      c.psi0_center = parse_number(key, value);
    } else if (key == "psi0.width") {
      c.psi0_width = parse_number(key, value);
    }
  }
  if (!have_command) throw ConfigError("config: missing required key 'command'");
  if (have_sigma && have_sweep) {
    throw ConfigError("config: give either sigma or sigma_sweep, not both");
  }
  if (c.sigma_sweep.empty()) c.sigma_sweep = {0.0};
  if (c.times.empty()) c.times = {0.0, 0.05, 0.1, 0.15, 0.2, 0.3};
  validate(c);
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void emit_csv(const std::string& path, const CsvRow& header,
              const std::vector<CsvRow>& rows) {
  if (rows.empty()) throw std::runtime_error("emit_csv: empty table");
  std::string out;
  auto append_row = [&](const CsvRow& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  };
  append_row(header);
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw std::runtime_error("emit_csv: ragged row");
    }
    append_row(row);
  }
  atomic_write(path, out);
}

namespace {

struct PlotFrame {
  double x0, x1, y0, y1;        // data bounds
  static constexpr int kW = 860, kH = 520;
  static constexpr int kL = 70, kR = 20, kT = 40, kB = 50;

  double px(double x) const {
    return kL + (x - x0) / (x1 - x0) * (kW - kL - kR);
  }
  double py(double y) const {
    return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB);
  }
};

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#17becf"};

std::string svg_header(const std::string& title) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"520\" "
       "viewBox=\"0 0 860 520\">\n";
  s += "<rect width=\"860\" height=\"520\" fill=\"white\"/>\n";
  s += "<text x=\"430\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"16\">" + title + "</text>\n";
  return s;
}

std::string axis_svg(const PlotFrame& f) {
  std::ostringstream s;
  s << "<line x1=\"" << f.kL << "\" y1=\"" << (f.kH - f.kB) << "\" x2=\"" << (f.kW - f.kR)
    << "\" y2=\"" << (f.kH - f.kB) << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << f.kL << "\" y1=\"" << f.kT << "\" x2=\"" << f.kL << "\" y2=\""
    << (f.kH - f.kB) << "\" stroke=\"black\"/>\n";
  auto label = [&](double x, double y, double v, const char* anchor) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    s << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"" << anchor
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << buf << "</text>\n";
  };
  label(f.kL, f.kH - f.kB + 16, f.x0, "middle");
  label(f.kW - f.kR, f.kH - f.kB + 16, f.x1, "middle");
  label(f.kL - 6, f.kH - f.kB, f.y0, "end");
  label(f.kL - 6, f.kT + 10, f.y1, "end");
  return s.str();
}

}  // namespace

void emit_line_plot(const std::string& path, const std::string& title,
                    const std::vector<double>& x, const std::vector<Series>& series) {
  if (x.empty() || series.empty()) throw std::runtime_error("emit_line_plot: empty data");
  PlotFrame f{};
  f.x0 = *std::min_element(x.begin(), x.end());
  f.x1 = *std::max_element(x.begin(), x.end());
  f.y0 = 1e300;
  f.y1 = -1e300;
  for (const auto& s : series) {
    if (s.y.size() != x.size()) throw std::runtime_error("emit_line_plot: ragged series");
    for (double v : s.y) {
      f.y0 = std::min(f.y0, v);
      f.y1 = std::max(f.y1, v);
    }
  }
  if (f.x1 == f.x0) f.x1 = f.x0 + 1;
  if (f.y1 == f.y0) f.y1 = f.y0 + 1;

  std::string out = svg_header(title);
  out += axis_svg(f);
  for (size_t k = 0; k < series.size(); ++k) {
    std::ostringstream poly;
    poly << "<polyline fill=\"none\" stroke=\"" << kSeriesColors[k % 7]
         << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < x.size(); ++i) {
      poly << f.px(x[i]) << ',' << f.py(series[k].y[i]) << ' ';
    }
    poly << "\"/>\n";
    poly << "<text x=\"" << (f.kW - 150) << "\" y=\"" << (f.kT + 16 + 16 * k)
         << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << kSeriesColors[k % 7]
         << "\">" << series[k].label << "</text>\n";
    out += poly.str();
  }
  out += "</svg>\n";
  atomic_write(path, out);
}

void emit_heatmap(const std::string& path, const std::string& title,
                  const std::vector<double>& q, const std::vector<double>& p,
                  const std::vector<std::vector<double>>& values) {
  if (q.empty() || p.empty() || values.empty()) {
    throw std::runtime_error("emit_heatmap: empty data");
  }
  // block-average down to at most 128 cells per axis to keep files small
  const size_t nq = q.size(), np = p.size();
  const size_t bq = (nq + 127) / 128, bp = (np + 127) / 128;
  const size_t mq = (nq + bq - 1) / bq, mp = (np + bp - 1) / bp;

  std::vector<std::vector<double>> avg(mq, std::vector<double>(mp, 0.0));
  double lo = 1e300, hi = -1e300;
  for (size_t i = 0; i < mq; ++i) {
    for (size_t j = 0; j < mp; ++j) {
      double acc = 0.0;
      int cnt = 0;
      for (size_t a = i * bq; a < std::min(nq, (i + 1) * bq); ++a) {
        for (size_t b = j * bp; b < std::min(np, (j + 1) * bp); ++b) {
          acc += values[a][b];
          ++cnt;
        }
      }
      avg[i][j] = acc / std::max(1, cnt);
      lo = std::min(lo, avg[i][j]);
      hi = std::max(hi, avg[i][j]);
    }
  }
  if (hi == lo) hi = lo + 1;

  PlotFrame f{};
  f.x0 = q.front();
  f.x1 = q.back();
  f.y0 = p.front();
  f.y1 = p.back();

  std::string out = svg_header(title);
  out += axis_svg(f);
  const double cw = (f.kW - f.kL - f.kR) / static_cast<double>(mq);
  const double ch = (f.kH - f.kT - f.kB) / static_cast<double>(mp);
  std::ostringstream cells;
  cells.precision(5);
  for (size_t i = 0; i < mq; ++i) {
    for (size_t j = 0; j < mp; ++j) {
      const double t = (avg[i][j] - lo) / (hi - lo);
      // compact blue-white-red map
      const int r = static_cast<int>(255 * std::min(1.0, 2 * t));
      const int b = static_cast<int>(255 * std::min(1.0, 2 * (1 - t)));
      const int g = static_cast<int>(255 * (1 - std::abs(2 * t - 1)) * 0.85);
      cells << "<rect x=\"" << (f.kL + i * cw) << "\" y=\"" << (f.kH - f.kB - (j + 1) * ch)
            << "\" width=\"" << cw + 0.5 << "\" height=\"" << ch + 0.5 << "\" fill=\"rgb("
            << r << ',' << g << ',' << b << ")\"/>\n";
    }
  }
  out += cells.str();
  out += "</svg>\n";
  atomic_write(path, out);
}

namespace {

struct RunContext {
  const RunConfig& cfg;
  LineGrid grid;
  fs::path outdir;
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;
  json notes;

  void collect(const std::vector<std::string>& w) {
    warnings.insert(warnings.end(), w.begin(), w.end());
  }
};

SampledFunction1D load_psi_file(const std::string& path, const LineGrid& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("psi file: cannot open '" + path + "'");
  std::vector<double> xs, vs;
  double x, v;
  while (in >> x >> v) {
    xs.push_back(x);
    vs.push_back(v);
  }
  if (xs.size() < 2) throw std::runtime_error("psi file: need at least two samples");
  VectorXcd out(grid.n());
  for (int j = 0; j < grid.n(); ++j) {
    const double xx = grid.point(j);
    if (xx <= xs.front() || xx >= xs.back()) {
      out[j] = 0.0;
      continue;
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), xx);
    const size_t k = it - xs.begin();
    const double t = (xx - xs[k - 1]) / (xs[k] - xs[k - 1]);
    out[j] = (1 - t) * vs[k - 1] + t * vs[k];
  }
  return SampledFunction1D(grid, std::move(out));
}

Apodization make_apodization(RunContext& ctx) {
  const PhaseGrid pg = standard_phase_grid(ctx.grid);
  if (ctx.cfg.apod_kind == "weyl_wigner") {
    return weyl_wigner_apodization(pg);
  }
  SampledFunction1D psi = [&]() {
    if (ctx.cfg.psi_preset == "gaussian_ground") return psi_gaussian_ground(ctx.grid);
    if (ctx.cfg.psi_preset == "hermite_1") return psi_hermite_1(ctx.grid);
    if (ctx.cfg.psi_preset.rfind("file:", 0) == 0) {
      SampledFunction1D raw = load_psi_file(ctx.cfg.psi_preset.substr(5), ctx.grid);
      const double norm = raw.norm();
      if (norm <= 0) throw std::runtime_error("psi file: zero norm");
      ctx.notes["psi_renormalization"] = norm;
      raw.values /= norm;
      return raw;
    }
    throw ConfigError("config: unknown psi preset '" + ctx.cfg.psi_preset + "'");
  }();
  return pure_state_apodization(psi, pg);
}

IntervalSet config_set(const RunConfig& cfg) {
  return IntervalSet(*cfg.alpha, *cfg.beta);
}

SampledFunction1D make_weight(RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  if (cfg.weight == "one") {
    return SampledFunction1D(ctx.grid, VectorXcd::Ones(ctx.grid.n()));
  }
  const IntervalSet set = config_set(cfg);
  if (cfg.weight == "example16") {
    return gaussian_window_closed_form(set, ctx.grid);
  }
  const double sigma = cfg.weight == "indicator" ? 0.0 : cfg.sigma_sweep.front();
  SmoothIndicator u = smooth_indicator(set, sigma, ctx.grid);
  ctx.collect(u.values.warnings);
  return u.values;
}

void cmd_window(RunContext& ctx) {
  const IntervalSet set = config_set(ctx.cfg);
  const double sigma = ctx.cfg.sigma_sweep.front();
  Apodization apod = make_apodization(ctx);
  SmoothIndicator u = smooth_indicator(set, sigma, ctx.grid);
  SampledFunction1D w = window_function(u, apod);
  ctx.collect(u.values.warnings);
  ctx.collect(w.warnings);

  std::vector<CsvRow> rows;
  for (int j = 0; j < ctx.grid.n(); ++j) {
    rows.push_back({format_double(ctx.grid.point(j)),
                    format_double(u.values.values[j].real()),
                    format_double(w.values[j].real())});
  }
  const std::string csv = (ctx.outdir / "window.csv").string();
  emit_csv(csv, {"x", "u", "w"}, rows);
  ctx.outputs.push_back(csv);

  if (ctx.cfg.emit_plots) {
    std::vector<double> x(ctx.grid.n());
    Series su{"u", std::vector<double>(ctx.grid.n())};
    Series sw{"w", std::vector<double>(ctx.grid.n())};
    for (int j = 0; j < ctx.grid.n(); ++j) {
      x[j] = ctx.grid.point(j);
      su.y[j] = u.values.values[j].real();
      sw.y[j] = w.values[j].real();
    }
    const std::string plot = (ctx.outdir / "window.svg").string();
    emit_line_plot(plot, "window profile", x, {su, sw});
    ctx.outputs.push_back(plot);
  }
}

void cmd_quantize(RunContext& ctx) {
  const IntervalSet set = config_set(ctx.cfg);
  const double sigma = ctx.cfg.sigma_sweep.front();
  Apodization apod = make_apodization(ctx);
  const Scheme scheme =
      ctx.cfg.scheme == "spectral" ? Scheme::spectral : Scheme::central_diff;
  TruncatedObservables obs = truncated_observables(set, sigma, apod, ctx.grid, scheme);

  std::vector<CsvRow> rows;
  for (int j = 0; j < ctx.grid.n(); ++j) {
    rows.push_back({format_double(ctx.grid.point(j)),
                    format_double(obs.profiles.w.values[j].real()),
                    format_double(obs.profiles.b.values[j].real()),
                    format_double(obs.profiles.c.values[j].real()),
                    format_double(obs.profiles.c.values[j].imag()),
                    format_double(obs.profiles.d.values[j].real())});
  }
  const std::string csv = (ctx.outdir / "profiles.csv").string();
  emit_csv(csv, {"x", "w", "b", "c_re", "c_im", "d"}, rows);
  ctx.outputs.push_back(csv);

  ctx.notes["profile_path"] = obs.profiles.path_used;
  ctx.notes["hermiticity_residual_a_q"] = obs.a_q.hermiticity_residual();
  ctx.notes["hermiticity_residual_a_p"] = obs.a_p.hermiticity_residual();
  ctx.notes["hermiticity_residual_a_p2"] = obs.a_p2.hermiticity_residual();

  if (ctx.cfg.emit_plots) {
    const int n = ctx.grid.n();
    std::vector<double> q(n), p(n);
    std::vector<std::vector<double>> mag(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
      q[i] = ctx.grid.point(i);
      p[i] = ctx.grid.point(i);
      for (int j = 0; j < n; ++j) mag[i][j] = std::abs(obs.a_p2.entries(i, j));
    }
    const std::string plot = (ctx.outdir / "a_p2_magnitude.svg").string();
    emit_heatmap(plot, "|A_p2| entries", q, p, mag);
    ctx.outputs.push_back(plot);
  }
}

void cmd_spectrum(RunContext& ctx) {
  const IntervalSet set = config_set(ctx.cfg);
  SampledFunction1D a = make_weight(ctx);
  const Scheme scheme =
      ctx.cfg.scheme == "spectral" ? Scheme::spectral : Scheme::central_diff;
  WeightedOperator ka = weighted_operator(a, WeightKind::kinetic, ctx.grid, scheme);
  SpectrumResult spec = spectrum(ka.matrix, ctx.cfg.eigen_count);

  std::vector<CsvRow> rows;
  for (int i = 0; i < spec.eigenvalues.size(); ++i) {
    SampledFunction1D v(ctx.grid, spec.eigenvectors.col(i));
    rows.push_back({std::to_string(i), format_double(spec.eigenvalues[i]),
                    format_double(spec.residuals[i]),
                    format_double(mass_in_set(v, set))});
  }
  const std::string csv = (ctx.outdir / "spectrum.csv").string();
  emit_csv(csv, {"index", "eigenvalue", "residual", "mass_in_E"}, rows);
  ctx.outputs.push_back(csv);

  if (ctx.cfg.emit_plots) {
    std::vector<double> idx(spec.eigenvalues.size());
    Series ev{"eigenvalue", std::vector<double>(spec.eigenvalues.size())};
    for (int i = 0; i < spec.eigenvalues.size(); ++i) {
      idx[i] = i;
      ev.y[i] = spec.eigenvalues[i];
    }
    const std::string plot = (ctx.outdir / "spectrum.svg").string();
    emit_line_plot(plot, "weighted kinetic spectrum", idx, {ev});
    ctx.outputs.push_back(plot);
  }
}

void cmd_deficiency(RunContext& ctx) {
  SampledFunction1D a = make_weight(ctx);
  const DeficiencyDomain domain = ctx.cfg.domain == "interval"
                                      ? DeficiencyDomain::interval
                                      : DeficiencyDomain::whole_line;
  std::optional<IntervalSet> set;
  if (ctx.cfg.alpha.has_value()) set = config_set(ctx.cfg);
  DeficiencyReport rep = deficiency_analysis(a, domain, set);

  const char* verdict = rep.verdict == DeficiencyVerdict::essentially_self_adjoint
                            ? "essentially_self_adjoint"
                        : rep.verdict == DeficiencyVerdict::deficient ? "deficient"
                                                                      : "inconclusive";
  std::vector<CsvRow> rows{{verdict, std::to_string(rep.n_plus),
                            std::to_string(rep.n_minus),
                            bool_str(rep.plus_branch.normalizable),
                            format_double(rep.plus_branch.log_norm_growth),
                            bool_str(rep.minus_branch.normalizable),
                            format_double(rep.minus_branch.log_norm_growth)}};
  const std::string csv = (ctx.outdir / "deficiency.csv").string();
  emit_csv(csv,
           {"verdict", "n_plus", "n_minus", "plus_normalizable", "plus_log_mass_growth",
            "minus_normalizable", "minus_log_mass_growth"},
           rows);
  ctx.outputs.push_back(csv);

  if (!rep.zero_locations.empty()) {
    ctx.notes["zero_locations"] = rep.zero_locations;
  }
  ctx.notes["windows_used"] = rep.windows_used;

  if (ctx.cfg.emit_plots && !rep.windows_used.empty()) {
    Series plus{"plus branch", rep.plus_branch.window_log_masses};
    Series minus{"minus branch", rep.minus_branch.window_log_masses};
    if (!plus.y.empty() && plus.y.size() == rep.windows_used.size()) {
      const std::string plot = (ctx.outdir / "deficiency.svg").string();
      emit_line_plot(plot, "log L2 mass vs window", rep.windows_used, {plus, minus});
      ctx.outputs.push_back(plot);
    }
  }
}

void cmd_portrait(RunContext& ctx) {
  Apodization apod = make_apodization(ctx);
  const PhaseGrid pg = standard_phase_grid(ctx.grid);

  SampledFunction2D f = [&]() {
    const std::string& obs = ctx.cfg.observable;
    if (obs == "window") {
      const IntervalSet set = config_set(ctx.cfg);
      SmoothIndicator u = smooth_indicator(set, ctx.cfg.sigma_sweep.front(), ctx.grid);
      MatrixXcd vals(pg.q_axis.n(), pg.p_axis.n());
      for (int i = 0; i < pg.q_axis.n(); ++i) {
        vals.row(i).setConstant(u.values.values[i]);
      }
      return SampledFunction2D(pg, std::move(vals));
    }
    if (obs == "q") {
      return sample_function(pg, [](double q, double) { return complexd(q, 0); });
    }
    if (obs == "p") {
      return sample_function(pg, [](double, double p) { return complexd(p, 0); });
    }
    if (obs == "gaussian") {
      return sample_function(pg, [](double q, double p) {
        return complexd(std::exp(-0.5 * (q * q + p * p)), 0);
      });
    }
    // q_gaussian
    return sample_function(pg, [](double q, double p) {
      return complexd(q * std::exp(-0.5 * (q * q + p * p)), 0);
    });
  }();

  Portrait port = portrait_convolution(f, apod, ctx.cfg.observable);
  ctx.collect(port.values.warnings);
  if (!apod.is_weyl_wigner()) {
    ctx.notes["portrait_kernel_min"] = portrait_kernel_min(apod);
  }

  std::vector<CsvRow> rows;
  for (int i = 0; i < port.values.nq(); ++i) {
    for (int j = 0; j < port.values.np(); ++j) {
      rows.push_back({format_double(pg.q_axis.point(i)), format_double(pg.p_axis.point(j)),
                      format_double(port.values.values(i, j).real()),
                      format_double(port.values.values(i, j).imag())});
    }
  }
  const std::string csv = (ctx.outdir / "portrait.csv").string();
  emit_csv(csv, {"q", "p", "value_re", "value_im"}, rows);
  ctx.outputs.push_back(csv);

  if (ctx.cfg.emit_plots) {
    std::vector<double> q(port.values.nq()), p(port.values.np());
    std::vector<std::vector<double>> re(port.values.nq(),
                                        std::vector<double>(port.values.np()));
    for (int i = 0; i < port.values.nq(); ++i) {
      q[i] = pg.q_axis.point(i);
      for (int j = 0; j < port.values.np(); ++j) {
        re[i][j] = port.values.values(i, j).real();
      }
    }
    for (int j = 0; j < port.values.np(); ++j) p[j] = pg.p_axis.point(j);
    const std::string plot = (ctx.outdir / "portrait.svg").string();
    emit_heatmap(plot, "semiclassical portrait (" + ctx.cfg.observable + ")", q, p, re);
    ctx.outputs.push_back(plot);
  }
}

void cmd_evolve(RunContext& ctx) {
  const IntervalSet set = config_set(ctx.cfg);
  const Scheme scheme =
      ctx.cfg.scheme == "spectral" ? Scheme::spectral : Scheme::central_diff;

  const double center = ctx.cfg.psi0_center.value_or(0.5 * (set.alpha + set.beta));
  const double width = ctx.cfg.psi0_width.value_or(set.width() / 10.0);
  SampledFunction1D psi0 = gaussian_state(ctx.grid, center, width);
  for (int j = 0; j < ctx.grid.n(); ++j) {
    if (!set.contains(ctx.grid.point(j))) psi0.values[j] = 0.0;
  }
  psi0.values /= psi0.norm();

  std::vector<SampledFunction1D> weights;
  for (double s : ctx.cfg.sigma_sweep) {
    SmoothIndicator u = smooth_indicator(set, s, ctx.grid);
    ctx.collect(u.values.warnings);
    weights.push_back(u.values);
  }
  EvolutionComparison cmp = compare_evolutions(set, weights, ctx.cfg.sigma_sweep, psi0,
                                               ctx.cfg.times, scheme);
  ctx.notes["fidelity_trend_monotone"] = cmp.fidelity_trend_monotone;
  ctx.notes["final_fidelities"] = cmp.final_fidelities;

  std::vector<CsvRow> rows;
  for (const auto& r : cmp.rows) {
    rows.push_back({format_double(r.sharpness), format_double(r.t),
                    format_double(r.fidelity), format_double(r.renormalization),
                    format_double(r.leakage), format_double(r.mean_x_gap),
                    format_double(r.mean_x2_gap)});
  }
  const std::string csv = (ctx.outdir / "evolution.csv").string();
  emit_csv(csv,
           {"sigma", "t", "fidelity", "renormalization", "leakage", "mean_x_gap",
            "mean_x2_gap"},
           rows);
  ctx.outputs.push_back(csv);

  if (ctx.cfg.emit_plots) {
    std::vector<Series> series;
    for (size_t s = 0; s < ctx.cfg.sigma_sweep.size(); ++s) {
      Series fid{"sigma=" + std::to_string(ctx.cfg.sigma_sweep[s]), {}};
      for (const auto& r : cmp.rows) {
        if (r.sharpness == ctx.cfg.sigma_sweep[s]) fid.y.push_back(r.fidelity);
      }
      series.push_back(std::move(fid));
    }
    const std::string plot = (ctx.outdir / "fidelity.svg").string();
    emit_line_plot(plot, "well vs weighted-kinetic fidelity", ctx.cfg.times, series);
    ctx.outputs.push_back(plot);
  }
}

void cmd_validate_apodization(RunContext& ctx) {
  Apodization apod = make_apodization(ctx);
  const AssumptionReport& rep = apod.assumption_report;

  std::vector<CsvRow> rows{{bool_str(rep.a1_pass), format_double(rep.a1_min),
                            bool_str(rep.a1_distributional), bool_str(rep.a2_pass),
                            format_double(rep.a2_max_second_diff),
                            format_double(rep.a2_refinement_ratio), bool_str(rep.a3_pass),
                            format_double(rep.a3_min), bool_str(rep.distributional)}};
  const std::string csv = (ctx.outdir / "assumptions.csv").string();
  emit_csv(csv,
           {"a1_pass", "a1_min", "a1_distributional", "a2_pass", "a2_max_second_diff",
            "a2_refinement_ratio", "a3_pass", "a3_min", "distributional"},
           rows);
  ctx.outputs.push_back(csv);

  if (ctx.cfg.emit_plots && !apod.is_weyl_wigner()) {
    const int n = ctx.grid.n();
    std::vector<double> x(n);
    Series g{"gamma", std::vector<double>(n)};
    for (int j = 0; j < n; ++j) {
      x[j] = ctx.grid.point(j);
      g.y[j] = apod.gamma.values[j].real();
    }
    const std::string plot = (ctx.outdir / "gamma.svg").string();
    emit_line_plot(plot, "window profile gamma", x, {g});
    ctx.outputs.push_back(plot);
  }
}

}  // namespace

int run(const RunConfig& config, bool quiet) {
  const auto t_start = std::chrono::steady_clock::now();
  json timings;
  try {
    RunContext ctx{config, LineGrid(config.x_min, config.x_max, config.n),
                   fs::path(config.output_dir)};
    fs::create_directories(ctx.outdir);

    switch (config.command) {
      case Command::window: cmd_window(ctx); break;
      case Command::quantize: cmd_quantize(ctx); break;
      case Command::spectrum: cmd_spectrum(ctx); break;
      case Command::deficiency: cmd_deficiency(ctx); break;
      case Command::portrait: cmd_portrait(ctx); break;
      case Command::evolve: cmd_evolve(ctx); break;
      case Command::validate_apodization: cmd_validate_apodization(ctx); break;
    }

    const auto t_end = std::chrono::steady_clock::now();
    timings["total_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_start).count();

    json manifest;
    manifest["version"] = "whquant 0.1.0";
    manifest["config_hash"] = config_hash(config.raw_text);
    manifest["config"] = config.raw_text;
    manifest["outputs"] = ctx.outputs;
    manifest["warnings"] = ctx.warnings;
    manifest["timings"] = timings;
    manifest["notes"] = ctx.notes;
    atomic_write((ctx.outdir / "manifest.json").string(), manifest.dump(2) + "\n");

    if (!quiet) {
      for (const auto& o : ctx.outputs) std::cout << "wrote " << o << "\n";
      for (const auto& w : ctx.warnings) std::cout << "warning: " << w << "\n";
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    if (!quiet) std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    if (!quiet) std::cerr << "error: " << e.what() << "\n";
    return kExitNumericalError;
  }
}

int run_config_file(const std::string& config_path,
                    const std::optional<std::string>& output_override, bool quiet) {
  RunConfig config;
  try {
    config = parse_config_file(config_path);
  } catch (const ConfigError& e) {
    if (!quiet) std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (output_override.has_value()) {
    config.output_dir = *output_override;
  } else if (const char* env = std::getenv(kOutputDirEnvVar)) {
    config.output_dir = env;
  }
  return run(config, quiet);
}

}  // namespace whq::cli
