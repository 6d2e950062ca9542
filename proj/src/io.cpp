#include "vhj/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace vhj {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvTable::write(const std::string& path) const {
  std::ostringstream os;
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ",";
      if (r < columns[c].size()) os << format_full(columns[c][r]);
    }
    os << "\n";
  }
  write_text_file(path, os.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open for writing: " + path);
  f << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open for reading: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

CsvTable corrector_csv(const CorrectorSolution& s) {
  CsvTable t;
  t.header = {"x", "f", "f_prime", "residual"};
  t.columns.resize(4);
  t.columns[0] = s.x;
  t.columns[1] = s.f;
  t.columns[2] = s.f_prime;
  t.columns[3].assign(s.x.size(), 0.0);
  return t;
}

std::string corrector_header_json(const CorrectorSolution& s) {
  nlohmann::json j;
  j["lambda"] = s.lambda;
  j["window"] = {s.window.lo, s.window.hi};
  j["role"] = role_name(s.role);
  j["residual_sup"] = s.residual_sup;
  j["residual_fd"] = s.residual_fd;
  j["band"] = {s.band_lo, s.band_hi};
  j["degenerate_extremal"] = s.degenerate_extremal;
  j["seed"] = s.seed;
  return j.dump(2);
}

CsvTable theta_map_csv(const ThetaMap& m) {
  CsvTable t;
  t.header = {"lambda", "theta_min", "theta_max", "stderr_min", "stderr_max", "n_seeds"};
  t.columns.resize(6);
  for (const auto& s : m.samples) {
    t.columns[0].push_back(s.lambda);
    t.columns[1].push_back(s.theta_min);
    t.columns[2].push_back(s.theta_max);
    t.columns[3].push_back(s.stderr_min);
    t.columns[4].push_back(s.stderr_max);
    t.columns[5].push_back(s.n_seeds);
  }
  return t;
}

CsvTable curve_csv(const EffectiveCurve& c) {
  CsvTable t;
  t.header = {"theta", "value", "flat_flag"};
  t.columns.resize(3);
  t.columns[0] = c.theta;
  t.columns[1] = c.value;
  for (auto f : c.flat_flag) t.columns[2].push_back(f);
  return t;
}

CsvTable parabolic_csv(const ParabolicRun& run) {
  CsvTable t;
  t.header = {"t", "u_center", "slope", "lip_central", "front_reach"};
  t.columns = {run.times, run.u_center, run.slope, run.lip, run.front_reach};
  return t;
}

std::string parabolic_header_json(const ParabolicRun& run) {
  nlohmann::json j;
  j["grid"] = {{"x_lo", run.grid.x_lo},
               {"x_hi", run.grid.x_hi},
               {"nx", run.grid.nx},
               {"cfl_safety", run.grid.cfl_safety}};
  j["theta"] = run.theta;
  j["seed"] = run.seed;
  j["sigma_policy"] = "global dissipation from the per-step slope range, enlarged 10%";
  j["sigma_max"] = run.sigma_max;
  j["steps"] = run.steps;
  j["HL_est"] = run.HL_est;
  j["HU_est"] = run.HU_est;
  return j.dump(2);
}

CsvTable bridge_csv(const BridgeResult& br) {
  CsvTable t;
  t.header = {"x", "g"};
  t.columns = {br.x, br.g};
  return t;
}

CsvTable glue_csv(const GluedFunction& g) {
  CsvTable t;
  t.header = {"x", "g_eps", "residual"};
  t.columns = {g.x, g.g, g.residual};
  return t;
}

std::string glue_header_json(const GluedFunction& g) {
  nlohmann::json j;
  j["mu"] = g.mu;
  j["epsilon"] = g.epsilon;
  j["descent"] = g.descent;
  j["mollifier_index"] = g.mollifier_index;
  j["cutoff"] = {{"lo", g.cutoff_lo},
                 {"hi", g.cutoff_hi},
                 {"ramp_width", g.ramp_width},
                 {"slope_sup", g.cutoff_slope_sup}};
  j["residual_min"] = g.residual_min;
  j["residual_max"] = g.residual_max;
  j["status"] = g.status == GlueStatus::ok ? "ok" : "failed_residual";
  return j.dump(2);
}

void write_spacetime_binary(const std::string& path, const std::vector<double>& xs,
                            const std::vector<double>& times,
                            const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open for writing: " + path);
  for (const auto& row : rows)
    f.write(reinterpret_cast<const char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
  nlohmann::json side;
  side["layout"] = "row-major time x space, little-endian float64";
  side["n_time"] = times.size();
  side["n_space"] = xs.size();
  side["times"] = times;
  side["x_lo"] = xs.empty() ? 0.0 : xs.front();
  side["x_hi"] = xs.empty() ? 0.0 : xs.back();
  write_text_file(path + ".json", side.dump(2));
}

void write_svg_plot(const std::string& path, const std::vector<SvgSeries>& series,
                    const std::string& title, const std::string& x_label,
                    const std::string& y_label) {
  const int W = 720, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmax > xmin)) { xmax = xmin + 1; }
  if (!(ymax > ymin)) { ymax = ymin + 1; }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<!-- data (regenerate the plot from these columns):\n";
  for (size_t si = 0; si < series.size(); ++si) {
    os << "series " << si << ": x,y\n";
    for (size_t i = 0; i < series[si].x.size(); ++i)
      os << format_full(series[si].x[i]) << "," << format_full(series[si].y[i]) << "\n";
  }
  os << "-->\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
     << H - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
     << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0;
    const double yv = ymin + (ymax - ymin) * k / 5.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << format_full(xv).substr(0, 8)
       << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
       << "\" font-size=\"11\" text-anchor=\"end\">" << format_full(yv).substr(0, 8)
       << "</text>\n";
    os << "<line x1=\"" << px(xv) << "\" y1=\"" << H - mb << "\" x2=\"" << px(xv) << "\" y2=\""
       << H - mb + 4 << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml - 4 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml << "\" y2=\""
       << py(yv) << "\" stroke=\"black\"/>\n";
  }
  os << "<text x=\"" << (W / 2) << "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">"
     << title << "</text>\n";
  os << "<text x=\"" << (W / 2) << "\" y=\"" << H - 12
     << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << (H / 2)
     << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (H / 2)
     << ")\">" << y_label << "</text>\n";
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << s.width
       << "\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) os << px(s.x[i]) << "," << py(s.y[i]) << " ";
    os << "\"/>\n";
  }
  os << "</svg>\n";
  write_text_file(path, os.str());
}

}  // namespace vhj
