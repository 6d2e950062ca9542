#pragma once

#include <map>
#include <string>
#include <vector>

#include "vhj/bridge.hpp"
#include "vhj/cell.hpp"
#include "vhj/parabolic.hpp"
#include "vhj/theta.hpp"

namespace vhj {

/// CSV dialect: comma separator, '.' decimal point, header row, LF endings,
/// full round-trip precision.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  void write(const std::string& path) const;
};

std::string format_full(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

CsvTable corrector_csv(const CorrectorSolution& s);
std::string corrector_header_json(const CorrectorSolution& s);

CsvTable theta_map_csv(const ThetaMap& m);
CsvTable curve_csv(const EffectiveCurve& c);
CsvTable parabolic_csv(const ParabolicRun& run);
std::string parabolic_header_json(const ParabolicRun& run);
CsvTable bridge_csv(const BridgeResult& br);
CsvTable glue_csv(const GluedFunction& g);
std::string glue_header_json(const GluedFunction& g);

/// Full space-time dump: little-endian 64-bit floats, row-major time x space,
/// described by a JSON sidecar written next to it.
void write_spacetime_binary(const std::string& path, const std::vector<double>& xs,
                            const std::vector<double>& times,
                            const std::vector<std::vector<double>>& rows);

struct SvgSeries {
  std::vector<double> x, y;
  std::string color = "#20639b";
  double width = 1.5;
};

/// Self-contained SVG line plot; the plotted data rides along in a comment so
/// the figure can be regenerated from itself.
void write_svg_plot(const std::string& path, const std::vector<SvgSeries>& series,
                    const std::string& title, const std::string& x_label,
                    const std::string& y_label);

}  // namespace vhj
