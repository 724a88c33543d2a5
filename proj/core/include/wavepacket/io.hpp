#ifndef WAVEPACKET_IO_HPP
#define WAVEPACKET_IO_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wavepacket/experiment.hpp"

namespace wavepacket::io {

inline constexpr const char* kToolVersion = "wavepacket 0.1.0";

/// Thrown on malformed input files; carries the 1-based line number.
/// CLI exit code 2.
struct ParseError : std::runtime_error {
  int line;
  ParseError(const std::string& msg, int line_number)
      : std::runtime_error(msg + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
};

/// Shortest round-trip decimal representation; locale-independent.
std::string format_double(double v);

/// Curve file: '#key=value' metadata header, one '#'-prefixed column line,
/// comma-separated numeric rows.
struct CurveFile {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const CurveFile& file);
CurveFile read_csv(const std::string& path);

/// Dataset schema: columns slit_width_m, fwhm_m, vdw_flag (0/1), weight.
std::vector<DataPoint> parse_dataset(const std::string& path);
void write_dataset(const std::string& path, const std::vector<DataPoint>& data,
                   const std::vector<std::pair<std::string, std::string>>& metadata = {});

/// Flat key=value config; '#' comments and blank lines ignored.
std::map<std::string, std::string> read_config(const std::string& path);

/// Minimal self-contained SVG polyline plot.
struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  int width = 720;
  int height = 480;
};

void write_svg_plot(const std::string& path, const std::vector<double>& x,
                    const std::vector<double>& y, const PlotSpec& spec);

}  // namespace wavepacket::io

#endif
