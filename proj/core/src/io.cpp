#include "wavepacket/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wavepacket::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& s, int line) {
  const std::string t = trim(s);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + t + "'", line);
  }
  if (pos != t.size()) throw ParseError("trailing characters after number: '" + t + "'", line);
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_csv(const std::string& path, const CurveFile& file) {
  std::ofstream out = open_out(path);
  out << "#tool=" << kToolVersion << "\n";
  for (const auto& [k, v] : file.metadata) out << "#" << k << "=" << v << "\n";
  out << "#columns=";
  for (std::size_t i = 0; i < file.columns.size(); ++i)
    out << (i ? "," : "") << file.columns[i];
  out << "\n";
  for (const auto& row : file.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

CurveFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  CurveFile file;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(1, eq - 1);
      const std::string val = line.substr(eq + 1);
      if (key == "columns")
        file.columns = split(val, ',');
      else
        file.metadata.emplace_back(key, val);
      continue;
    }
    const auto parts = split(line, ',');
    if (!file.columns.empty() && parts.size() != file.columns.size())
      throw ParseError("expected " + std::to_string(file.columns.size()) + " columns", lineno);
    std::vector<double> row;
    row.reserve(parts.size());
    for (const auto& p : parts) row.push_back(parse_number(p, lineno));
    file.rows.push_back(std::move(row));
  }
  return file;
}

std::vector<DataPoint> parse_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset: " + path, 0);
  std::vector<DataPoint> data;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto parts = split(line, ',');
    if (parts.size() < 2 || parts.size() > 4)
      throw ParseError("expected 2-4 columns (slit_width_m, fwhm_m, vdw_flag, weight)", lineno);
    DataPoint p;
    p.slit_width = parse_number(parts[0], lineno);
    p.measured_fwhm = parse_number(parts[1], lineno);
    if (parts.size() > 2) {
      const double flag = parse_number(parts[2], lineno);
      if (flag != 0.0 && flag != 1.0) throw ParseError("vdw_flag must be 0 or 1", lineno);
      p.vdw_flag = flag != 0.0;
    }
    if (parts.size() > 3) p.weight = parse_number(parts[3], lineno);
    if (!(p.slit_width > 0.0) || !(p.measured_fwhm > 0.0))
      throw ParseError("slit_width_m and fwhm_m must be > 0", lineno);
    data.push_back(p);
  }
  if (data.empty()) throw ParseError("dataset contains no data rows", lineno);
  return data;
}

void write_dataset(const std::string& path, const std::vector<DataPoint>& data,
                   const std::vector<std::pair<std::string, std::string>>& metadata) {
  std::ofstream out = open_out(path);
  out << "#tool=" << kToolVersion << "\n";
  for (const auto& [k, v] : metadata) out << "#" << k << "=" << v << "\n";
  out << "#columns=slit_width_m,fwhm_m,vdw_flag,weight\n";
  for (const auto& p : data)
    out << format_double(p.slit_width) << "," << format_double(p.measured_fwhm) << ","
        << (p.vdw_flag ? 1 : 0) << "," << format_double(p.weight) << "\n";
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config: " + path, 0);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", lineno);
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void write_svg_plot(const std::string& path, const std::vector<double>& x,
                    const std::vector<double>& y, const PlotSpec& spec) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("svg plot needs >= 2 matching points");
  const double margin = 60.0;
  const double pw = spec.width - 2.0 * margin;
  const double ph = spec.height - 2.0 * margin;

  auto xt = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  double xmin = xt(x.front()), xmax = xt(x.front());
  double ymin = y.front(), ymax = y.front();
  for (std::size_t i = 0; i < x.size(); ++i) {
    xmin = std::min(xmin, xt(x[i]));
    xmax = std::max(xmax, xt(x[i]));
    ymin = std::min(ymin, y[i]);
    ymax = std::max(ymax, y[i]);
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  auto px = [&](double v) { return margin + (xt(v) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double v) { return spec.height - margin - (v - ymin) / (ymax - ymin) * ph; };

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << spec.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << spec.title << "</text>\n";
  // axes
  out << "<line x1=\"" << margin << "\" y1=\"" << spec.height - margin << "\" x2=\""
      << spec.width - margin << "\" y2=\"" << spec.height - margin
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
      << "\" y2=\"" << spec.height - margin << "\" stroke=\"black\"/>\n";
  // tick labels at the corners of the data range
  out << "<text x=\"" << margin << "\" y=\"" << spec.height - margin + 20
      << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(spec.log_x ? std::pow(10.0, xmin) : xmin) << "</text>\n";
  out << "<text x=\"" << spec.width - margin << "\" y=\"" << spec.height - margin + 20
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(spec.log_x ? std::pow(10.0, xmax) : xmax) << "</text>\n";
  out << "<text x=\"" << margin - 8 << "\" y=\"" << spec.height - margin
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(ymin) << "</text>\n";
  out << "<text x=\"" << margin - 8 << "\" y=\"" << margin
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(ymax) << "</text>\n";
  out << "<text x=\"" << spec.width / 2 << "\" y=\"" << spec.height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << spec.x_label << (spec.log_x ? " (log scale)" : "") << "</text>\n";
  out << "<text x=\"18\" y=\"" << spec.height / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << spec.height / 2 << ")\">" << spec.y_label
      << "</text>\n";
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i)
    out << format_double(px(x[i])) << "," << format_double(py(y[i])) << " ";
  out << "\"/>\n</svg>\n";
}

}  // namespace wavepacket::io
