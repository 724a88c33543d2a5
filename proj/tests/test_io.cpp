#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "wavepacket/io.hpp"

using namespace wavepacket;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "wavepacket_io_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("csv round trip preserves metadata, columns and values") {
  TempDir dir;
  io::CurveFile file;
  file.metadata = {{"experiment.t_s", "0.00665"}, {"coherence.delta_kx", "9000000"}};
  file.columns = {"slit_width_m", "fwhm_m"};
  file.rows = {{1.0e-7, 2.345678901234567e-6}, {2.0e-7, 3.0e-6}, {5e-7, 1.0 / 3.0}};
  const std::string path = dir.file("curve.csv");
  io::write_csv(path, file);

  const io::CurveFile back = io::read_csv(path);
  CHECK(back.columns == file.columns);
  REQUIRE(back.rows.size() == file.rows.size());
  for (std::size_t i = 0; i < file.rows.size(); ++i)
    for (std::size_t j = 0; j < file.rows[i].size(); ++j)
      CHECK(back.rows[i][j] == file.rows[i][j]);  // exact via %.17g
  bool found = false;
  for (const auto& [k, v] : back.metadata)
    if (k == "experiment.t_s" && v == "0.00665") found = true;
  CHECK(found);
}

TEST_CASE("csv writes are byte-identical across runs") {
  TempDir dir;
  io::CurveFile file;
  file.columns = {"a", "b"};
  file.rows = {{0.1, 0.2}, {0.3, 0.4}};
  io::write_csv(dir.file("one.csv"), file);
  io::write_csv(dir.file("two.csv"), file);
  CHECK(slurp(dir.file("one.csv")) == slurp(dir.file("two.csv")));
}

TEST_CASE("dataset: parse and error reporting with line numbers") {
  TempDir dir;
  {
    std::ofstream out(dir.file("data.csv"));
    out << "# comment\n";
    out << "#columns=slit_width_m,fwhm_m,vdw_flag,weight\n";
    out << "1e-7,2e-6,1,2.0\n";
    out << "2e-7,3e-6\n";
  }
  const auto data = io::parse_dataset(dir.file("data.csv"));
  REQUIRE(data.size() == 2);
  CHECK(data[0].slit_width == 1e-7);
  CHECK(data[0].vdw_flag);
  CHECK(data[0].weight == 2.0);
  CHECK_FALSE(data[1].vdw_flag);

  {
    std::ofstream out(dir.file("bad.csv"));
    out << "1e-7,2e-6\n";
    out << "oops,3e-6\n";
  }
  try {
    io::parse_dataset(dir.file("bad.csv"));
    FAIL("expected ParseError");
  } catch (const io::ParseError& e) {
    CHECK(e.line == 2);
  }

  {
    std::ofstream out(dir.file("empty.csv"));
    out << "# nothing here\n";
  }
  CHECK_THROWS_AS(io::parse_dataset(dir.file("empty.csv")), io::ParseError);
}

TEST_CASE("dataset: write/parse round trip") {
  TempDir dir;
  std::vector<DataPoint> data = {{1e-7, 2e-6, true, 1.0}, {5e-7, 1.7e-6, false, 0.5}};
  io::write_dataset(dir.file("ds.csv"), data);
  const auto back = io::parse_dataset(dir.file("ds.csv"));
  REQUIRE(back.size() == 2);
  CHECK(back[0].slit_width == data[0].slit_width);
  CHECK(back[0].vdw_flag == data[0].vdw_flag);
  CHECK(back[1].weight == data[1].weight);
}

TEST_CASE("config: key=value parsing, comments, errors") {
  TempDir dir;
  {
    std::ofstream out(dir.file("run.cfg"));
    out << "# reference parameters\n";
    out << "particle.mass_u = 840.77\n";
    out << "experiment.t_s=6.65e-3\n";
    out << "\n";
  }
  const auto cfg = io::read_config(dir.file("run.cfg"));
  CHECK(cfg.at("particle.mass_u") == "840.77");
  CHECK(cfg.at("experiment.t_s") == "6.65e-3");

  {
    std::ofstream out(dir.file("bad.cfg"));
    out << "no_equals_sign\n";
  }
  CHECK_THROWS_AS(io::read_config(dir.file("bad.cfg")), io::ParseError);
}

TEST_CASE("svg plot: structure is inspectable") {
  TempDir dir;
  std::vector<double> x = {1e-7, 2e-7, 4e-7, 8e-7};
  std::vector<double> y = {2.0, 1.5, 1.8, 2.5};
  io::PlotSpec spec;
  spec.title = "width_vs_slit";
  spec.x_label = "slit width (m)";
  spec.y_label = "W (m)";
  spec.log_x = true;
  io::write_svg_plot(dir.file("plot.svg"), x, y, spec);
  const std::string svg = slurp(dir.file("plot.svg"));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("width_vs_slit") != std::string::npos);
  CHECK(svg.find("log scale") != std::string::npos);
  CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
  CHECK_THROWS_AS(io::write_svg_plot(dir.file("p.svg"), {1.0}, {1.0}, spec),
                  std::invalid_argument);
}

TEST_CASE("format_double survives round trips") {
  for (double v : {0.1, 1.0 / 3.0, 6.65e-3, 9.0e6, 1.054571817e-34}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
}
