#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "subplanck/io.hpp"

using namespace subplanck;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const fs::path d = fs::temp_directory_path() / ("subplanck_io_" + std::string(info->name()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

struct Run {
  int code;
  std::string err;
};

Run cli(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(SUBPLANCK_CLI) + " " + args + " > " + (dir / "stdout.txt").string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

template <class F>
std::string config_error(F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "<no error>";
}

}  // namespace

TEST(Grid, ParseAndFormat) {
  const auto g = io::parse_grid("-1.5:2:17,0:0.25:33");
  EXPECT_EQ(g.x.min, -1.5);
  EXPECT_EQ(g.x.max, 2.0);
  EXPECT_EQ(g.x.count, 17);
  EXPECT_EQ(g.p.count, 33);
  const Grid2D odd{{-0.1, 1.0 / 3.0, 20}, {-std::acos(-1.0), 1e-300, 16}};
  const auto back = io::parse_grid(io::format_grid(odd));
  EXPECT_EQ(back.x.min, odd.x.min);
  EXPECT_EQ(back.x.max, odd.x.max);
  EXPECT_EQ(back.p.min, odd.p.min);
  EXPECT_EQ(back.p.max, odd.p.max);
}

TEST(Grid, ErrorsNameTheAxis) {
  EXPECT_NE(config_error([] { io::parse_grid("0:1:20"); }).find("grid"), std::string::npos);
  EXPECT_NE(config_error([] { io::parse_grid("0:1:20,0:x:20"); }).find("grid.p"), std::string::npos);
  EXPECT_NE(config_error([] { io::parse_grid("0:1,0:1:20"); }).find("grid.x"), std::string::npos);
  EXPECT_NE(config_error([] { io::parse_grid("0:1:20.5,0:1:20"); }).find("grid.x"), std::string::npos);
}

TEST(Csv, RoundTripIsExact) {
  Field f;
  f.grid = {{-1.0 / 3.0, std::sqrt(2.0), 19}, {-7.25, 0.1, 23}};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t i = 0; i < f.grid.size(); ++i) f.values.push_back(u(rng) * std::pow(10.0, static_cast<int>(i % 40) - 20));
  f.values[3] = 0.0;
  f.values[4] = -0.0;
  f.values[5] = 4.9e-324;
  std::stringstream ss;
  io::write_csv(ss, f);
  const Field g = io::read_csv(ss);
  EXPECT_EQ(g.grid.x.min, f.grid.x.min);
  EXPECT_EQ(g.grid.x.max, f.grid.x.max);
  EXPECT_EQ(g.grid.x.count, f.grid.x.count);
  EXPECT_EQ(g.grid.p.min, f.grid.p.min);
  EXPECT_EQ(g.grid.p.max, f.grid.p.max);
  EXPECT_EQ(g.grid.p.count, f.grid.p.count);
  EXPECT_EQ(g.values, f.values);
  std::stringstream again;
  io::write_csv(again, g);
  std::stringstream first;
  io::write_csv(first, f);
  EXPECT_EQ(again.str(), first.str());
}

TEST(Csv, LayoutAndErrors) {
  Field f;
  f.grid = {{0, 1, 2}, {5, 6, 2}};
  f.values = {1, 2, 3, 4};
  std::stringstream ss;
  io::write_csv(ss, f);
  EXPECT_EQ(ss.str(), "x,p,value\n0,5,1\n1,5,2\n0,6,3\n1,6,4\n");
  std::stringstream bad1("x,y,z\n1,2,3\n"), bad2("x,p,value\n1,2\n"), bad3("x,p,value\n1,2,abc\n"), bad4("x,p,value\n");
  EXPECT_THROW(io::read_csv(bad1), ConfigError);
  EXPECT_THROW(io::read_csv(bad2), ConfigError);
  EXPECT_THROW(io::read_csv(bad3), ConfigError);
  EXPECT_THROW(io::read_csv(bad4), ConfigError);
}

TEST(Csv, Sidecar) {
  Field f;
  f.grid = {{0, 1, 2}, {5, 6, 2}};
  f.values = {1, -2, 3, 0.5};
  f.group = "su2";
  f.scale = "5/2";
  f.state = "cat_h";
  const auto j = io::sidecar(f, "pi/(4j)");
  EXPECT_EQ(j["group"], "su2");
  EXPECT_EQ(j["scale"], "5/2");
  EXPECT_EQ(j["state"], "cat_h");
  EXPECT_EQ(j["normalization"], "raw");
  EXPECT_EQ(j["field_max"], 3.0);
  EXPECT_EQ(j["field_min"], -2.0);
  EXPECT_EQ(j["grid"]["p"][2], 2);
  EXPECT_EQ(j["axis_unit"], "pi/(4j)");
  EXPECT_FALSE(io::sidecar(f).contains("axis_unit"));
}

TEST(Config, SpinParsing) {
  EXPECT_EQ(io::parse_spin(io::json("5/2")).twice(), 5);
  EXPECT_EQ(io::parse_spin(io::json(2.5)).twice(), 5);
  EXPECT_EQ(io::parse_spin(io::json(30)).twice(), 60);
  EXPECT_THROW(io::parse_spin(io::json(2.3)), ConfigError);
  EXPECT_THROW(io::parse_spin(io::json("abc")), ConfigError);
  EXPECT_THROW(io::parse_spin(io::json::array()), ConfigError);
}

TEST(Config, ErrorsNameTheField) {
  auto apply = [](const std::string& text) {
    return config_error([&] {
      io::SceneConfig c;
      io::apply_json(c, io::json::parse(text));
      io::validate(c, true);
    });
  };
  EXPECT_NE(apply(R"({"group": "hw", "x0": 8, "colour": 1})").find("colour"), std::string::npos);
  EXPECT_EQ(apply(R"({"group": "hw"})").rfind("x0", 0), 0u);
  EXPECT_EQ(apply(R"({"group": "hw", "x0": -1})").rfind("x0", 0), 0u);
  EXPECT_EQ(apply(R"({"group": "su2"})").rfind("j", 0), 0u);
  EXPECT_EQ(apply(R"({"group": "su2", "j": 3, "x0": 2})").rfind("x0", 0), 0u);
  EXPECT_EQ(apply(R"({"group": "hw", "x0": 8, "j": 3})").rfind("j", 0), 0u);
  EXPECT_EQ(apply(R"({"group": "qq"})").rfind("group", 0), 0u);
  EXPECT_EQ(apply(R"({"group": "hw", "x0": 8, "grid": "0:1:8,0:1:20"})").rfind("grid", 0), 0u);
  EXPECT_EQ(apply(R"({"group": "hw", "x0": 8, "format": "png"})").rfind("format", 0), 0u);
  EXPECT_EQ(apply(R"({"group": "hw", "x0": 8, "normalization": "peak"})").rfind("normalization", 0), 0u);
  EXPECT_EQ(apply(R"({"group": "hw", "x0": 8, "state": "dog"})").rfind("state", 0), 0u);
  EXPECT_NE(apply(R"({"group": "hw", "state": {"kind": "pure", "terms": [{"weight": 1}]}})").find("state.terms[0]"),
            std::string::npos);
  EXPECT_NE(apply(R"({"group": "hw", "x0": "eight"})").find("config"), std::string::npos);
  EXPECT_EQ(apply(R"({"group": "su2", "j": "5/2", "state": "compass", "grid": {"x": [-1, 1, 16], "p": [-1, 1, 16]}})"),
            "<no error>");
}

TEST(Config, CustomStateRoundTrip) {
  const auto text = R"({"kind": "mixture", "components": [
      {"weight": 0.25, "terms": [{"weight": [1, -0.5], "label": [2, 1]}, {"label": -1.5}]},
      {"weight": 0.75, "terms": [{"weight": 2, "label": [0, 3]}]}]})";
  const auto s = io::parse_custom_state(io::json::parse(text));
  EXPECT_FALSE(s.pure);
  ASSERT_EQ(s.components.size(), 2u);
  EXPECT_EQ(s.components[0].terms[0].weight, cplx(1, -0.5));
  EXPECT_EQ(s.components[0].terms[1].weight, cplx(1, 0));
  EXPECT_EQ(s.components[0].terms[1].label, cplx(-1.5, 0));
  const auto back = io::parse_custom_state(io::to_json(s));
  EXPECT_EQ(io::to_json(back), io::to_json(s));
  const auto st = io::build_custom<hw::Label>(s, [](cplx z) { return hw::Label{z}; });
  EXPECT_FALSE(st.is_pure());
  EXPECT_EQ(st.components()[1].pure[0].label.alpha, cplx(0, 3));
  EXPECT_THROW(io::parse_custom_state(io::json::parse(R"({"kind": "blend"})")), ConfigError);
}

TEST(Config, StateFromFileAndFlagsOverride) {
  const auto dir = scratch_dir();
  write_text(dir / "cat.json", R"({"kind": "pure", "terms": [{"label": 2}, {"label": -2}]})");
  io::SceneConfig c;
  io::apply_json(c, io::json{{"group", "hw"}, {"state", (dir / "cat.json").string()}});
  EXPECT_EQ(c.state, "custom");
  ASSERT_TRUE(c.custom);
  EXPECT_NO_THROW(io::validate(c, true));
  // same state as the named cat with x0 = 4
  EXPECT_NEAR(hw::wigner_at(io::make_hw_state(c), 0.3, 0.2), hw::wigner_at(hw::cat_h(4), 0.3, 0.2), 1e-15);
  io::set_state(c, "mixture");
  EXPECT_EQ(c.state, "cat_mixture");
  EXPECT_FALSE(c.custom);
}

TEST(Cli, WignerWritesCsvAndSidecarDeterministically) {
  const auto dir = scratch_dir();
  const std::string args = "wigner --group hw --x0 8 --state compass --grid -1:1:21,-1:1:17 --normalize max --out ";
  ASSERT_EQ(cli(args + (dir / "a.csv").string(), dir).code, 0);
  ASSERT_EQ(cli(args + (dir / "b.csv").string(), dir).code, 0);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  std::ifstream in(dir / "a.csv");
  const Field f = io::read_csv(in);
  EXPECT_EQ(f.grid.x.count, 21);
  EXPECT_EQ(f.grid.p.count, 17);
  EXPECT_NEAR(f.max(), 1.0, 1e-15);
  const auto meta = io::json::parse(slurp(dir / "a.csv.json"));
  EXPECT_EQ(meta["group"], "hw");
  EXPECT_EQ(meta["scale"], "8");
  EXPECT_EQ(meta["state"], "compass");
  EXPECT_EQ(meta["normalization"], "max");
  // config file with a flag override
  write_text(dir / "scene.json", R"({"group": "hw", "x0": 8, "state": "compass", "grid": "-1:1:21,-1:1:17", "normalize": "max"})");
  ASSERT_EQ(cli("wigner --config " + (dir / "scene.json").string() + " --out " + (dir / "c.csv").string(), dir).code, 0);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "c.csv"));
  ASSERT_EQ(cli("wigner --config " + (dir / "scene.json").string() + " --x0 6 --out " + (dir / "d.csv").string(), dir).code, 0);
  EXPECT_EQ(io::json::parse(slurp(dir / "d.csv.json"))["scale"], "6");
}

TEST(Cli, OverlapGridHasUnitAtOrigin) {
  const auto dir = scratch_dir();
  ASSERT_EQ(cli("overlap --group su2 --j 5/2 --state cat_h --grid -3:3:31,-3:3:31 --out " + (dir / "o.csv").string(), dir).code, 0);
  std::ifstream in(dir / "o.csv");
  const Field f = io::read_csv(in);
  EXPECT_NEAR(f.at(15, 15), 1.0, 1e-12);
  EXPECT_EQ(io::json::parse(slurp(dir / "o.csv.json"))["axis_unit"], "pi/(4j)");
}

TEST(Cli, OverlapScanFindsCatZero) {
  const auto dir = scratch_dir();
  ASSERT_EQ(cli("overlap --group hw --x0 8 --state cat_h --scan --out " + (dir / "s.csv").string(), dir).code, 0);
  const auto meta = io::json::parse(slurp(dir / "s.csv.json"));
  ASSERT_EQ(meta["scans"].size(), 4u);
  EXPECT_TRUE(meta["scans"][0]["min_zero"].is_null());
  EXPECT_NEAR(meta["scans"][2]["min_zero"].get<double>(), std::acos(-1.0) / 8, 1e-9);
}

TEST(Cli, ScalingReport) {
  const auto dir = scratch_dir();
  ASSERT_EQ(cli("scaling --group hw --state compass --scales 6,8,10 --out " + (dir / "r.json").string(), dir).code, 0);
  const auto rep = io::json::parse(slurp(dir / "r.json"));
  EXPECT_EQ(rep["enhancement"].size(), 12u);
  EXPECT_NEAR(rep["tile_area_fit"]["exponent"].get<double>(), -2.0, 0.1);
  EXPECT_EQ(cli("scaling --group su2 --state compass --scales 10,20.25,30 --out " + (dir / "x.json").string(), dir).code, 2);
  EXPECT_EQ(cli("scaling --group hw --state compass --scales 6,8 --out " + (dir / "x.json").string(), dir).code, 2);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir();
  EXPECT_EQ(cli("validate quick", dir).code, 0);
  EXPECT_NE(slurp(dir / "stdout.txt").find("PASS"), std::string::npos);
  EXPECT_EQ(cli("", dir).code, 2);
  EXPECT_EQ(cli("frobnicate", dir).code, 2);
  EXPECT_EQ(cli("validate medium", dir).code, 2);
  EXPECT_EQ(cli("wigner --group hw --state compass", dir).code, 2);
  EXPECT_EQ(cli("wigner --group su2 --j 0 --state cat_h", dir).code, 2);
  write_text(dir / "bad.json", R"({"group": "hw", "x0": 8, "gird": "0:1:20,0:1:20"})");
  const auto r = cli("wigner --config " + (dir / "bad.json").string(), dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("gird"), std::string::npos);
  write_text(dir / "broken.json", "{\"group\": ");
  EXPECT_EQ(cli("wigner --config " + (dir / "broken.json").string(), dir).code, 2);
  // weights that cancel leave a zero vector
  write_text(dir / "zero.json", R"({"kind": "pure", "terms": [{"weight": 1, "label": 0.5}, {"weight": -1, "label": 0.5}]})");
  const auto z = cli("wigner --group hw --state " + (dir / "zero.json").string() + " --grid -1:1:16,-1:1:16 --out " +
                         (dir / "z.csv").string(),
                     dir);
  EXPECT_EQ(z.code, 3);
  EXPECT_NE(z.err.find("norm"), std::string::npos);
}
