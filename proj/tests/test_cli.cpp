#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "spacetime/cli.hpp"
#include "spacetime/meshio.hpp"

using namespace spacetime;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("spacetime_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, GenThenVerifySphere) {
  const std::string mesh = path("s.mesh4");
  Outcome g = run({"gen", "--case", "static-sphere", "--h", "0.05", "--slabs", "4", "--out", mesh});
  ASSERT_EQ(g.code, kExitOk) << g.err;
  EXPECT_TRUE(fs::exists(mesh));
  EXPECT_NE(g.err.find("steiner vertices"), std::string::npos);
  EXPECT_NE(g.err.find("face tetrahedralization (sec.)"), std::string::npos);
  Outcome v = run({"verify", "--case", "static-sphere", "--in", mesh});
  EXPECT_EQ(v.code, kExitOk) << v.err;
  EXPECT_NE(v.err.find("result PASS"), std::string::npos);

  // drop one tet: the boundary opens
  SpacetimeMesh m = read_mesh4(mesh);
  m.tets.erase(m.tets.begin() + long(m.tets.size() / 2));
  write_mesh4(path("holed.mesh4"), m, Mesh4Encoding::Binary);
  Outcome bad = run({"verify", "--case", "static-sphere", "--in", path("holed.mesh4")});
  EXPECT_EQ(bad.code, kExitValidation);
  EXPECT_NE(bad.err.find("result FAIL"), std::string::npos);

  // slab count and radii do not matter for the expected volume, case does
  Outcome wrong = run({"verify", "--case", "expanding-sphere", "--in", mesh, "--tol", "1e-4"});
  EXPECT_EQ(wrong.code, kExitValidation);
}

TEST_F(Cli, BinaryGenRoundTrips) {
  ASSERT_EQ(run({"gen", "--case", "box", "--h", "0.5", "--slabs", "2", "--binary", "--out", path("b.msh")}).code,
            kExitOk);
  Outcome v = run({"verify", "--case", "box", "--in", path("b.msh"), "--tol", "1e-9"});
  EXPECT_EQ(v.code, kExitOk) << v.err;
  EXPECT_NE(v.err.find("with boundary"), std::string::npos);
}

TEST_F(Cli, CapsOnTorusIsUsageError) {
  Outcome r = run({"gen", "--case", "expanding-torus", "--caps", "closed", "--out", path("t.mesh4")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("unsupported-cap"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("t.mesh4")));
}

TEST_F(Cli, Kuhn) {
  Outcome g = run({"gen", "--case", "kuhn", "--n", "2", "--out", path("k.mesh4")});
  ASSERT_EQ(g.code, kExitOk) << g.err;
  EXPECT_NE(g.err.find("pentatopes 384"), std::string::npos) << g.err;
  Outcome v = run({"verify", "--case", "kuhn", "--in", path("k.mesh4")});
  EXPECT_EQ(v.code, kExitOk) << v.err;
  Outcome p = run({"pack", "--in", path("k.mesh4"), "--out", path("k.pack4")});
  EXPECT_EQ(p.code, kExitOk) << p.err;
  const Pack4 pk = read_pack4(path("k.pack4"));
  EXPECT_EQ(pk.vertices.size(), 81u);
}

TEST_F(Cli, BadOptionValues) {
  EXPECT_EQ(run({"gen", "--case", "cylinder", "--out", path("x")}).code, kExitUsage);
  EXPECT_EQ(run({"gen", "--case", "box", "--tet", "delaunay", "--out", path("x")}).code, kExitUsage);
  EXPECT_EQ(run({"gen", "--case", "box", "--caps", "sometimes", "--out", path("x")}).code, kExitUsage);
  EXPECT_EQ(run({"gen", "--case", "box", "--h", "abc", "--out", path("x")}).code, kExitUsage);
  EXPECT_EQ(run({"gen", "--case", "box"}).code, kExitUsage);  // --out missing
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  Outcome help = run({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("convergence"), std::string::npos);
}

TEST_F(Cli, InvalidGeometryIsValidationError) {
  // radius larger than the box
  EXPECT_EQ(run({"gen", "--case", "static-sphere", "--r0", "0.7", "--out", path("x")}).code, kExitValidation);
}

TEST_F(Cli, MissingInputIsIoError) {
  EXPECT_EQ(run({"pack", "--in", path("nope.mesh4"), "--out", path("p")}).code, kExitIo);
  EXPECT_EQ(run({"verify", "--case", "box", "--in", path("nope.mesh4")}).code, kExitIo);
  std::ofstream(path("junk.mesh4")) << "not a mesh\n";
  EXPECT_EQ(run({"slice", "--in", path("junk.mesh4"), "--out", path("s.obj"), "--time", "0.5"}).code, kExitIo);
}

TEST_F(Cli, ConvergenceOnBoxIsExact) {
  Outcome r = run({"convergence", "--case", "box", "--levels", "2", "--h0", "0.5", "--slabs", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "h,volume,expected,error,order");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream ls(line);
    std::string h, vol, expected, err;
    std::getline(ls, h, ',');
    std::getline(ls, vol, ',');
    std::getline(ls, expected, ',');
    std::getline(ls, err, ',');
    EXPECT_NEAR(std::stod(vol), 6.0, 1e-12);
    EXPECT_LT(std::stod(err), 1e-12);
  }
  EXPECT_EQ(rows, 2);
}

TEST_F(Cli, SliceModes) {
  const std::string mesh = path("k.mesh4");
  ASSERT_EQ(run({"gen", "--case", "kuhn", "--n", "1", "--out", mesh}).code, kExitOk);
  const std::string o = path("s.obj");
  EXPECT_EQ(run({"slice", "--in", mesh, "--out", o}).code, kExitUsage);
  EXPECT_EQ(run({"slice", "--in", mesh, "--out", o, "--time", "0.5", "--normal", "0,0,0,1"}).code, kExitUsage);
  EXPECT_EQ(run({"slice", "--in", mesh, "--out", o, "--normal", "0,0,1"}).code, kExitUsage);
  EXPECT_EQ(run({"slice", "--in", mesh, "--out", o, "--normal", "0,0,0,0", "--point", "0,0,0,0"}).code,
            kExitUsage);

  Outcome far = run({"slice", "--in", mesh, "--out", o, "--time", "3"});
  EXPECT_EQ(far.code, kExitOk);
  EXPECT_EQ(read_bytes(o).size(), std::string("# hyperplane slice: 0 triangles, 0 segments\n").size());

  Outcome mid = run({"slice", "--in", mesh, "--out", o, "--normal", "0.1,0,0,1", "--point", "0.5,0.5,0.5,0.5"});
  EXPECT_EQ(mid.code, kExitOk) << mid.err;
  const auto text = read_bytes(o);
  EXPECT_NE(std::string(text.begin(), text.end()).find("\nf "), std::string::npos);
  EXPECT_NE(mid.err.find("quad cases"), std::string::npos);
}

TEST_F(Cli, BenchIsDeterministicBySeed) {
  const std::string mesh = path("k.mesh4");
  ASSERT_EQ(run({"gen", "--case", "kuhn", "--n", "2", "--out", mesh}).code, kExitOk);
  const SpacetimeMesh m = read_mesh4(mesh);
  const BenchReport a = run_bench(m, 20, 7), b = run_bench(m, 20, 7), c = run_bench(m, 20, 8);
  EXPECT_EQ(a.deterministic_text(), b.deterministic_text());
  EXPECT_NE(a.digest, c.digest);
  EXPECT_GT(a.primitives, 0u);
  const auto planes = bench_planes(7, 20, 0.0, 1.0, {0.5, 0.5, 0.5});
  ASSERT_EQ(planes.size(), 20u);
  for (const Hyperplane& H : planes) {
    EXPECT_EQ(H.n[3], 1.0);
    for (int k = 0; k < 3; ++k) EXPECT_LE(std::abs(H.n[k]), 0.25);
    EXPECT_GE(H.c[3], 0.0);
    EXPECT_LT(H.c[3], 1.0);
  }
  Outcome r = run({"bench", "--in", mesh, "--samples", "5", "--seed", "3"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("plane digest"), std::string::npos);
  EXPECT_EQ(run({"bench", "--in", mesh, "--samples", "0"}).code, kExitUsage);

  write_mesh4(path("empty.mesh4"), SpacetimeMesh{});
  Outcome e = run({"bench", "--in", path("empty.mesh4"), "--samples", "3"});
  EXPECT_EQ(e.code, kExitOk) << e.err;
}

TEST_F(Cli, Tables) {
  Outcome ts = run({"tables"});
  EXPECT_EQ(ts.code, kExitOk);
  EXPECT_EQ(ts.out, tables_typescript(slice_tables()));
  EXPECT_NE(ts.out.find("export const CASE_EDGES"), std::string::npos);
  Outcome js = run({"tables", "--json", "--out", path("t.json")});
  EXPECT_EQ(js.code, kExitOk);
  const auto bytes = read_bytes(path("t.json"));
  EXPECT_EQ(std::string(bytes.begin(), bytes.end()), tables_json(slice_tables()));
}
