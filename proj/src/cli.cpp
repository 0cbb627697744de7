#include "spacetime/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "spacetime/layer_tet.hpp"
#include "spacetime/meshio.hpp"
#include "spacetime/triangulate2.hpp"

namespace spacetime {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CaseOptions {
  CaseSpec spec;
  std::string caps = "auto";
  std::string tet = "local";

  void attach(CLI::App* cmd) {
    cmd->add_option("--case", spec.name, "static-sphere | expanding-sphere | expanding-torus | box | kuhn")
        ->capture_default_str();
    cmd->add_option("--r0", spec.r0, "initial sphere/tube radius")->capture_default_str();
    cmd->add_option("--rf", spec.rf, "final sphere/tube radius")->capture_default_str();
    cmd->add_option("--R0", spec.R0, "initial torus major radius")->capture_default_str();
    cmd->add_option("--Rf", spec.Rf, "final torus major radius")->capture_default_str();
    cmd->add_option("--l", spec.l, "box edge length")->capture_default_str();
    cmd->add_option("--slabs", spec.slabs, "number of time slabs")->capture_default_str();
    cmd->add_option("--h", spec.h, "target edge length")->capture_default_str();
    cmd->add_option("--n", spec.kuhn_n, "Kuhn grid resolution")->capture_default_str();
    cmd->add_option("--caps", caps, "closed | open | auto (closed for spheres)")->capture_default_str();
    cmd->add_option("--tet", tet, "face-slab tetrahedralization: local | cone")->capture_default_str();
  }

  CaseSpec checked() const {
    if (!spec.is_known()) throw UsageError("unknown case '" + spec.name + "'");
    if (spec.slabs < 1) throw UsageError("--slabs must be >= 1");
    if (!(spec.h > 0)) throw UsageError("--h must be positive");
    if (spec.kuhn_n < 1) throw UsageError("--n must be >= 1");
    return spec;
  }

  CapMode cap_mode() const {
    if (caps == "auto") return spec.is_sphere() ? CapMode::Closed : CapMode::Open;
    if (caps == "open") return CapMode::Open;
    if (caps != "closed") throw UsageError("--caps must be closed, open or auto");
    if (spec.name != "kuhn" && !spec.is_sphere())
      throw UsageError("unsupported-cap: closed caps need a sphere case; use --caps open");
    return CapMode::Closed;
  }

  LayerStrategy strategy() const {
    if (tet == "local") return LayerStrategy::Local;
    if (tet == "cone") return LayerStrategy::Cone;
    throw UsageError("--tet must be local or cone");
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Vec4 parse_vec4(const std::string& s, const char* what) {
  Vec4 v;
  std::stringstream ss(s);
  std::string item;
  int k = 0;
  while (std::getline(ss, item, ',')) {
    if (k == 4) throw UsageError(std::string(what) + " needs exactly 4 comma-separated numbers");
    try {
      std::size_t used = 0;
      v[k++] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError(std::string(what) + ": bad number '" + item + "'");
    }
  }
  if (k != 4) throw UsageError(std::string(what) + " needs exactly 4 comma-separated numbers");
  return v;
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

int cmd_gen(const CaseOptions& o, const std::string& out_path, bool binary, std::ostream& err) {
  const CaseSpec c = o.checked();
  const CapMode caps = o.cap_mode();
  const auto t0 = std::chrono::steady_clock::now();
  SpacetimeMesh mesh;
  BuildTimings timings;
  if (c.name == "kuhn") {
    mesh = kuhn_pentatopes(c.kuhn_n);
  } else {
    BuildOptions opt;
    opt.slabs = c.slabs;
    opt.h = c.h;
    opt.caps = caps;
    opt.strategy = o.strategy();
    BuildResult r = build_spacetime_mesh(make_case_geometry(c), opt);
    mesh = std::move(r.mesh);
    timings = r.timings;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_mesh4(out_path, mesh, binary ? Mesh4Encoding::Binary : Mesh4Encoding::Text);

  const std::size_t st = mesh.steiner_count();
  err << "case " << c.name << '\n';
  err << "vertices " << mesh.vertices.size() << '\n';
  err << "steiner vertices " << st << " ("
      << fmt("%.3f", mesh.vertices.empty() ? 0.0 : 100.0 * double(st) / double(mesh.vertices.size()))
      << "%)\n";
  err << "tetrahedra " << mesh.tets.size() << '\n';
  err << "edge triangles " << mesh.triangles.size() << '\n';
  err << "node segments " << mesh.segments.size() << '\n';
  err << "pentatopes " << mesh.pentatopes.size() << '\n';
  err << "geometry tessellation (sec.) " << fmt("%.3f", timings.tessellation) << '\n';
  err << "edge triangulation (sec.) " << fmt("%.3f", timings.edge_triangulation) << '\n';
  err << "face tetrahedralization (sec.) " << fmt("%.3f", timings.face_tetrahedralization) << '\n';
  err << "caps (sec.) " << fmt("%.3f", timings.caps) << '\n';
  err << "total (sec.) " << fmt("%.3f", total) << '\n';
  return kExitOk;
}

int cmd_verify(const CaseOptions& o, const std::string& in_path, double tol, std::ostream& err) {
  const CaseSpec c = o.checked();
  const SpacetimeMesh mesh = read_mesh4(in_path);
  if (c.name == "kuhn") {
    KahanSum sum;
    std::size_t negative = 0;
    for (const Pentatope& q : mesh.pentatopes) {
      std::array<Vec4, 5> p{};
      for (int i = 0; i < 5; ++i) p[i] = mesh.vertices[q.v[i]];
      const double v = pentatope_measure4(p);
      if (v <= 0) ++negative;
      sum.add(v);
    }
    const double rel = std::abs(sum.value() - 1.0);
    err << "pentatopes " << mesh.pentatopes.size() << ", non-positive " << negative << '\n';
    err << "4-volume measured " << fmt("%.12f", sum.value()) << " expected 1 relative error "
        << fmt("%.3e", rel) << '\n';
    const bool ok = negative == 0 && rel < tol && !mesh.pentatopes.empty();
    err << "result " << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? kExitOk : kExitValidation;
  }
  const bool closed = o.cap_mode() == CapMode::Closed;
  const ManifoldReport m =
      check_manifold(mesh, closed ? ManifoldMode::closed_mode() : ManifoldMode::with_boundary(c.t0, c.tf));
  const VolumeReport v = measure_volume(mesh, expected_volume(c, closed));
  err << "manifold (" << (closed ? "closed" : "with boundary") << ") " << (m.pass ? "pass" : "FAIL")
      << ": faces " << m.faces << ", boundary " << m.boundary_faces << ", bad incidence " << m.bad_count
      << ", bad orientation " << m.bad_orientation << '\n';
  err << "volume measured " << fmt("%.9f", v.total) << " expected " << fmt("%.9f", v.expected)
      << " relative error " << fmt("%.3e", v.rel_error) << '\n';
  const bool ok = m.pass && v.rel_error < tol;
  err << "result " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitValidation;
}

int cmd_convergence(const CaseOptions& o, int levels, double h0, std::ostream& out, std::ostream& err) {
  const CaseSpec c = o.checked();
  if (c.name == "kuhn") throw UsageError("convergence needs a surface case");
  if (levels < 2) throw UsageError("--levels must be >= 2");
  if (!(h0 > 0)) throw UsageError("--h0 must be positive");
  const auto rows = convergence_study(c, o.cap_mode(), levels, h0, o.strategy());
  out << "h,volume,expected,error,order\n";
  bool manifold = true;
  for (const auto& r : rows) {
    out << fmt("%.6g", r.h) << ',' << fmt("%.12f", r.volume) << ',' << fmt("%.12f", r.expected) << ','
        << fmt("%.6e", r.error) << ',' << (std::isfinite(r.order) ? fmt("%.4f", r.order) : "") << '\n';
    manifold = manifold && r.manifold;
  }
  if (!manifold) {
    err << "manifold check failed on at least one level\n";
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_slice(const std::string& in_path, const std::string& out_path, const std::optional<double>& time,
              const std::string& normal, const std::string& point, std::ostream& err) {
  const bool general = !normal.empty() || !point.empty();
  if (time.has_value() == general) throw UsageError("give exactly one of --time or --normal/--point");
  Hyperplane H;
  if (time) {
    H = Hyperplane::time_slice(*time);
  } else {
    if (normal.empty() || point.empty()) throw UsageError("--normal and --point go together");
    H.n = parse_vec4(normal, "--normal");
    H.c = parse_vec4(point, "--point");
    if (!(norm(H.n) > 0)) throw UsageError("--normal must be nonzero");
  }
  const SpacetimeMesh mesh = read_mesh4(in_path);
  const SliceResult r = slice_mesh(mesh, H);
  export_slice(out_path, r);
  std::size_t tri = 0, quad = 0;
  for (int code = 0; code < 16; ++code) {
    const SliceShape s = slice_tables().shape_of_case[code];
    if (s == SliceShape::Triangle) tri += r.case_count[code];
    if (s == SliceShape::Quad) quad += r.case_count[code];
  }
  err << "tets tested " << r.tets_tested << '\n';
  err << "triangle cases " << tri << ", quad cases " << quad << '\n';
  err << "surface triangles " << r.triangles.size() << ", edge segments " << r.segments.size() << '\n';
  return kExitOk;
}

int cmd_bench(const std::string& in_path, int samples, std::uint64_t seed, std::ostream& err) {
  if (samples < 1) throw UsageError("--samples must be >= 1");
  const SpacetimeMesh mesh = read_mesh4(in_path);
  const BenchReport rep = run_bench(mesh, samples, seed);
  err << rep.deterministic_text() << rep.timing_text();
  return kExitOk;
}

int cmd_pack(const std::string& in_path, const std::string& out_path, std::ostream& err) {
  const SpacetimeMesh mesh = read_mesh4(in_path);
  const auto bytes = pack4_bytes(mesh);
  write_bytes(out_path, bytes);
  const Pack4 p = pack4_parse(bytes);
  err << "vertices " << p.vertices.size() << ", tets " << p.tets.size() << ", edge triangles "
      << p.triangles.size() << ", bytes " << bytes.size() << '\n';
  return kExitOk;
}

int cmd_tables(const std::string& out_path, bool json, std::ostream& out) {
  const SliceTables& t = slice_tables();
  const std::string s = json ? tables_json(t) : tables_typescript(t);
  if (out_path.empty())
    out << s;
  else
    write_bytes(out_path, std::vector<std::uint8_t>(s.begin(), s.end()));
  return kExitOk;
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const CaseSpec& c, CapMode caps, int levels, double h0,
                                              LayerStrategy strategy) {
  const Geometry g = make_case_geometry(c);
  const bool closed = caps == CapMode::Closed;
  std::vector<ConvergenceRow> rows;
  double h = h0;
  for (int i = 0; i < levels; ++i, h *= 0.5) {
    BuildOptions opt;
    opt.slabs = c.slabs;
    opt.h = h;
    opt.caps = caps;
    opt.strategy = strategy;
    const BuildResult r = build_spacetime_mesh(g, opt);
    const VolumeReport v = measure_volume(r.mesh, expected_volume(c, closed));
    ConvergenceRow row;
    row.h = h;
    row.volume = v.total;
    row.expected = v.expected;
    row.error = v.abs_error;
    row.order = rows.empty() ? std::numeric_limits<double>::quiet_NaN() : std::log2(rows.back().error / row.error);
    row.manifold =
        check_manifold(r.mesh, closed ? ManifoldMode::closed_mode() : ManifoldMode::with_boundary(c.t0, c.tf)).pass;
    rows.push_back(row);
  }
  return rows;
}

std::vector<Hyperplane> bench_planes(std::uint64_t seed, int samples, double t_lo, double t_hi,
                                     const Vec3& centre) {
  std::mt19937_64 rng(seed);
  auto unit = [&] { return double(rng() >> 11) * 0x1.0p-53; };  // [0, 1), same on every platform
  std::vector<Hyperplane> out;
  for (int i = 0; i < samples; ++i) {
    Hyperplane H;
    for (int k = 0; k < 3; ++k) H.n[k] = -0.25 + 0.5 * unit();
    H.n[3] = 1.0;
    H.c = with_time(centre, t_lo + (t_hi - t_lo) * unit());
    out.push_back(H);
  }
  return out;
}

BenchReport run_bench(const SpacetimeMesh& mesh, int samples, std::uint64_t seed) {
  BenchReport rep;
  rep.samples = samples;
  rep.seed = seed;
  const auto box = mesh.bounding_box();
  const Vec3 centre{0.5 * (box[0][0] + box[1][0]), 0.5 * (box[0][1] + box[1][1]), 0.5 * (box[0][2] + box[1][2])};
  const auto planes = bench_planes(seed, samples, box[0][3], box[1][3], centre);
  std::vector<double> ms;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Hyperplane& H : planes) {
    const auto t0 = std::chrono::steady_clock::now();
    const SliceResult r = slice_mesh(mesh, H);
    ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    const std::uint64_t prims = r.triangles.size() + r.segments.size();
    rep.primitives += prims;
    rep.tets = r.tets_tested;
    h = fnv1a(h, H.n.c.data(), sizeof(double) * 4);
    h = fnv1a(h, H.c.c.data(), sizeof(double) * 4);
    h = fnv1a(h, &prims, sizeof prims);
  }
  rep.digest = h;
  double total = 0.0;
  for (double x : ms) total += x;
  rep.mean_ms = total / double(samples);
  std::sort(ms.begin(), ms.end());
  rep.median_ms = samples % 2 ? ms[samples / 2] : 0.5 * (ms[samples / 2 - 1] + ms[samples / 2]);
  rep.primitives_per_sec = total > 0 ? double(rep.primitives) / (total * 1e-3) : 0.0;
  return rep;
}

std::string BenchReport::deterministic_text() const {
  char buf[256];
  std::string s;
  std::snprintf(buf, sizeof buf, "bench samples %d seed %llu\n", samples, static_cast<unsigned long long>(seed));
  s += buf;
  std::snprintf(buf, sizeof buf, "plane digest %016llx\n", static_cast<unsigned long long>(digest));
  s += buf;
  std::snprintf(buf, sizeof buf, "tets per sample %zu\nprimitives %zu (mean %.1f per sample)\n", tets, primitives,
                samples ? double(primitives) / samples : 0.0);
  s += buf;
  return s;
}

std::string BenchReport::timing_text() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "slice time mean %.3f ms, median %.3f ms\nthroughput %.4g primitives/s\n", mean_ms,
                median_ms, primitives_per_sec);
  return buf;
}

std::string tables_typescript(const SliceTables& t) {
  std::ostringstream os;
  auto list = [&](auto begin, auto end) {
    for (auto it = begin; it != end; ++it) os << (it == begin ? "" : ", ") << int(*it);
  };
  os << "// Generated by `spacetime tables` from derive_tables(). Do not edit.\n\n";
  os << "/** Crossed tet edges per result code r (16 x 4, -1 = none). */\n";
  os << "export const CASE_EDGES: readonly number[] = [\n";
  for (const auto& row : t.case_edges) {
    os << "  ";
    list(row.begin(), row.end());
    os << ",\n";
  }
  os << "];\n\n/** Vertex pair of each of the 6 tet edges. */\nexport const EDGE_ENDPOINTS: readonly number[] = [";
  for (std::size_t e = 0; e < t.edge_endpoints.size(); ++e) {
    os << (e ? ", " : "") << t.edge_endpoints[e][0] << ", " << t.edge_endpoints[e][1];
  }
  os << "];\n\n/** 0 none, 1 triangle, 2 quad. */\nexport const SHAPE_OF_CASE: readonly number[] = [";
  list(t.shape_of_case.begin(), t.shape_of_case.end());
  os << "];\n\n/** Output vertex -> case slot, 6 per shape. */\nexport const V2E: readonly number[] = [";
  list(t.v2e.begin(), t.v2e.end());
  os << "];\n";
  return os.str();
}

std::string tables_json(const SliceTables& t) {
  nlohmann::json j;
  j["case_edges"] = t.case_edges;
  j["edge_endpoints"] = t.edge_endpoints;
  std::vector<int> shapes;
  for (SliceShape s : t.shape_of_case) shapes.push_back(int(s));
  j["shape_of_case"] = shapes;
  j["v2e"] = t.v2e;
  return j.dump(2) + "\n";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spacetime boundary meshing, verification and hyperplane slicing", "spacetime"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);

  CaseOptions gen_o, ver_o, conv_o;
  std::string in_path, out_path;
  bool binary = false, json = false;
  double tol = 0.05, h0 = 0.04;
  int levels = 4, samples = 50;
  std::uint64_t seed = 0;
  std::optional<double> time;
  std::string normal, point;

  auto* gen = app.add_subcommand("gen", "build a spacetime mesh and write it");
  gen_o.attach(gen);
  gen->add_option("--out", out_path, "output mesh file")->required();
  gen->add_flag("--binary", binary, "binary encoding");

  auto* verify = app.add_subcommand("verify", "manifold and volume checks against a case");
  ver_o.attach(verify);
  verify->add_option("--in", in_path, "mesh file")->required();
  verify->add_option("--tol", tol, "relative volume tolerance")->capture_default_str();

  auto* conv = app.add_subcommand("convergence", "volume error as h halves (CSV on stdout)");
  conv_o.attach(conv);
  conv->add_option("--levels", levels, "number of meshes")->capture_default_str();
  conv->add_option("--h0", h0, "coarsest h")->capture_default_str();

  auto* slice = app.add_subcommand("slice", "cut a mesh with a hyperplane");
  slice->add_option("--in", in_path, "mesh file")->required();
  slice->add_option("--out", out_path, "surface file")->required();
  slice->add_option("--time", time, "slice at constant t");
  slice->add_option("--normal", normal, "nx,ny,nz,nt");
  slice->add_option("--point", point, "cx,cy,cz,ct");

  auto* bench = app.add_subcommand("bench", "CPU slicing throughput over random hyperplanes");
  bench->add_option("--in", in_path, "mesh file")->required();
  bench->add_option("--samples", samples, "number of planes")->capture_default_str();
  bench->add_option("--seed", seed, "random seed")->capture_default_str();

  auto* pack = app.add_subcommand("pack", "convert a mesh to the viewer pack");
  pack->add_option("--in", in_path, "mesh file")->required();
  pack->add_option("--out", out_path, "pack file")->required();

  auto* tables = app.add_subcommand("tables", "emit the slice lookup tables");
  tables->add_option("--out", out_path, "output file (stdout if omitted)");
  tables->add_flag("--json", json, "JSON instead of TypeScript");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "spacetime: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(gen_o, out_path, binary, err);
    if (*verify) return cmd_verify(ver_o, in_path, tol, err);
    if (*conv) return cmd_convergence(conv_o, levels, h0, out, err);
    if (*slice) return cmd_slice(in_path, out_path, time, normal, point, err);
    if (*bench) return cmd_bench(in_path, samples, seed, err);
    if (*pack) return cmd_pack(in_path, out_path, err);
    if (*tables) return cmd_tables(out_path, json, out);
  } catch (const UsageError& e) {
    err << "spacetime: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "spacetime: " << e.what() << '\n';
    return kExitIo;
  } catch (const spacetime::ParseError& e) {
    err << "spacetime: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "spacetime: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace spacetime
