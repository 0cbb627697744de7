#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "spacetime/cases.hpp"
#include "spacetime/slab_builder.hpp"
#include "spacetime/slicer.hpp"

namespace spacetime {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitUsage = 2, kExitIo = 3 };

/// Entry point of the `spacetime` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ConvergenceRow {
  double h = 0.0;
  double volume = 0.0;
  double expected = 0.0;
  double error = 0.0;  // |volume - expected|
  double order = 0.0;  // log2(prev error / error); NaN on the first level
  bool manifold = false;
};

/// Builds the case at h0, h0/2, ... (levels meshes) and measures each.
std::vector<ConvergenceRow> convergence_study(const CaseSpec& c, CapMode caps, int levels, double h0,
                                              LayerStrategy strategy = LayerStrategy::Local);

/// Hyperplanes drawn for the benchmark: n = (a, b, c, 1) with a, b, c in
/// [-0.25, 0.25], through the spatial box centre at a uniform time in [t_lo, t_hi].
std::vector<Hyperplane> bench_planes(std::uint64_t seed, int samples, double t_lo, double t_hi,
                                     const Vec3& centre);

struct BenchReport {
  int samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t digest = 0;  // planes and per-sample primitive counts
  std::size_t primitives = 0;
  std::size_t tets = 0;
  double mean_ms = 0.0, median_ms = 0.0;
  double primitives_per_sec = 0.0;

  /// Lines that depend only on the mesh, samples and seed.
  std::string deterministic_text() const;
  std::string timing_text() const;
};

BenchReport run_bench(const SpacetimeMesh& mesh, int samples, std::uint64_t seed);

/// Viewer table constants as a TypeScript module or JSON.
std::string tables_typescript(const SliceTables& t);
std::string tables_json(const SliceTables& t);

}  // namespace spacetime
