#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "spacetime/mesh4.hpp"
#include "spacetime/slicer.hpp"

namespace spacetime {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mesh4Encoding { Text, Binary };

// Text layout (keywords one per line, 1-based indices):
//   MeshVersionFormatted 2 / Dimension 4
//   Vertices N     then N lines "x y z t ref"
//   Tetrahedra N   then "a b c d ref"
//   Triangles N / Edges N / Pentatopes N likewise
//   End
// Binary: "MSH4" magic, u32 version, u32 dimension, then for each section
// u32 keyword code, u64 count, payload (f64 coordinates, i32 indices and
// refs, 0-based), and a final End code. Little-endian throughout.
std::string mesh4_to_text(const SpacetimeMesh& m);
SpacetimeMesh mesh4_from_text(const std::string& s);
std::vector<std::uint8_t> mesh4_to_binary(const SpacetimeMesh& m);
SpacetimeMesh mesh4_from_binary(const std::vector<std::uint8_t>& b);

void write_mesh4(const std::filesystem::path& path, const SpacetimeMesh& m,
                 Mesh4Encoding enc = Mesh4Encoding::Text);
/// Detects the encoding from the first bytes.
SpacetimeMesh read_mesh4(const std::filesystem::path& path);

/// Decoded Pack4File.
struct Pack4 {
  std::uint32_t version = 1;
  std::vector<std::array<float, 4>> vertices;
  std::vector<std::array<std::uint32_t, 5>> tets;       // 4 indices + ref
  std::vector<std::array<std::uint32_t, 4>> triangles;  // 3 indices + ref
  std::array<float, 8> bbox{};                          // min4, max4
};

inline constexpr std::uint32_t kPack4Version = 1;

/// Pentatopes are expanded to their distinct boundary tets.
std::vector<std::uint8_t> pack4_bytes(const SpacetimeMesh& m);
Pack4 pack4_parse(const std::vector<std::uint8_t>& b);
void write_pack4(const std::filesystem::path& path, const SpacetimeMesh& m);
Pack4 read_pack4(const std::filesystem::path& path);

/// Text surface: `g face_<tag>` / `g edge_<tag>` groups of `v`, `f`, `l` lines.
std::string slice_to_text(const SliceResult& r);
void export_slice(const std::filesystem::path& path, const SliceResult& r);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& b);

}  // namespace spacetime
