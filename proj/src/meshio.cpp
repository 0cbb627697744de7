#include "spacetime/meshio.hpp"

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace spacetime {
namespace {

constexpr char kBinaryMagic[4] = {'M', 'S', 'H', '4'};
constexpr char kPackMagic[4] = {'P', 'A', 'K', '4'};
constexpr std::uint32_t kBinaryVersion = 1;

enum Section : std::uint32_t { kEnd = 0, kVertices = 1, kTetrahedra = 2, kTriangles = 3, kEdges = 4, kPentatopes = 5 };

// ---- little-endian byte writer/reader

class Writer {
 public:
  template <class T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    out.insert(out.end(), raw, raw + sizeof(T));
  }
  void bytes(const char* p, std::size_t n) { out.insert(out.end(), p, p + n); }
  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}
  template <class T>
  T get() {
    need(sizeof(T));
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, b_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    pos_ += sizeof(T);
    T v;
    std::memcpy(&v, raw, sizeof(T));
    return v;
  }
  void magic(const char* m) {
    need(4);
    if (std::memcmp(b_.data() + pos_, m, 4) != 0) throw ParseError("offset 0: bad magic");
    pos_ += 4;
  }
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n)
      throw ParseError("offset " + std::to_string(pos_) + ": unexpected end of data");
  }
  std::size_t pos() const { return pos_; }
  std::size_t left() const { return b_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

template <std::size_t N>
void text_cells(std::ostringstream& os, const char* kw, const std::vector<Cell<N>>& cells) {
  if (cells.empty()) return;
  os << kw << '\n' << cells.size() << '\n';
  for (const auto& c : cells) {
    for (int v : c.v) os << v + 1 << ' ';
    os << c.ref << '\n';
  }
}

template <std::size_t N>
void binary_cells(Writer& w, Section code, const std::vector<Cell<N>>& cells) {
  if (cells.empty()) return;
  w.put<std::uint32_t>(code);
  w.put<std::uint64_t>(cells.size());
  for (const auto& c : cells) {
    for (int v : c.v) w.put<std::int32_t>(v);
    w.put<std::int32_t>(c.ref);
  }
}

template <std::size_t N>
void read_binary_cells(Reader& r, std::vector<Cell<N>>& cells, std::uint64_t n) {
  if (n > r.left() / (4 * (N + 1))) throw ParseError("offset " + std::to_string(r.pos()) + ": count exceeds payload");
  cells.resize(n);
  for (auto& c : cells) {
    for (int& v : c.v) v = r.get<std::int32_t>();
    c.ref = r.get<std::int32_t>();
  }
}

// Whitespace tokenizer that remembers line numbers.
class Tokens {
 public:
  explicit Tokens(const std::string& s) {
    std::size_t line = 1, i = 0;
    while (i < s.size()) {
      if (s[i] == '\n') {
        ++line;
        ++i;
      } else if (s[i] == '#') {
        while (i < s.size() && s[i] != '\n') ++i;
      } else if (std::isspace(static_cast<unsigned char>(s[i]))) {
        ++i;
      } else {
        const std::size_t j = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        toks_.push_back({s.substr(j, i - j), line});
      }
    }
  }
  bool done() const { return k_ >= toks_.size(); }
  std::size_t line() const { return k_ < toks_.size() ? toks_[k_].second : (toks_.empty() ? 1 : toks_.back().second); }
  [[noreturn]] void fail(const std::string& m) const {
    throw ParseError("line " + std::to_string(line()) + ": " + m);
  }
  const std::string& word() {
    if (done()) fail("unexpected end of file");
    return toks_[k_++].first;
  }
  long long integer() {
    const std::string& w = word();
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(w.c_str(), &end, 10);
    if (*end != '\0' || errno != 0) {
      --k_;
      fail("expected an integer, got '" + w + "'");
    }
    return v;
  }
  double real() {
    const std::string& w = word();
    char* end = nullptr;
    const double v = std::strtod(w.c_str(), &end);
    if (*end != '\0') {
      --k_;
      fail("expected a number, got '" + w + "'");
    }
    return v;
  }

 private:
  std::vector<std::pair<std::string, std::size_t>> toks_;
  std::size_t k_ = 0;
};

template <std::size_t N>
void read_text_cells(Tokens& tk, std::vector<Cell<N>>& cells, std::size_t nv) {
  const long long n = tk.integer();
  if (n < 0) tk.fail("negative count");
  cells.clear();
  for (long long i = 0; i < n; ++i) {
    Cell<N> c;
    for (int& v : c.v) {
      const long long x = tk.integer();
      if (x < 1 || std::size_t(x) > nv) tk.fail("vertex index out of range");
      v = int(x - 1);
    }
    c.ref = int(tk.integer());
    cells.push_back(c);
  }
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string mesh4_to_text(const SpacetimeMesh& m) {
  std::ostringstream os;
  os << "MeshVersionFormatted 2\n\nDimension 4\n\n";
  if (!m.vertices.empty()) {
    os << "Vertices\n" << m.vertices.size() << '\n';
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
      for (int k = 0; k < 4; ++k) os << fmt17(m.vertices[i][k]) << ' ';
      os << m.vertex_ref[i] << '\n';
    }
  }
  text_cells(os, "Tetrahedra", m.tets);
  text_cells(os, "Triangles", m.triangles);
  text_cells(os, "Edges", m.segments);
  text_cells(os, "Pentatopes", m.pentatopes);
  os << "\nEnd\n";
  return os.str();
}

SpacetimeMesh mesh4_from_text(const std::string& s) {
  Tokens tk(s);
  SpacetimeMesh m;
  if (tk.word() != "MeshVersionFormatted") tk.fail("expected MeshVersionFormatted");
  tk.integer();
  if (tk.word() != "Dimension") tk.fail("expected Dimension");
  if (tk.integer() != 4) tk.fail("only dimension 4 is supported");
  bool ended = false;
  while (!tk.done()) {
    const std::string kw = tk.word();
    if (kw == "End") {
      ended = true;
      break;
    }
    if (kw == "Vertices") {
      const long long n = tk.integer();
      if (n < 0) tk.fail("negative count");
      m.vertices.clear();
      m.vertex_ref.clear();
      for (long long i = 0; i < n; ++i) {
        Vec4 p;
        for (int k = 0; k < 4; ++k) p[k] = tk.real();
        m.add_vertex(p, int(tk.integer()));
      }
    } else if (kw == "Tetrahedra") {
      read_text_cells(tk, m.tets, m.vertices.size());
    } else if (kw == "Triangles") {
      read_text_cells(tk, m.triangles, m.vertices.size());
    } else if (kw == "Edges") {
      read_text_cells(tk, m.segments, m.vertices.size());
    } else if (kw == "Pentatopes") {
      read_text_cells(tk, m.pentatopes, m.vertices.size());
    } else {
      tk.fail("unknown keyword '" + kw + "'");
    }
  }
  if (!ended) tk.fail("missing End");
  return m;
}

std::vector<std::uint8_t> mesh4_to_binary(const SpacetimeMesh& m) {
  Writer w;
  w.bytes(kBinaryMagic, 4);
  w.put<std::uint32_t>(kBinaryVersion);
  w.put<std::uint32_t>(4);
  if (!m.vertices.empty()) {
    w.put<std::uint32_t>(kVertices);
    w.put<std::uint64_t>(m.vertices.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
      for (int k = 0; k < 4; ++k) w.put<double>(m.vertices[i][k]);
      w.put<std::int32_t>(m.vertex_ref[i]);
    }
  }
  binary_cells(w, kTetrahedra, m.tets);
  binary_cells(w, kTriangles, m.triangles);
  binary_cells(w, kEdges, m.segments);
  binary_cells(w, kPentatopes, m.pentatopes);
  w.put<std::uint32_t>(kEnd);
  return std::move(w.out);
}

SpacetimeMesh mesh4_from_binary(const std::vector<std::uint8_t>& b) {
  Reader r(b);
  r.magic(kBinaryMagic);
  if (r.get<std::uint32_t>() != kBinaryVersion) throw ParseError("offset 4: unsupported version");
  if (r.get<std::uint32_t>() != 4) throw ParseError("offset 8: only dimension 4 is supported");
  SpacetimeMesh m;
  for (;;) {
    const std::size_t at = r.pos();
    const auto code = r.get<std::uint32_t>();
    if (code == kEnd) break;
    const auto n = r.get<std::uint64_t>();
    switch (code) {
      case kVertices:
        if (n > r.left() / 36) throw ParseError("offset " + std::to_string(at) + ": count exceeds payload");
        m.vertices.resize(n);
        m.vertex_ref.resize(n);
        for (std::uint64_t i = 0; i < n; ++i) {
          for (int k = 0; k < 4; ++k) m.vertices[i][k] = r.get<double>();
          m.vertex_ref[i] = r.get<std::int32_t>();
        }
        break;
      case kTetrahedra: read_binary_cells(r, m.tets, n); break;
      case kTriangles: read_binary_cells(r, m.triangles, n); break;
      case kEdges: read_binary_cells(r, m.segments, n); break;
      case kPentatopes: read_binary_cells(r, m.pentatopes, n); break;
      default: throw ParseError("offset " + std::to_string(at) + ": unknown section code");
    }
  }
  try {
    m.validate();
  } catch (const MeshError& e) {
    throw ParseError(e.what());
  }
  return m;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on '" + path.string() + "'");
  return b;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& b) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(b.data()), std::streamsize(b.size()));
  if (!out) throw IoError("write failed on '" + path.string() + "'");
}

void write_mesh4(const std::filesystem::path& path, const SpacetimeMesh& m, Mesh4Encoding enc) {
  if (enc == Mesh4Encoding::Binary) {
    write_bytes(path, mesh4_to_binary(m));
  } else {
    const std::string s = mesh4_to_text(m);
    write_bytes(path, std::vector<std::uint8_t>(s.begin(), s.end()));
  }
}

SpacetimeMesh read_mesh4(const std::filesystem::path& path) {
  const auto b = read_bytes(path);
  if (b.size() >= 4 && std::memcmp(b.data(), kBinaryMagic, 4) == 0) return mesh4_from_binary(b);
  return mesh4_from_text(std::string(b.begin(), b.end()));
}

std::vector<std::uint8_t> pack4_bytes(const SpacetimeMesh& m) {
  std::vector<Tet> tets = m.tets;
  if (!m.pentatopes.empty()) {
    const auto extra = expand_pentatopes(m);
    tets.insert(tets.end(), extra.begin(), extra.end());
  }
  constexpr std::size_t kLimit = std::numeric_limits<std::uint32_t>::max();
  if (m.vertices.size() >= kLimit || tets.size() >= kLimit || m.triangles.size() >= kLimit)
    throw CapacityError("mesh too large for a 32-bit pack");
  Writer w;
  w.bytes(kPackMagic, 4);
  w.put<std::uint32_t>(kPack4Version);
  w.put<std::uint32_t>(std::uint32_t(m.vertices.size()));
  w.put<std::uint32_t>(std::uint32_t(tets.size()));
  w.put<std::uint32_t>(std::uint32_t(m.triangles.size()));
  std::array<float, 4> lo{}, hi{};
  lo.fill(std::numeric_limits<float>::infinity());
  hi.fill(-std::numeric_limits<float>::infinity());
  for (const Vec4& p : m.vertices)
    for (int k = 0; k < 4; ++k) {
      const float f = static_cast<float>(p[k]);
      w.put<float>(f);
      lo[k] = std::min(lo[k], f);
      hi[k] = std::max(hi[k], f);
    }
  if (m.vertices.empty()) lo = hi = {0, 0, 0, 0};
  for (const Tet& t : tets) {
    for (int v : t.v) w.put<std::uint32_t>(std::uint32_t(v));
    w.put<std::uint32_t>(std::uint32_t(t.ref));
  }
  for (const Tri& t : m.triangles) {
    for (int v : t.v) w.put<std::uint32_t>(std::uint32_t(v));
    w.put<std::uint32_t>(std::uint32_t(t.ref));
  }
  for (float f : lo) w.put<float>(f);
  for (float f : hi) w.put<float>(f);
  return std::move(w.out);
}

Pack4 pack4_parse(const std::vector<std::uint8_t>& b) {
  Reader r(b);
  r.magic(kPackMagic);
  Pack4 p;
  p.version = r.get<std::uint32_t>();
  if (p.version != kPack4Version) throw ParseError("offset 4: unsupported pack version");
  const std::uint64_t nv = r.get<std::uint32_t>(), nt = r.get<std::uint32_t>(), nr = r.get<std::uint32_t>();
  if (r.left() != nv * 16 + nt * 20 + nr * 16 + 32) throw ParseError("pack size does not match its counts");
  p.vertices.resize(nv);
  for (auto& v : p.vertices)
    for (float& f : v) f = r.get<float>();
  p.tets.resize(nt);
  for (auto& t : p.tets)
    for (auto& x : t) x = r.get<std::uint32_t>();
  p.triangles.resize(nr);
  for (auto& t : p.triangles)
    for (auto& x : t) x = r.get<std::uint32_t>();
  for (float& f : p.bbox) f = r.get<float>();
  for (const auto& t : p.tets)
    for (int k = 0; k < 4; ++k)
      if (t[k] >= nv) throw ParseError("pack tet index out of range");
  for (const auto& t : p.triangles)
    for (int k = 0; k < 3; ++k)
      if (t[k] >= nv) throw ParseError("pack triangle index out of range");
  return p;
}

void write_pack4(const std::filesystem::path& path, const SpacetimeMesh& m) { write_bytes(path, pack4_bytes(m)); }

Pack4 read_pack4(const std::filesystem::path& path) { return pack4_parse(read_bytes(path)); }

std::string slice_to_text(const SliceResult& r) {
  std::map<int, std::vector<const SliceTriangle*>> faces;
  std::map<int, std::vector<const SliceSegment*>> edges;
  for (const auto& t : r.triangles) faces[t.tag].push_back(&t);
  for (const auto& s : r.segments) edges[s.tag].push_back(&s);

  std::ostringstream os;
  os << "# hyperplane slice: " << r.triangles.size() << " triangles, " << r.segments.size()
     << " segments\n";
  std::size_t next = 1;
  auto group = [&](const std::string& name, const auto& prims, const char* kw) {
    os << "g " << name << '\n';
    std::map<std::array<double, 3>, std::size_t> ids;
    std::ostringstream body;
    for (const auto* pr : prims) {
      body << kw;
      for (const Vec3& p : pr->p) {
        auto [it, fresh] = ids.emplace(p.c, next);
        if (fresh) {
          os << "v " << fmt17(p[0]) << ' ' << fmt17(p[1]) << ' ' << fmt17(p[2]) << '\n';
          ++next;
        }
        body << ' ' << it->second;
      }
      body << '\n';
    }
    os << body.str();
  };
  for (const auto& [tag, prims] : faces) group("face_" + std::to_string(tag), prims, "f");
  for (const auto& [tag, prims] : edges) group("edge_" + std::to_string(tag), prims, "l");
  return os.str();
}

void export_slice(const std::filesystem::path& path, const SliceResult& r) {
  const std::string s = slice_to_text(r);
  write_bytes(path, std::vector<std::uint8_t>(s.begin(), s.end()));
}

}  // namespace spacetime
