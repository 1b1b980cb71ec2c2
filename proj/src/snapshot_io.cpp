#include "spqg/snapshot_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace spqg {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b, 4);
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw Error("read_snapshot: truncated header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw Error("read_snapshot: truncated data");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

void write_snapshot(std::ostream& out, const SpectralField& field) {
  const BoxGrid& g = field.grid();
  out.write("SPQG", 4);
  put_u32(out, kSnapshotVersion);
  put_u32(out, static_cast<std::uint32_t>(g.dim));
  for (int a = 0; a < g.dim; ++a) put_u32(out, static_cast<std::uint32_t>(g.n[a]));
  for (int a = 0; a < g.dim; ++a) put_f64(out, g.length[a]);
  put_u32(out, static_cast<std::uint32_t>(field.components()));
  for (int c = 0; c < field.components(); ++c)
    for (std::size_t i = 0; i < field.modes(); ++i) {
      const Complex v = field.coeffs()(static_cast<Eigen::Index>(i), c);
      put_f64(out, v.real());
      put_f64(out, v.imag());
    }
  if (!out) throw Error("write_snapshot: stream failure");
}

SpectralField read_snapshot(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "SPQG", 4) != 0) throw Error("read_snapshot: bad magic");
  const std::uint32_t version = get_u32(in);
  if (version != kSnapshotVersion) throw Error("read_snapshot: unsupported version " + std::to_string(version));
  const std::uint32_t dim = get_u32(in);
  if (dim != 2 && dim != 3) throw Error("read_snapshot: dim must be 2 or 3");
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> len{1.0, 1.0, 1.0};
  for (std::uint32_t a = 0; a < dim; ++a) n[a] = static_cast<int>(get_u32(in));
  for (std::uint32_t a = 0; a < dim; ++a) len[a] = get_f64(in);
  const BoxGrid grid = BoxGrid::make(static_cast<int>(dim), n, len);
  const std::uint32_t comps = get_u32(in);
  if (comps == 0 || comps > 64) throw Error("read_snapshot: implausible component count");
  SpectralField field(grid, static_cast<int>(comps));
  for (std::uint32_t c = 0; c < comps; ++c)
    for (std::size_t i = 0; i < field.modes(); ++i) {
      const double re = get_f64(in);
      const double im = get_f64(in);
      field.coeffs()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = Complex(re, im);
    }
  return field;
}

void write_snapshot(const std::filesystem::path& path, const SpectralField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_snapshot: cannot open " + path.string());
  write_snapshot(out, field);
}

SpectralField read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_snapshot: cannot open " + path.string());
  return read_snapshot(in);
}

void write_metadata(const std::filesystem::path& path, const Metadata& meta) {
  std::ofstream out(path);
  if (!out) throw Error("write_metadata: cannot open " + path.string());
  for (const auto& [key, value] : meta) out << key << '=' << value << '\n';
}

Metadata read_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_metadata: cannot open " + path.string());
  Metadata meta;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

}  // namespace spqg
