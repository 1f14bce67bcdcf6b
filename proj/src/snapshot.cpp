#include "fracns/snapshot.hpp"

#include "fracns/errors.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace fracns {

namespace {

constexpr std::array<char, 8> kMagic{'F', 'R', 'N', 'S', 'S', 'N', 'P', '1'};

template <typename UInt>
void put_le(std::ostream& os, UInt value) {
  std::array<char, sizeof(UInt)> bytes{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  os.write(bytes.data(), bytes.size());
}

template <typename UInt>
UInt get_le(std::istream& is) {
  std::array<unsigned char, sizeof(UInt)> bytes{};
  is.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!is) throw std::runtime_error("snapshot: unexpected end of data");
  UInt value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) value |= static_cast<UInt>(bytes[i]) << (8 * i);
  return value;
}

void put_f64(std::ostream& os, double x) { put_le(os, std::bit_cast<std::uint64_t>(x)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }
void put_i32(std::ostream& os, int x) { put_le(os, static_cast<std::uint32_t>(x)); }
int get_i32(std::istream& is) { return static_cast<std::int32_t>(get_le<std::uint32_t>(is)); }

}  // namespace

void write_snapshot(std::ostream& os, const Snapshot& snapshot) {
  const auto& field = snapshot.field;
  const auto& grid = field.grid();
  os.write(kMagic.data(), kMagic.size());
  put_le(os, static_cast<std::uint32_t>(grid.dim()));
  put_le(os, static_cast<std::uint32_t>(grid.resolution()));
  put_f64(os, snapshot.alpha_tag);
  put_f64(os, snapshot.time);
  put_le(os, static_cast<std::uint64_t>(grid.size()));
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Wavevector k = grid.wavevector(i);
    for (int a = 0; a < grid.dim(); ++a) put_i32(os, k(a));
    for (int a = 0; a < grid.dim(); ++a) {
      put_f64(os, field.coeffs()(i, a).real());
      put_f64(os, field.coeffs()(i, a).imag());
    }
  }
  if (!os) throw std::runtime_error("snapshot: write failed");
}

Snapshot read_snapshot(std::istream& is) {
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw std::runtime_error("snapshot: bad magic");
  const auto dim = static_cast<int>(get_le<std::uint32_t>(is));
  const auto n = static_cast<int>(get_le<std::uint32_t>(is));
  const double alpha_tag = get_f64(is);
  const double time = get_f64(is);
  const auto count = get_le<std::uint64_t>(is);
  TorusGrid grid(dim, n);
  if (count != static_cast<std::uint64_t>(grid.size())) {
    throw std::runtime_error("snapshot: entry count does not match N^dim");
  }
  SpectralFieldd::Coeffs c = SpectralFieldd::Coeffs::Zero(grid.size(), dim);
  for (std::uint64_t e = 0; e < count; ++e) {
    Wavevector k(dim);
    for (int a = 0; a < dim; ++a) k(a) = get_i32(is);
    const auto idx = grid.index_of(k);
    if (!idx) throw std::runtime_error("snapshot: wavevector outside lattice");
    for (int a = 0; a < dim; ++a) {
      const double re = get_f64(is);
      const double im = get_f64(is);
      c(*idx, a) = {re, im};
    }
  }
  return Snapshot{SpectralFieldd(grid, std::move(c)), alpha_tag, time};
}

void save_snapshot(const std::filesystem::path& path, const Snapshot& snapshot) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path.string());
  write_snapshot(os, snapshot);
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path.string());
  return read_snapshot(is);
}

}  // namespace fracns
