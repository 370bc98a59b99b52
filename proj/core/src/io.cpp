#include "bdf/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bdf::io {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f(path, std::ios::binary); // binary: fixed \n on every platform
  if (!f) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    f << header[i] << (i + 1 < header.size() ? "," : "");
  f << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      f << row[i] << (i + 1 < row.size() ? "," : "");
    f << "\n";
  }
}

namespace {

constexpr char kKernelMagic[8] = {'B', 'D', 'F', 'K', 'R', 'N', '1', '\0'};
constexpr char kDensityMagic[8] = {'B', 'D', 'F', 'D', 'E', 'N', '1', '\0'};

template <class T>
void put(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw std::runtime_error("binary read failed (truncated file?)");
  return v;
}

void put_field(std::ofstream& f, const ops::SpatialGrid& g, ops::Field4 field) {
  field.to_real(g);
  for (int c = 0; c < 4; ++c)
    for (const auto& z : field.comp[c]) {
      put(f, z.real());
      put(f, z.imag());
    }
}

ops::Field4 get_field(std::ifstream& f, const ops::SpatialGrid& g) {
  ops::Field4 field = ops::Field4::zero(g, ops::Rep::Real);
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double re = get<double>(f);
      const double im = get<double>(f);
      field.comp[c][i] = {re, im};
    }
  field.to_fourier(g);
  field.mask(g);
  return field;
}

} // namespace

void write_kernels(const std::string& path, const ops::SpatialGrid& g,
                   const std::vector<const ops::OperatorKernel*>& kernels) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_kernels: cannot open " + path);
  f.write(kKernelMagic, 8);
  put<std::uint32_t>(f, std::uint32_t(g.n()));
  put<std::uint32_t>(f, std::uint32_t(g.n()));
  put<std::uint32_t>(f, std::uint32_t(g.n()));
  put(f, g.extent());
  put(f, g.cutoff());
  put<std::uint32_t>(f, std::uint32_t(kernels.size()));
  for (const auto* k : kernels) {
    put<std::uint32_t>(f, std::uint32_t(k->pairs.size()));
    for (const auto& p : k->pairs) {
      put(f, p.weight);
      put_field(f, g, p.left);
      put_field(f, g, p.right);
    }
  }
}

std::vector<ops::OperatorKernel> read_kernels(const std::string& path,
                                              const ops::SpatialGrid& g) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_kernels: cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kKernelMagic, 8) != 0)
    throw std::runtime_error("read_kernels: bad magic");
  const auto nx = get<std::uint32_t>(f);
  const auto ny = get<std::uint32_t>(f);
  const auto nz = get<std::uint32_t>(f);
  const double extent = get<double>(f);
  get<double>(f); // cutoff, informational
  if (int(nx) != g.n() || int(ny) != g.n() || int(nz) != g.n() ||
      std::abs(extent - g.extent()) > 1e-12)
    throw std::runtime_error("read_kernels: grid mismatch");
  const auto nsec = get<std::uint32_t>(f);
  std::vector<ops::OperatorKernel> out(nsec);
  for (auto& k : out) {
    const auto np = get<std::uint32_t>(f);
    for (std::uint32_t i = 0; i < np; ++i) {
      ops::OperatorKernel::Pair p;
      p.weight = get<double>(f);
      p.left = get_field(f, g);
      p.right = get_field(f, g);
      k.pairs.push_back(std::move(p));
    }
  }
  return out;
}

void write_density_csv(const std::string& path, const ops::SpatialGrid& g,
                       const ops::Density& rho) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.point(i);
    rows.push_back({fmt_double(x[0]), fmt_double(x[1]), fmt_double(x[2]),
                    fmt_double(rho.values[i])});
  }
  write_csv(path, {"x", "y", "z", "value"}, rows);
}

void write_density_binary(const std::string& path, const ops::SpatialGrid& g,
                          const ops::Density& rho) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_density_binary: cannot open " + path);
  f.write(kDensityMagic, 8);
  put<std::uint32_t>(f, std::uint32_t(g.n()));
  put<std::uint32_t>(f, std::uint32_t(g.n()));
  put<std::uint32_t>(f, std::uint32_t(g.n()));
  put(f, g.extent());
  for (double v : rho.values) put(f, v);
}

ops::Density read_density_binary(const std::string& path, const ops::SpatialGrid& g) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_density_binary: cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kDensityMagic, 8) != 0)
    throw std::runtime_error("read_density_binary: bad magic");
  const auto nx = get<std::uint32_t>(f);
  get<std::uint32_t>(f);
  get<std::uint32_t>(f);
  const double extent = get<double>(f);
  if (int(nx) != g.n() || std::abs(extent - g.extent()) > 1e-12)
    throw std::runtime_error("read_density_binary: grid mismatch");
  ops::Density d = ops::Density::zero(g);
  for (auto& v : d.values) v = get<double>(f);
  return d;
}

} // namespace bdf::io
