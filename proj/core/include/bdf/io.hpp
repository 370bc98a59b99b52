#pragma once

#include "bdf/operator_kernel.hpp"

#include <string>
#include <vector>

namespace bdf::io {

// shortest representation that round-trips the double exactly
std::string fmt_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// flat little-endian binary container for operator kernels:
//   magic "BDFKRN1\0" | u32 nx ny nz | f64 extent cutoff | u32 n_sections
//   per section: u32 n_pairs; per pair: f64 weight, then left and right
//   fields as 4 components x nx*ny*nz complex doubles (re, im interleaved),
//   real-space values, x slowest / z fastest.
void write_kernels(const std::string& path, const ops::SpatialGrid& g,
                   const std::vector<const ops::OperatorKernel*>& kernels);
std::vector<ops::OperatorKernel> read_kernels(const std::string& path,
                                              const ops::SpatialGrid& g);

// density as CSV rows x,y,z,value
void write_density_csv(const std::string& path, const ops::SpatialGrid& g,
                       const ops::Density& rho);

// density in the same binary convention: magic "BDFDEN1\0", dims, extent,
// then nx*ny*nz doubles
void write_density_binary(const std::string& path, const ops::SpatialGrid& g,
                          const ops::Density& rho);
ops::Density read_density_binary(const std::string& path, const ops::SpatialGrid& g);

} // namespace bdf::io
