#pragma once

#include <string>
#include <vector>

#include "bcm/bcp.hpp"
#include "bcm/forward.hpp"

namespace bcm {

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

/// Numeric CSV with the given header (compared after stripping spaces).
std::vector<std::vector<double>> read_csv_table(const std::string& path, const std::string& header);

/// Kernel CSV `t,r`.
void write_kernel_csv(const std::string& path, const ResponseKernel& k);
/// Read a kernel CSV; the t column must start at 0 and be uniform.
SampledFunction read_kernel_csv(const std::string& path);
/// Rebuild a response kernel from a kernel CSV.  Dirichlet/Neumann files cover
/// [0, 2T]; scattering files cover at least [0, 2a].
ResponseKernel load_kernel(const std::string& path, System system, double alpha = 1.0, double beta = 0.0,
                           double a = 0.0);

/// Field dump `x,t,u` of every stored slice, every `stride`-th node.
void write_field_csv(const std::string& path, const WaveField& w, int stride = 1);
/// Matrix dump: first line the size n, then n comma separated rows.
void write_matrix_csv(const std::string& path, const Mat& A);
/// Family CSV `xi,t,f`.
void write_family_csv(const std::string& path, const ControlFamily& fam);
/// Classical kernel CSV `xi,t,value`.
void write_classical_csv(const std::string& path, const ClassicalKernel& K);
/// Two-column CSV with a custom header.
void write_columns_csv(const std::string& path, const std::string& header, const Vec& a, const Vec& b);

}  // namespace bcm
