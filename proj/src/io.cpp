#include "bcm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bcm/errors.hpp"

namespace bcm {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string strip(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    return s;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    return out;
}

}  // namespace

std::vector<std::vector<double>> read_csv_table(const std::string& path, const std::string& header) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || strip(line) != header)
        throw ParseError("'" + path + "' must start with header '" + header + "'");
    const auto ncol = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',') + 1);
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (!strip(cell.substr(used)).empty()) throw ParseError("");
            } catch (const std::exception&) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": malformed number '" + cell + "'");
            }
        }
        if (row.size() != ncol)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(ncol) + " columns");
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_kernel_csv(const std::string& path, const ResponseKernel& k) {
    auto out = open_out(path);
    out << "t,r\n";
    for (int i = 0; i < k.r.size(); ++i) out << format_number(k.r.grid.node(i)) << ',' << format_number(k.r[i]) << '\n';
}

SampledFunction read_kernel_csv(const std::string& path) {
    const auto rows = read_csv_table(path, "t,r");
    if (rows.size() < 5) throw ParseError("kernel file needs at least 5 rows");
    const int n = static_cast<int>(rows.size()) - 1;
    if (std::abs(rows[0][0]) > 1e-12) throw ParseError("kernel grid must start at t = 0");
    const double h = rows[n][0] / n;
    Vec r(n + 1);
    for (int i = 0; i <= n; ++i) {
        if (std::abs(rows[i][0] - i * h) > 1e-9 * std::max(1.0, rows[n][0]))
            throw ParseError("kernel t column is not uniform");
        r[i] = rows[i][1];
    }
    return SampledFunction(TimeGrid(rows[n][0], n), r);
}

ResponseKernel load_kernel(const std::string& path, System system, double alpha, double beta, double a) {
    const SampledFunction r = read_kernel_csv(path);
    switch (system) {
        case System::Dirichlet: return ResponseKernel::dirichlet(0.5 * r.grid.t_end(), r.values, alpha, beta);
        case System::Neumann: return ResponseKernel::neumann(0.5 * r.grid.t_end(), r.values, alpha, beta);
        case System::Scattering: {
            if (!(a > 0.0)) throw DomainError("scattering kernel needs the support bound a");
            const double s = 2.0 * a / r.grid.step();
            const int n = static_cast<int>(std::lround(s));
            if (std::abs(s - n) > 1e-6) throw GridError("2a is not a multiple of the kernel step");
            return ResponseKernel::scattering(a, n, r.values);
        }
    }
    throw DomainError("unknown system");
}

void write_field_csv(const std::string& path, const WaveField& w, int stride) {
    auto out = open_out(path);
    out << "x,t,u\n";
    stride = std::max(1, stride);
    for (std::size_t s = 0; s < w.slice_levels.size(); ++s) {
        const double t = w.time(w.slice_levels[s]);
        for (int i = 0; i < w.nx; i += stride)
            out << format_number(w.x(i)) << ',' << format_number(t) << ','
                << format_number(w.slices(i, static_cast<int>(s))) << '\n';
    }
}

void write_matrix_csv(const std::string& path, const Mat& A) {
    auto out = open_out(path);
    out << A.rows() << '\n';
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) out << (j ? "," : "") << format_number(A(i, j));
        out << '\n';
    }
}

void write_family_csv(const std::string& path, const ControlFamily& fam) {
    auto out = open_out(path);
    out << "xi,t,f\n";
    for (int j = 0; j < fam.count(); ++j)
        for (int i = fam.first[j]; i <= fam.last[j]; ++i)
            out << format_number(fam.xi(j)) << ',' << format_number(i * fam.step) << ','
                << format_number(fam.value(j, i)) << '\n';
}

void write_classical_csv(const std::string& path, const ClassicalKernel& K) {
    auto out = open_out(path);
    out << "xi,t,value\n";
    for (std::size_t r = 0; r < K.rows.size(); ++r)
        for (int c = 0; c < K.values[r].size(); ++c)
            out << format_number(K.rows[r] * K.step) << ',' << format_number((K.row_first[r] + c) * K.step) << ','
                << format_number(K.values[r][c]) << '\n';
}

void write_columns_csv(const std::string& path, const std::string& header, const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DomainError("column lengths differ");
    auto out = open_out(path);
    out << header << '\n';
    for (int i = 0; i < a.size(); ++i) out << format_number(a[i]) << ',' << format_number(b[i]) << '\n';
}

}  // namespace bcm
