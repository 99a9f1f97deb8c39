#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bcm/bcp.hpp"

namespace bcm {

struct ReconstructionOptions {
    double ridge = 0.0;        ///< Tikhonov shift for the family solves
    double k = 1.0;            ///< wavenumber of the scattering target
    double zero_guard = 1e-3;  ///< mask nodes with |y| below this fraction of max|y|
    double locality_cut = 0.0; ///< scattering: discard r(tau) for tau below this value
};

/// Result of one reconstruction, optionally scored against a known medium.
struct ReconstructionReport {
    std::string method;
    int n = 0;
    std::string quantity;  ///< "q" or "rho"
    MediumProfile recovered;
    std::optional<MediumProfile> truth;

    Vec xi;  ///< family parameter of every readout
    Vec y;   ///< readouts
    std::vector<char> masked;  ///< zero-guard mask on the recovered grid
    double masked_fraction = 0.0;

    double window_lo = 0.0, window_hi = 0.0;
    double sup_rel_error = -1.0;
    double l2_rel_error = -1.0;
    bool absolute_error = false;  ///< set when the truth vanishes identically

    std::vector<int> ladder;
    std::vector<double> ladder_sup, ladder_l2;
    std::vector<double> orders;  ///< observed orders of consecutive ladder pairs

    bool admissible = true;
    std::string admissibility;

    /// Recovered q or rho samples.
    const Vec& values() const { return quantity == "rho" ? recovered.rho : recovered.q; }
    double min_order() const;
};

ReconstructionReport reconstruct_gl(const ResponseKernel& k, const ReconstructionOptions& opt = {});
ReconstructionReport reconstruct_krein(const ResponseKernel& k, const ReconstructionOptions& opt = {});
ReconstructionReport reconstruct_marchenko(const ResponseKernel& k, const ReconstructionOptions& opt = {});
/// Dispatch on "gl", "krein" or "marchenko".
ReconstructionReport reconstruct(const std::string& method, const ResponseKernel& k,
                                 const ReconstructionOptions& opt = {});

/// The kernel system a method consumes.
System method_system(const std::string& method);

/// Error window of a method: GL [0.05T, 0.95T], Krein [0, 0.9 x(T)], Marchenko [a/15, 4a/3].
std::pair<double, double> default_window(const ReconstructionReport& rep);

/// Fill the error fields against the truth on the window (default window if omitted).
/// Masked nodes and the outermost two nodes are excluded.
void score(ReconstructionReport& rep, const MediumProfile& truth,
           std::optional<std::pair<double, double>> window = std::nullopt);

/// Extract, reconstruct and score for every n of the ladder; the returned
/// report is the one of the finest grid, carrying the per-grid errors and orders.
ReconstructionReport roundtrip(const MediumProfile& m, const std::string& method, const std::vector<int>& ladder,
                               double T, const ReconstructionOptions& opt = {},
                               const ExtractionOptions& xo = {});

}  // namespace bcm
