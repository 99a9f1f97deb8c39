#include "bcm/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bcm/errors.hpp"
#include "bcm/numerics.hpp"

namespace bcm {

double ReconstructionReport::min_order() const {
    if (orders.empty()) return std::numeric_limits<double>::quiet_NaN();
    return *std::min_element(orders.begin(), orders.end());
}

namespace {

AdmissibilityVerdict require_admissible(const ResponseKernel& k) {
    const AdmissibilityVerdict v = check_admissibility(k);
    if (!v.admissible) throw InadmissibleData("inadmissible response data: " + v.reason);
    return v;
}

// q = y''/y with zero-guard masking and cubic infill of masked nodes.
Vec potential_from_readouts(const Vec& y, double h, double shift, double guard, std::vector<char>& masked,
                            double& fraction) {
    const int N = static_cast<int>(y.size());
    const Vec d2 = differentiate(y, h, 2);
    const double ymax = y.cwiseAbs().maxCoeff();
    masked.assign(N, 0);
    int count = 0;
    for (int i = 0; i < N; ++i)
        if (std::abs(y[i]) < guard * ymax) {
            masked[i] = 1;
            ++count;
        }
    fraction = static_cast<double>(count) / N;
    if (fraction >= 0.1) throw DomainError("zero-guard masks too many nodes (" + std::to_string(count) + ")");
    Vec q(N);
    for (int i = 0; i < N; ++i) q[i] = masked[i] ? 0.0 : d2[i] / y[i] - shift;
    for (int i = 0; i < N; ++i) {
        if (!masked[i]) continue;
        std::vector<double> xs, ys;
        // two unmasked neighbours on each side when available, else the four nearest
        for (int side : {-1, 1}) {
            int got = 0;
            for (int l = i + side; l >= 0 && l < N && got < 2; l += side)
                if (!masked[l]) {
                    xs.push_back(l);
                    ys.push_back(q[l]);
                    ++got;
                }
        }
        for (int dist = 1; xs.size() < 4 && dist < N; ++dist)
            for (int l : {i - dist, i + dist})
                if (l >= 0 && l < N && !masked[l] && std::find(xs.begin(), xs.end(), l) == xs.end() && xs.size() < 4) {
                    xs.push_back(l);
                    ys.push_back(q[l]);
                }
        q[i] = poly_fit_eval(xs, ys, std::min<int>(3, static_cast<int>(xs.size()) - 1), i);
    }
    return q;
}

}  // namespace

ReconstructionReport reconstruct_gl(const ResponseKernel& k, const ReconstructionOptions& opt) {
    if (k.system != System::Dirichlet) throw DomainError("GL reconstruction needs a Dirichlet kernel");
    ReconstructionReport rep;
    rep.method = "gl";
    rep.quantity = "q";
    rep.n = k.n();
    rep.admissibility = require_admissible(k).reason;
    FredholmOptions fo;
    fo.ridge = opt.ridge;
    const ControlFamily fam = solve_special_family(k, FamilyTarget::gl(), -1, fo);
    const double h = k.step();
    rep.y = fam.readouts;
    rep.xi = TimeGrid(rep.n * h, rep.n).nodes();
    const Vec q = potential_from_readouts(rep.y, h, 0.0, opt.zero_guard, rep.masked, rep.masked_fraction);
    rep.recovered = MediumProfile::from_samples("recovered", rep.n * h, Vec::Ones(rep.n + 1), q);
    return rep;
}

ReconstructionReport reconstruct_krein(const ResponseKernel& k, const ReconstructionOptions& opt) {
    if (k.system != System::Neumann) throw DomainError("Krein reconstruction needs a Neumann kernel");
    ReconstructionReport rep;
    rep.method = "krein";
    rep.quantity = "rho";
    rep.n = k.n();
    rep.admissibility = require_admissible(k).reason;
    FredholmOptions fo;
    fo.ridge = opt.ridge;
    const ControlFamily fam = solve_special_family(k, FamilyTarget::krein(), -1, fo);
    const double h = k.step();
    const int n = rep.n;
    rep.y = fam.readouts;
    rep.xi = TimeGrid(n * h, n).nodes();

    const double rho0 = 1.0 / (k.r[0] * k.r[0]);
    Vec rho_xi(n + 1), inv_sqrt(n + 1);
    for (int j = 0; j <= n; ++j) {
        rho_xi[j] = std::pow(std::abs(rep.y[j]), 4) / rho0;
        inv_sqrt[j] = 1.0 / std::sqrt(rho_xi[j]);
    }
    const Vec x_of_xi = cumtrapz(inv_sqrt, h);
    for (int j = 1; j <= n; ++j)
        if (!std::isfinite(x_of_xi[j]) || !(x_of_xi[j] > x_of_xi[j - 1]))
            throw DomainError("recovered x(xi) is not strictly increasing");

    // tau(x) is the inverse of x(xi); its slope is rho^{1/2}
    const Vec slope = rho_xi.cwiseSqrt();
    const double xT = x_of_xi[n];
    const SpaceGrid xg(xT, n);
    Vec tau(n + 1);
    for (int i = 0; i <= n; ++i) tau[i] = interp_hermite(x_of_xi, rep.xi, slope, xg.node(i));
    const Vec rho = differentiate(tau, xg.step(), 1).array().square();
    rep.masked.assign(n + 1, 0);
    rep.recovered = MediumProfile::from_samples("recovered", xT, rho, Vec::Zero(n + 1));
    return rep;
}

ReconstructionReport reconstruct_marchenko(const ResponseKernel& k, const ReconstructionOptions& opt) {
    if (k.system != System::Scattering) throw DomainError("Marchenko reconstruction needs a scattering kernel");
    if (!(opt.k > 0.0)) throw DomainError("wavenumber must be positive");
    ResponseKernel kk = k;
    if (opt.locality_cut > 0.0)
        for (int i = 0; i < kk.r.size(); ++i)
            if (i * kk.step() < opt.locality_cut - 1e-12) kk.r.values[i] = 0.0;
    ReconstructionReport rep;
    rep.method = "marchenko";
    rep.quantity = "q";
    rep.n = kk.support_index();
    rep.admissibility = require_admissible(kk).reason;
    FredholmOptions fo;
    fo.ridge = opt.ridge;
    const ControlFamily fam = solve_special_family(kk, FamilyTarget::scattering(opt.k), -1, fo);
    const double h = kk.step();
    rep.y = fam.readouts;
    rep.xi = TimeGrid(rep.n * h, rep.n).nodes();
    const Vec q = potential_from_readouts(rep.y, h, opt.k * opt.k, opt.zero_guard, rep.masked, rep.masked_fraction);
    rep.recovered = MediumProfile::from_samples("recovered", rep.n * h, Vec::Ones(rep.n + 1), q);
    return rep;
}

ReconstructionReport reconstruct(const std::string& method, const ResponseKernel& k,
                                 const ReconstructionOptions& opt) {
    if (method == "gl") return reconstruct_gl(k, opt);
    if (method == "krein") return reconstruct_krein(k, opt);
    if (method == "marchenko") return reconstruct_marchenko(k, opt);
    throw ParseError("unknown reconstruction method '" + method + "'");
}

System method_system(const std::string& method) {
    if (method == "gl") return System::Dirichlet;
    if (method == "krein") return System::Neumann;
    if (method == "marchenko") return System::Scattering;
    throw ParseError("unknown reconstruction method '" + method + "'");
}

std::pair<double, double> default_window(const ReconstructionReport& rep) {
    const double X = rep.recovered.x_end;
    if (rep.method == "gl") return {0.05 * X, 0.95 * X};
    if (rep.method == "krein") return {0.0, 0.9 * X};
    const double a = 0.5 * X;
    return {a / 15.0, 4.0 * a / 3.0};
}

void score(ReconstructionReport& rep, const MediumProfile& truth, std::optional<std::pair<double, double>> window) {
    const auto [lo, hi] = window ? *window : default_window(rep);
    rep.window_lo = lo;
    rep.window_hi = hi;
    rep.truth = truth;
    const SpaceGrid g = rep.recovered.grid();
    const Vec& v = rep.values();
    const int N = g.size();
    double dmax = 0.0, tmax = 0.0, d2 = 0.0, t2 = 0.0;
    int used = 0;
    for (int i = 2; i < N - 2; ++i) {
        const double x = g.node(i);
        if (x < lo - 1e-12 || x > hi + 1e-12 || rep.masked[i]) continue;
        const double tv = rep.quantity == "rho" ? truth.rho_at(x) : truth.q_at(x);
        const double d = v[i] - tv;
        dmax = std::max(dmax, std::abs(d));
        tmax = std::max(tmax, std::abs(tv));
        d2 += d * d;
        t2 += tv * tv;
        ++used;
    }
    if (used == 0) throw WindowError("error window contains no usable nodes");
    rep.absolute_error = tmax < 1e-12;
    rep.sup_rel_error = rep.absolute_error ? dmax : dmax / tmax;
    rep.l2_rel_error = rep.absolute_error ? std::sqrt(d2 / used) : std::sqrt(d2 / t2);
}

ReconstructionReport roundtrip(const MediumProfile& m, const std::string& method, const std::vector<int>& ladder,
                               double T, const ReconstructionOptions& opt, const ExtractionOptions& xo) {
    if (ladder.empty()) throw GridError("empty grid ladder");
    const System sys = method_system(method);
    const bool unit_density = (m.rho.array() - 1.0).abs().maxCoeff() < 1e-12;
    if ((method == "gl" || method == "marchenko") && !unit_density)
        throw DomainError(method + " reconstruction requires rho = 1");
    if (method == "krein" && m.q.cwiseAbs().maxCoeff() > 0.0)
        throw DomainError("krein reconstruction requires q = 0");
    if (method == "marchenko" && !m.support_bound) throw DomainError("marchenko reconstruction requires a support bound");

    ReconstructionReport last;
    std::vector<double> sups, l2s;
    for (int n : ladder) {
        const ResponseKernel k = extract_response_kernel(sys, m, T, n, xo);
        ReconstructionReport rep = reconstruct(method, k, opt);
        score(rep, m);
        sups.push_back(rep.sup_rel_error);
        l2s.push_back(rep.l2_rel_error);
        last = std::move(rep);
    }
    last.ladder = ladder;
    last.ladder_sup = sups;
    last.ladder_l2 = l2s;
    for (std::size_t i = 1; i < ladder.size(); ++i)
        last.orders.push_back(observed_order(sups[i - 1], sups[i], ladder[i - 1], ladder[i]));
    return last;
}

}  // namespace bcm
