#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bcm/bcp.hpp"
#include "bcm/errors.hpp"
#include "bcm/forward.hpp"
#include "bcm/inverse.hpp"
#include "bcm/io.hpp"
#include "bcm/media.hpp"
#include "bcm/numerics.hpp"
#include "bcm/operators.hpp"

namespace bcm::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

/// Bad flag values or flag combinations.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Everything a subcommand may read.  Defaults apply when neither the
/// command line nor the config file sets a value.
struct RunConfig {
    std::string command;
    std::string method;  ///< invert / classical / roundtrip
    std::string medium = "unit";
    std::string system = "dirichlet";
    std::string kernel;  ///< kernel CSV replacing extraction from the medium
    std::string out = ".";
    std::string ladder = "128,256,512";
    double T = 1.0;
    int n = 256;
    double k = 1.0;
    double lambda = 1.0;
    double xi = 0.5;
    double ridge = 0.0;
    std::uint64_t seed = 42;
    double alpha = 1.0;
    double beta = 0.0;
    double support = 0.0;  ///< potential support bound a (0: from the medium)
    double shift = 0.0;    ///< constant added to the kernel before use
    int controls = 5;
    bool dump_field = false;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<int> parse_ladder(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (item.empty()) continue;
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw UsageError("bad ladder entry '" + item + "'");
        }
        if (used != item.size()) throw UsageError("bad ladder entry '" + item + "'");
        if (v < 64) throw UsageError("ladder entries must be >= 64");
        if (!out.empty() && v <= out.back()) throw UsageError("ladder must be strictly increasing");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty ladder");
    return out;
}

void validate(const RunConfig& c) {
    if (!(c.T > 0.0)) throw UsageError("--T must be positive");
    if (c.n < 64) throw UsageError("--n must be at least 64");
    if (!(c.k > 0.0)) throw UsageError("--k must be positive");
    if (!(c.ridge >= 0.0)) throw UsageError("--ridge must be non-negative");
    if (c.support < 0.0) throw UsageError("--support must be non-negative");
    if (c.controls < 1) throw UsageError("--controls must be positive");
}

fs::path output_dir(const RunConfig& c) {
    fs::path p(c.out);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw Error("cannot create output directory '" + c.out + "': " + ec.message());
    return p;
}

MediumProfile load_medium(const RunConfig& c) {
    MediumProfile m = make_test_medium(c.medium);
    if (c.support > 0.0)
        m.support_bound = c.support;
    else if (!m.support_bound)
        m.support_bound = potential_support(m);
    return m;
}

/// Kernel from --kernel if given, otherwise extracted from the medium.
ResponseKernel obtain_kernel(const RunConfig& c, System sys) {
    ResponseKernel k;
    if (!c.kernel.empty()) {
        k = load_kernel(c.kernel, sys, c.alpha, c.beta, c.support);
    } else {
        const MediumProfile m = load_medium(c);
        if (sys == System::Scattering && !m.support_bound)
            throw UsageError("medium has no potential; pass --support to set the bound a");
        k = extract_response_kernel(sys, m, c.T, c.n);
    }
    if (c.shift != 0.0) k = shift_kernel(k, c.shift);
    return k;
}

ReconstructionOptions reconstruction_options(const RunConfig& c) {
    ReconstructionOptions o;
    o.ridge = c.ridge;
    o.k = c.k;
    return o;
}

ordered_json number_or_null(double v) { return v < 0.0 ? ordered_json(nullptr) : ordered_json(v); }

ordered_json report_json(const ReconstructionReport& r, int n) {
    ordered_json j;
    j["method"] = r.method;
    j["n"] = n;
    j["sup_rel_error"] = number_or_null(r.sup_rel_error);
    j["l2_rel_error"] = number_or_null(r.l2_rel_error);
    j["masked_fraction"] = r.masked_fraction;
    j["orders"] = r.orders;
    j["admissible"] = r.admissible;
    return j;
}

ordered_json rejected_report_json(const std::string& method, int n) {
    ordered_json j;
    j["method"] = method;
    j["n"] = n;
    j["sup_rel_error"] = nullptr;
    j["l2_rel_error"] = nullptr;
    j["masked_fraction"] = nullptr;
    j["orders"] = ordered_json::array();
    j["admissible"] = false;
    return j;
}

void write_json(const fs::path& p, const ordered_json& j) {
    std::ofstream f(p);
    if (!f) throw Error("cannot write '" + p.string() + "'");
    f << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

int cmd_forward(const RunConfig& c, std::ostream& out) {
    const System sys = system_from_string(c.system);
    const MediumProfile m = load_medium(c);
    const fs::path dir = output_dir(c);
    const int refine = 8;
    const TimeGrid g(c.T, c.n);
    SampledFunction f = random_smooth_controls(g, 1, c.seed)[0];

    WaveOptions wo;
    wo.ht = g.step() / refine;
    wo.slice_every = std::max(1, c.n * refine / 16);
    if (sys == System::Scattering) {
        if (!m.support_bound) throw UsageError("scattering needs a potential support bound (--support)");
        // taper so the incoming profile ends smoothly at t = T
        for (int j = 0; j < g.size(); ++j)
            f.values[j] *= 0.5 * (1.0 - std::cos(2.0 * M_PI * g.node(j) / c.T));
        const int K = static_cast<int>(std::ceil((*m.support_bound + 0.1) / wo.ht));
        wo.t0 = -K * wo.ht;
        wo.support_lo = 0.0;
        wo.support_hi = c.T;
        wo.x_interest = c.T;
    }
    const WaveField w = solve_wave(sys, m, f, c.T, wo);

    write_columns_csv((dir / "control.csv").string(), "t,f", g.nodes(), f.values);
    const int levels = w.nt / refine + 1;
    Vec t(levels), u(levels), ux(levels);
    for (int j = 0; j < levels; ++j) {
        const int l = j * refine;
        t[j] = w.time(l);
        u[j] = w.trace0[l];
        ux[j] = (-3.0 * w.trace0[l] + 4.0 * w.trace1[l] - w.trace2[l]) / (2.0 * w.hx);
    }
    {
        std::ofstream tf(dir / "trace.csv");
        if (!tf) throw Error("cannot write trace.csv");
        tf << "t,u,ux\n";
        for (int j = 0; j < levels; ++j)
            tf << format_number(t[j]) << ',' << format_number(u[j]) << ',' << format_number(ux[j]) << '\n';
    }
    if (c.dump_field) write_field_csv((dir / "field.csv").string(), w, std::max(1, refine / 2));

    out << "forward " << to_string(sys) << " medium=" << m.name << " hx=" << format_number(w.hx)
        << " ht=" << format_number(w.ht) << " nx=" << w.nx << " nt=" << w.nt << '\n';
    out << "max|u| on stored slices: " << fmt("%.6e", w.slices.cwiseAbs().maxCoeff()) << '\n';
    if (sys != System::Scattering)
        out << "finite-speed violation: " << fmt("%.3e", finite_speed_violation(w, m)) << '\n';
    return kSuccess;
}

int cmd_extract(const RunConfig& c, std::ostream& out) {
    if (!c.kernel.empty()) throw UsageError("extract-kernel reads a medium, not --kernel");
    const System sys = system_from_string(c.system);
    const ResponseKernel k = obtain_kernel(c, sys);
    const fs::path dir = output_dir(c);
    write_kernel_csv((dir / "kernel.csv").string(), k);
    ordered_json j;
    j["system"] = to_string(sys);
    j["n"] = k.n();
    j["step"] = k.step();
    j["T"] = k.T;
    j["alpha"] = k.alpha;
    j["beta"] = k.beta + 0.0;
    j["a"] = k.a ? ordered_json(*k.a) : ordered_json(nullptr);
    j["pulse_width"] = k.pulse_width;
    write_json(dir / "kernel.json", j);
    out << "kernel " << to_string(sys) << " n=" << k.n() << " step=" << format_number(k.step())
        << " r(0)=" << fmt("%.8g", k.r[0]) << " alpha=" << fmt("%.8g", k.alpha) << " beta=" << fmt("%.8g", k.beta + 0.0)
        << '\n';
    return kSuccess;
}

int cmd_admissibility(const RunConfig& c, std::ostream& out) {
    const System sys = system_from_string(c.system);
    const ResponseKernel k = obtain_kernel(c, sys);
    const AdmissibilityVerdict v = check_admissibility(k);
    const fs::path dir = output_dir(c);
    ordered_json j;
    j["system"] = to_string(sys);
    j["admissible"] = v.admissible;
    j["reason"] = v.reason;
    j["size"] = v.size;
    j["failed_pivot"] = v.failed_pivot;
    j["pivot_ratio"] = v.pivot_ratio;
    write_json(dir / "admissibility.json", j);
    out << (v.admissible ? "admissible: " : "inadmissible: ") << v.reason << '\n';
    return v.admissible ? kSuccess : kInadmissible;
}

int cmd_invert(const RunConfig& c, std::ostream& out) {
    const fs::path dir = output_dir(c);
    const ReconstructionOptions opt = reconstruction_options(c);
    ReconstructionReport rep;
    try {
        if (!c.kernel.empty()) {
            rep = reconstruct(c.method, obtain_kernel(c, method_system(c.method)), opt);
        } else if (c.shift != 0.0) {
            const MediumProfile m = load_medium(c);
            rep = reconstruct(c.method, obtain_kernel(c, method_system(c.method)), opt);
            score(rep, m);
        } else {
            rep = roundtrip(load_medium(c), c.method, {c.n}, c.T, opt);
        }
    } catch (const InadmissibleData&) {
        write_json(dir / "report.json", rejected_report_json(c.method, c.n));
        throw;
    }
    write_json(dir / "report.json", report_json(rep, rep.n));
    write_medium_csv((dir / "profile.csv").string(), rep.recovered);
    out << "invert " << c.method << " n=" << rep.n;
    if (rep.sup_rel_error >= 0.0)
        out << " sup_rel_error=" << fmt("%.4e", rep.sup_rel_error) << " l2_rel_error=" << fmt("%.4e", rep.l2_rel_error)
            << (rep.absolute_error ? " (absolute)" : "");
    out << " masked_fraction=" << fmt("%.4f", rep.masked_fraction) << '\n';
    return kSuccess;
}

int cmd_classical(const RunConfig& c, std::ostream& out) {
    const ClassicalKind kind = classical_from_string(c.method);
    const System sys = system_from_string(c.method);
    const ResponseKernel k = obtain_kernel(c, sys);
    FredholmOptions fo;
    fo.ridge = c.ridge;
    FamilyTarget target = FamilyTarget::gl();
    if (kind == ClassicalKind::Krein) target = FamilyTarget::krein();
    if (kind == ClassicalKind::Pariiskii) target = FamilyTarget::pariiskii();
    if (kind == ClassicalKind::Marchenko) target = FamilyTarget::scattering(c.k);

    const int j = static_cast<int>(std::lround(c.xi / k.step()));
    const ClassicalKernel direct = solve_classical(kind, k, j * k.step(), fo);
    const ControlFamily fam = solve_special_family(k, target, -1, fo);
    const ClassicalKernel derived = classical_kernel_from_family(fam, kind);

    const fs::path dir = output_dir(c);
    const std::string name = to_string(kind);
    write_classical_csv((dir / ("classical_" + name + ".csv")).string(), direct);
    write_classical_csv((dir / ("classical_" + name + "_family.csv")).string(), derived);

    out << "classical " << name << " xi=" << format_number(j * k.step()) << " max|kernel|="
        << fmt("%.6e", direct.max_abs());
    if (derived.row_of(j) >= 0) {
        const Vec& a = direct.values[0];
        double diff = 0.0;
        for (int i = 0; i < a.size(); ++i)
            diff = std::max(diff, std::abs(a[i] - derived.at(j, direct.row_first[0] + i)));
        out << " family_vs_direct=" << fmt("%.3e", diff);
    }
    out << '\n';
    return kSuccess;
}

int cmd_eigen(const RunConfig& c, std::ostream& out) {
    const MediumProfile m = load_medium(c);
    if ((m.rho.array() - 1.0).abs().maxCoeff() > 1e-12) throw DomainError("eigen-target requires rho = 1");
    const ResponseKernel k = obtain_kernel(c, System::Dirichlet);
    FredholmOptions fo;
    fo.ridge = c.ridge;
    const SampledFunction f = solve_eigen_target(k, c.lambda, c.T, fo);
    const fs::path dir = output_dir(c);
    write_columns_csv((dir / "eigen_control.csv").string(), "t,f", f.grid.nodes(), f.values);
    out << "eigen-target lambda=" << format_number(c.lambda) << " n=" << c.n;
    if (c.kernel.empty() && c.shift == 0.0) {
        // Check the final state against the eigenfunction on [0, 0.9 T].  The
        // control does not vanish at t = 0, which the wave solver requires, so
        // it is switched on by smooth ramps of widths eps, eps/2 and eps/4; the
        // state error of a ramp is a power series in its width (the Volterra
        // tail of the wave sees the whole control history), extrapolated away.
        const int refine = 8;
        const int nt = c.n * refine;
        auto state = [&](double ramp) {
            auto smooth = [&](double t) {
                if (t >= ramp) return f.at(t);
                const double s = t / ramp;
                return f.at(t) * s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
            };
            WaveOptions wo;
            wo.ht = c.T / nt;
            wo.slice_levels = {nt};
            return solve_wave(System::Dirichlet, m, smooth, c.T, wo);
        };
        const double eps = 0.08 * c.T;
        const WaveField w1 = state(eps), w2 = state(0.5 * eps), w4 = state(0.25 * eps);
        const SampledFunction y = sl_solution(m, 0.0, 1.0, c.lambda);
        double err = 0.0, mx = 0.0;
        for (int i = 0; i <= c.n; ++i) {
            const double x = 0.9 * c.T * i / c.n;
            const double u = (8.0 * w4.slice_at(nt, x) - 6.0 * w2.slice_at(nt, x) + w1.slice_at(nt, x)) / 3.0;
            err = std::max(err, std::abs(u - y.at(x)));
            mx = std::max(mx, std::abs(y.at(x)));
        }
        out << " state_sup_rel_error=" << fmt("%.3e", err / mx);
    }
    out << '\n';
    return kSuccess;
}

int cmd_visualize(const RunConfig& c, std::ostream& out) {
    const MediumProfile m = load_medium(c);
    const ResponseKernel k = obtain_kernel(c, System::Dirichlet);
    FredholmOptions fo;
    fo.ridge = c.ridge;
    const ControlFamily fam = solve_special_family(k, FamilyTarget::gl(), -1, fo);
    const ClassicalKernel L = classical_kernel_from_family(fam, ClassicalKind::GL);
    const SingularControl sc = singular_control(fam, L, c.xi);
    const ConnectingOperator C = assemble_connecting(k, c.T);
    const std::vector<SampledFunction> fs_ = random_smooth_controls(TimeGrid(c.T, c.n), c.controls, c.seed);

    const fs::path dir = output_dir(c);
    write_columns_csv((dir / "singular_control.csv").string(), "t,f", sc.regular.grid.nodes(), sc.regular.values);
    std::ofstream vf(dir / "visualize.csv");
    if (!vf) throw Error("cannot write visualize.csv");
    vf << "control,functional,fd,rel_error\n";
    out << "visualize xi=" << format_number(sc.xi) << " delta amplitude=" << fmt("%.6g", sc.amplitude)
        << " at t=" << format_number(sc.T - sc.xi) << '\n';
    const bool have_truth = c.kernel.empty() && c.shift == 0.0;
    for (std::size_t i = 0; i < fs_.size(); ++i) {
        const double v = visualize_wave(C, sc, fs_[i]);
        double ufd = NAN, rel = NAN;
        if (have_truth) {
            WaveOptions wo;
            const int refine = 8;
            wo.ht = c.T / (c.n * refine);
            const int nt = c.n * refine;
            wo.slice_levels = {nt};
            const WaveField w = solve_wave(System::Dirichlet, m, fs_[i], c.T, wo);
            ufd = w.slice_at(nt, sc.xi);
            rel = std::abs(v - ufd) / w.slice(nt).cwiseAbs().maxCoeff();
        }
        vf << i << ',' << format_number(v) << ',' << format_number(ufd) << ',' << format_number(rel) << '\n';
        out << "  control " << i << ": functional=" << fmt("%.8f", v);
        if (have_truth) out << " fd=" << fmt("%.8f", ufd) << " rel_error=" << fmt("%.3e", rel);
        out << '\n';
    }
    return kSuccess;
}

int cmd_roundtrip(const RunConfig& c, std::ostream& out) {
    const std::vector<int> ladder = parse_ladder(c.ladder);
    const MediumProfile m = load_medium(c);
    const fs::path dir = output_dir(c);
    ReconstructionReport rep;
    try {
        rep = roundtrip(m, c.method, ladder, c.T, reconstruction_options(c));
    } catch (const InadmissibleData&) {
        write_json(dir / "report.json", rejected_report_json(c.method, ladder.back()));
        throw;
    }
    write_json(dir / "report.json", report_json(rep, rep.n));
    write_medium_csv((dir / "profile.csv").string(), rep.recovered);
    std::ofstream lf(dir / "ladder.csv");
    if (!lf) throw Error("cannot write ladder.csv");
    lf << "n,sup_rel_error,l2_rel_error\n";
    out << "roundtrip " << c.method << " medium=" << m.name << '\n';
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        lf << ladder[i] << ',' << format_number(rep.ladder_sup[i]) << ',' << format_number(rep.ladder_l2[i]) << '\n';
        out << "  n=" << ladder[i] << " sup_rel_error=" << fmt("%.4e", rep.ladder_sup[i])
            << " l2_rel_error=" << fmt("%.4e", rep.ladder_l2[i]);
        if (i > 0) out << " order=" << fmt("%.2f", rep.orders[i - 1]);
        out << '\n';
    }
    return kSuccess;
}

/// Self-convergence of the wave solver: final states on nested grids
/// ht = T/n for every n of the ladder (consecutive entries must double).
int cmd_convergence(const RunConfig& c, std::ostream& out) {
    const std::vector<int> ladder = parse_ladder(c.ladder);
    if (ladder.size() < 2) throw UsageError("convergence needs at least two ladder entries");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (ladder[i] != 2 * ladder[i - 1]) throw UsageError("convergence ladder entries must double");
    const System sys = system_from_string(c.system);
    const MediumProfile m = load_medium(c);
    const fs::path dir = output_dir(c);

    const TimeGrid fine(c.T, ladder.back() * 16);
    SampledFunction f = random_smooth_controls(fine, 1, c.seed)[0];
    // extra smoothness at t = 0 keeps the wavefront from limiting the order
    for (int j = 0; j < fine.size(); ++j) f.values[j] *= 0.5 * (1.0 - std::cos(M_PI * fine.node(j) / c.T));
    WaveOptions base;
    double t0 = 0.0;
    if (sys == System::Scattering) {
        if (!m.support_bound) throw UsageError("scattering needs a potential support bound (--support)");
        for (int j = 0; j < fine.size(); ++j) f.values[j] *= 0.5 * (1.0 - std::cos(2.0 * M_PI * fine.node(j) / c.T));
        const double coarse = c.T / ladder.front();
        t0 = -std::ceil((*m.support_bound + 0.1) / coarse) * coarse;
        base.support_lo = 0.0;
        base.support_hi = c.T;
        base.x_interest = c.T;
    }
    // one spatial/temporal ratio for the whole ladder keeps the grids nested
    double msr = 1.0;
    if (sys != System::Scattering) {
        const double depth = depth_at_time(m, c.T + 0.5);
        for (int i = 0; i <= 2000; ++i) msr = std::min(msr, std::sqrt(m.rho_at(depth * i / 2000)));
        msr = std::min(msr, std::sqrt(m.rho_at(0.0)));
    }
    const double depth = sys == System::Scattering ? c.T : depth_at_time(m, c.T);

    std::vector<Vec> states;
    double hx_coarse = 0.0;
    for (int n : ladder) {
        WaveOptions wo = base;
        wo.ht = c.T / n;
        wo.hx = wo.ht / (0.9 * msr);
        const int scale = n / ladder.front();
        wo.t0 = t0;
        const int level = static_cast<int>(std::lround((c.T - t0) / wo.ht));
        wo.slice_levels = {level};
        wo.x_end = (sys == System::Scattering ? c.T - t0 + 0.2 : depth_at_time(m, c.T + 0.1));
        const WaveField w = solve_wave(sys, m, f, c.T, wo);
        if (hx_coarse == 0.0) hx_coarse = w.hx;
        const int coarse_nodes = static_cast<int>(std::floor(depth / hx_coarse));
        Vec s(coarse_nodes + 1);
        const Vec full = w.slice(level);
        for (int i = 0; i <= coarse_nodes; ++i) s[i] = full[i * scale];
        states.push_back(s);
    }
    std::ofstream cf(dir / "convergence.csv");
    if (!cf) throw Error("cannot write convergence.csv");
    cf << "n,difference,order\n";
    out << "convergence " << to_string(sys) << " medium=" << m.name << '\n';
    double prev = -1.0;
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
        const double d = (states[i] - states[i + 1]).cwiseAbs().maxCoeff();
        const double order = prev > 0.0 ? std::log2(prev / d) : NAN;
        cf << ladder[i] << ',' << format_number(d) << ',' << format_number(order) << '\n';
        out << "  n=" << ladder[i] << " vs " << ladder[i + 1] << ": sup difference=" << fmt("%.4e", d);
        if (prev > 0.0) out << " order=" << fmt("%.2f", order);
        out << '\n';
        prev = d;
    }
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Boundary-control inverse problems for the 1D wave equation", "bcm"};
    app.fallthrough();
    app.require_subcommand(1, 1);
    app.set_config("--config", "", "Read 'key = value' settings from a file (flags take precedence)");

    app.add_option("--medium", c.medium, "Catalog medium or medium CSV path")->capture_default_str();
    app.add_option("--system", c.system, "dirichlet, neumann or scattering")->capture_default_str();
    app.add_option("--kernel", c.kernel, "Kernel CSV used instead of extracting from the medium");
    app.add_option("--T", c.T, "Horizon")->capture_default_str();
    app.add_option("--n", c.n, "Kernel grid size (steps per T, or per 2a for scattering)")->capture_default_str();
    app.add_option("--k", c.k, "Wavenumber of the scattering target")->capture_default_str();
    app.add_option("--lambda", c.lambda, "Spectral parameter of the eigen-target")->capture_default_str();
    app.add_option("--xi", c.xi, "Slice parameter of single-slice commands")->capture_default_str();
    app.add_option("--ridge", c.ridge, "Tikhonov shift mu of the family solves")->capture_default_str();
    app.add_option("--seed", c.seed, "Seed of the random smooth controls")->capture_default_str();
    app.add_option("--out", c.out, "Output directory")->capture_default_str();
    app.add_option("--ladder", c.ladder, "Comma separated grid sizes")->capture_default_str();
    app.add_option("--alpha", c.alpha, "rho^{1/2}(0) of a kernel file")->capture_default_str();
    app.add_option("--beta", c.beta, "-rho'(0)/(4 rho(0)) of a kernel file")->capture_default_str();
    app.add_option("--support", c.support, "Potential support bound a");
    app.add_option("--shift", c.shift, "Constant added to the kernel (corruption test)");
    app.add_option("--controls", c.controls, "Number of seeded controls (visualize)")->capture_default_str();
    app.add_flag("--dump-field", c.dump_field, "Write the x,t,u field dump (forward)");

    const std::vector<std::string> methods{"gl", "krein", "marchenko"};
    const std::vector<std::string> kinds{"gl", "krein", "marchenko", "pariiskii"};
    app.add_subcommand("forward", "Forward solve with a seeded control; writes trace.csv (and field.csv)");
    app.add_subcommand("extract-kernel", "Synthesize the response kernel of a medium; writes kernel.csv");
    app.add_subcommand("admissibility", "Positivity test of the connecting operator");
    app.add_subcommand("invert", "Reconstruct a medium; writes report.json and profile.csv")
        ->add_option("method", c.method, "gl, krein or marchenko")
        ->required()
        ->check(CLI::IsMember(methods));
    app.add_subcommand("classical", "Classical kernels: direct solve at --xi and family-derived")
        ->add_option("kind", c.method, "gl, krein, marchenko or pariiskii")
        ->required()
        ->check(CLI::IsMember(kinds));
    app.add_subcommand("eigen-target", "Control steering the state to the eigenfunction for --lambda");
    app.add_subcommand("visualize", "Singular control at --xi and the visualising functional check");
    app.add_subcommand("roundtrip", "Extract, reconstruct and score over the --ladder")
        ->add_option("method", c.method, "gl, krein or marchenko")
        ->required()
        ->check(CLI::IsMember(methods));
    app.add_subcommand("convergence", "Self-convergence of the wave solver over the --ladder");

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }
    c.command = app.get_subcommands().front()->get_name();

    try {
        validate(c);
        if (c.command == "forward") return cmd_forward(c, out);
        if (c.command == "extract-kernel") return cmd_extract(c, out);
        if (c.command == "admissibility") return cmd_admissibility(c, out);
        if (c.command == "invert") return cmd_invert(c, out);
        if (c.command == "classical") return cmd_classical(c, out);
        if (c.command == "eigen-target") return cmd_eigen(c, out);
        if (c.command == "visualize") return cmd_visualize(c, out);
        if (c.command == "roundtrip") return cmd_roundtrip(c, out);
        if (c.command == "convergence") return cmd_convergence(c, out);
        err << "unknown command '" << c.command << "'\n";
        return kUsage;
    } catch (const InadmissibleData& e) {
        err << "inadmissible data: " << e.what() << '\n';
        return kInadmissible;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace bcm::cli
