#include "bcm/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "bcm/errors.hpp"
#include "bcm/mollifier.hpp"
#include "bcm/numerics.hpp"

namespace bcm {

std::string to_string(System s) {
    switch (s) {
        case System::Dirichlet: return "dirichlet";
        case System::Neumann: return "neumann";
        case System::Scattering: return "scattering";
    }
    return "?";
}

System system_from_string(const std::string& s) {
    if (s == "dirichlet" || s == "gl") return System::Dirichlet;
    if (s == "neumann" || s == "krein" || s == "pariiskii") return System::Neumann;
    if (s == "scattering" || s == "marchenko") return System::Scattering;
    throw ParseError("unknown system '" + s + "'");
}

Vec WaveField::slice(int level) const {
    const auto it = std::find(slice_levels.begin(), slice_levels.end(), level);
    if (it == slice_levels.end()) throw DomainError("time level " + std::to_string(level) + " was not stored");
    return slices.col(static_cast<int>(it - slice_levels.begin()));
}

double WaveField::slice_at(int level, double xq) const { return lagrange4(slice(level), hx, xq); }

namespace {

double min_sqrt_rho(const MediumProfile& m, double L) {
    const double xe = std::min(L, m.x_end);
    const int N = std::max(m.n_cells, 1000);
    double mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= N; ++i) mn = std::min(mn, m.rho_at(xe * i / N));
    return std::sqrt(mn);
}

// Leapfrog sweep from the two initial levels.  For Dirichlet/Neumann the
// first computed level is 1 (levels -1 and 0 vanish); for scattering the
// initial levels are 0 and 1 and the first computed level is 2.
WaveField leapfrog(System sys, const Vec& rho, const Vec& q, double hx, double ht, double t0, int nt,
                   const std::function<double(double)>& control, Vec up, Vec uc, int first_level,
                   const std::vector<int>& store, int record_node) {
    WaveField w;
    w.system = sys;
    w.hx = hx;
    w.ht = ht;
    w.t0 = t0;
    w.nx = static_cast<int>(rho.size());
    w.nt = nt;
    w.trace0 = Vec::Zero(nt + 1);
    w.trace1 = Vec::Zero(nt + 1);
    w.trace2 = Vec::Zero(nt + 1);
    w.record_node = record_node;
    if (record_node >= 0) w.record = Vec::Zero(nt + 1);
    w.slice_levels = store;
    w.slices = Mat::Zero(w.nx, static_cast<int>(store.size()));

    const int nx = w.nx;
    Vec c(nx);
    for (int i = 0; i < nx; ++i) c[i] = ht * ht / rho[i];
    const double r2 = 1.0 / (hx * hx);
    Vec un = Vec::Zero(nx);

    std::size_t next = 0;
    auto keep = [&](int level, const Vec& u) {
        w.trace0[level] = u[0];
        w.trace1[level] = u[1];
        w.trace2[level] = u[2];
        if (record_node >= 0) w.record[level] = u[record_node];
        while (next < store.size() && store[next] == level) w.slices.col(static_cast<int>(next++)) = u;
    };
    if (first_level == 2) keep(0, up);
    keep(first_level - 1, uc);

    for (int j = first_level; j <= nt; ++j) {
        const double* pc = uc.data();
        const double* pp = up.data();
        double* pn = un.data();
        for (int i = 1; i < nx - 1; ++i)
            pn[i] = 2.0 * pc[i] - pp[i] + c[i] * ((pc[i + 1] - 2.0 * pc[i] + pc[i - 1]) * r2 - q[i] * pc[i]);
        pn[nx - 1] = 0.0;
        switch (sys) {
            case System::Dirichlet: pn[0] = control(t0 + j * ht); break;
            case System::Neumann: {
                // ghost node u_{-1} = u_1 - 2 hx f(t_{j-1})
                const double lap = (2.0 * pc[1] - 2.0 * pc[0] - 2.0 * hx * control(t0 + (j - 1) * ht)) * r2;
                pn[0] = 2.0 * pc[0] - pp[0] + c[0] * (lap - q[0] * pc[0]);
                break;
            }
            case System::Scattering: pn[0] = 0.0; break;
        }
        keep(j, un);
        std::swap(up, uc);
        std::swap(uc, un);
    }
    if (!w.trace0.allFinite() || !w.trace1.allFinite()) throw CflViolation("leapfrog solution blew up");
    return w;
}

}  // namespace

WaveField solve_wave(System system, const MediumProfile& m, const std::function<double(double)>& control,
                     double horizon, const WaveOptions& opt) {
    const double ht = opt.ht;
    if (!(ht > 0.0)) throw GridError("time step must be positive");
    const bool scat = system == System::Scattering;
    const double t0 = scat ? opt.t0 : 0.0;
    if (!(horizon > t0)) throw GridError("horizon must exceed the start time");
    const int nt = static_cast<int>(std::ceil((horizon - t0) / ht - 1e-9));

    double a = 0.0;
    double L = opt.x_end;
    if (scat) {
        if (!m.support_bound) throw DomainError("scattering solve needs a potential support bound");
        a = *m.support_bound;
        if (opt.support_lo < 0.0 || !(opt.support_hi > opt.support_lo))
            throw DomainError("scattering control support must lie in (0, inf)");
        if (!(t0 < -a)) throw DomainError("scattering start time must precede -a");
        const double x_int = opt.x_interest > 0.0 ? opt.x_interest : a;
        if (L <= 0.0) L = std::max(opt.support_hi - t0, x_int + horizon - t0);
    } else {
        if (std::abs(control(0.0)) > 1e-12) throw DomainError("control must vanish at t = 0");
        if (L <= 0.0) L = depth_at_time(m, horizon + 4.0 * ht);
    }
    const double msr = scat ? 1.0 : min_sqrt_rho(m, L);
    const double hx = opt.hx > 0.0 ? opt.hx : ht / (opt.cfl * msr);
    if (ht > 0.9 * hx * msr * (1.0 + 1e-9))
        throw CflViolation("CFL condition ht <= 0.9 hx min rho^{1/2} violated");
    const int nx = static_cast<int>(std::ceil(L / hx)) + (opt.x_end > 0.0 ? 1 : 5);
    if (nx < 4) throw GridError("spatial domain too short");
    if (opt.record_node >= nx) throw GridError("record node outside the domain");

    if (scat && opt.record_node >= 0) {
        // the corner (0, inf supp f) influences t > x + inf supp f only
        const double xr = opt.record_node * hx;
        if (t0 + nt * ht > xr + opt.support_lo + 1e-9)
            throw WindowError("recording window reaches the artificial-boundary domain of influence");
    }

    Vec rho(nx), q(nx);
    for (int i = 0; i < nx; ++i) {
        rho[i] = scat ? 1.0 : m.rho_at(i * hx);
        q[i] = m.q_at(i * hx);
    }

    std::vector<int> store;
    if (opt.slice_every > 0)
        for (int j = 0; j <= nt; j += opt.slice_every) store.push_back(j);
    for (int j : opt.slice_levels)
        if (j >= 0 && j <= nt) store.push_back(j);
    if (opt.slice_every > 0) store.push_back(nt);
    std::sort(store.begin(), store.end());
    store.erase(std::unique(store.begin(), store.end()), store.end());

    if (!scat)
        return leapfrog(system, rho, q, hx, ht, 0.0, nt, control, Vec::Zero(nx), Vec::Zero(nx), 1, store,
                        opt.record_node);

    Vec u0(nx), u1(nx);
    for (int i = 0; i < nx; ++i) {
        u0[i] = control(i * hx + t0);
        u1[i] = control(i * hx + t0 + ht);
    }
    u0[0] = u1[0] = 0.0;
    return leapfrog(system, rho, q, hx, ht, t0, nt, control, u0, u1, 2, store, opt.record_node);
}

WaveField solve_wave(System system, const MediumProfile& m, const SampledFunction& control, double horizon,
                     const WaveOptions& opt) {
    if (system == System::Scattering) {
        const double end = control.grid.t_end();
        return solve_wave(
            system, m, [&](double s) { return (s < 0.0 || s > end) ? 0.0 : control.at(s); }, horizon, opt);
    }
    return solve_wave(system, m, [&](double t) { return control.at(t); }, horizon, opt);
}

double finite_speed_violation(const WaveField& field, const MediumProfile& m) {
    if (field.system == System::Scattering || field.slice_levels.empty()) return 0.0;
    const double umax = field.slices.cwiseAbs().maxCoeff();
    if (umax == 0.0) return 0.0;
    Vec tau(field.nx);
    tau[0] = 0.0;
    double prev = std::sqrt(m.rho_at(0.0));
    for (int i = 1; i < field.nx; ++i) {
        const double cur = std::sqrt(m.rho_at(field.x(i)));
        tau[i] = tau[i - 1] + 0.5 * field.hx * (prev + cur);
        prev = cur;
    }
    double worst = 0.0;
    for (std::size_t s = 0; s < field.slice_levels.size(); ++s) {
        const double t = field.time(field.slice_levels[s]);
        for (int i = 0; i < field.nx; ++i)
            if (t < tau[i] - 2.0 * field.ht) worst = std::max(worst, std::abs(field.slices(i, static_cast<int>(s))));
    }
    return worst / umax;
}

// ---------------------------------------------------------------------------

int ResponseKernel::n() const {
    if (system == System::Scattering) return support_index();
    return static_cast<int>(std::lround(T / step()));
}

int ResponseKernel::support_index() const {
    if (!a) throw DomainError("kernel has no support bound");
    return static_cast<int>(std::lround(2.0 * *a / step()));
}

ResponseKernel ResponseKernel::dirichlet(double T, const Vec& r, double alpha, double beta) {
    const int n2 = static_cast<int>(r.size()) - 1;
    if (n2 < 4 || n2 % 2 != 0) throw GridError("Dirichlet kernel needs 2n+1 samples on [0, 2T]");
    ResponseKernel k;
    k.system = System::Dirichlet;
    k.T = T;
    k.r = SampledFunction(TimeGrid(2.0 * T, n2), r);
    k.p = SampledFunction(k.r.grid, 0.5 * cumtrapz(r, k.r.grid.step()));
    k.alpha = alpha;
    k.beta = beta;
    return k;
}

ResponseKernel ResponseKernel::neumann(double T, const Vec& r, double alpha, double beta) {
    const int n2 = static_cast<int>(r.size()) - 1;
    if (n2 < 4 || n2 % 2 != 0) throw GridError("Neumann kernel needs 2n+1 samples on [0, 2T]");
    ResponseKernel k;
    k.system = System::Neumann;
    k.T = T;
    k.r = SampledFunction(TimeGrid(2.0 * T, n2), r);
    k.alpha = alpha;
    k.beta = beta;
    return k;
}

ResponseKernel ResponseKernel::scattering(double a, int n, const Vec& r) {
    const int total = static_cast<int>(r.size()) - 1;
    if (n < 4 || total < n) throw GridError("scattering kernel must cover [0, 2a]");
    ResponseKernel k;
    k.system = System::Scattering;
    k.T = a;
    k.a = a;
    const double step = 2.0 * a / n;
    k.r = SampledFunction(TimeGrid(total * step, total), r);
    return k;
}

double density_slope_at_origin(const MediumProfile& m) {
    const double h = m.x_end / m.n_cells;
    return (-3.0 * m.rho[0] + 4.0 * m.rho[1] - m.rho[2]) / (2.0 * h);
}

namespace {

// Fill samples [0, k0) of v by a degree-4 polynomial through nodes k0..k0+4,
// optionally pinned to v(0) = 0.
void extrapolate_head(Vec& v, int k0, bool zero_at_origin) {
    std::vector<double> xs, ys;
    if (zero_at_origin) {
        xs.push_back(0.0);
        ys.push_back(0.0);
    }
    for (int k = k0; static_cast<int>(xs.size()) < 5; ++k) {
        xs.push_back(k);
        ys.push_back(v[k]);
    }
    for (int k = zero_at_origin ? 1 : 0; k < k0; ++k) v[k] = poly_fit_eval(xs, ys, 4, k);
    if (zero_at_origin) v[0] = 0.0;
}

ResponseKernel extract_boundary(System sys, const MediumProfile& m, double T, int n, const ExtractionOptions& opt) {
    if (n < 8) throw GridError("kernel extraction needs n >= 8");
    if (opt.probe_steps < 2 || opt.probe_steps % 2 != 0) throw GridError("probe width must be an even step count");
    const double step = T / n;
    const int cs = opt.probe_steps / 2;
    const int k0 = cs + 1;
    const Mollifier mol(opt.probe_steps * step, 0.0);
    const double ht = step / opt.refine;
    const int K = 2 * n + cs + 2;
    const int nt = K * opt.refine;
    const double t_end = nt * ht;

    const double alpha = std::sqrt(m.rho[0]);
    const double beta = -density_slope_at_origin(m) / (4.0 * m.rho[0]);

    WaveOptions wo;
    wo.ht = ht;
    wo.cfl = opt.cfl;
    // reflections from the far end return to x = 0 after 2 tau(L) > t_end
    wo.x_end = depth_at_time(m, 0.5 * t_end + 20.0 * ht);

    Vec out(2 * n + 1);
    if (sys == System::Dirichlet) {
        const WaveField f = solve_wave(sys, m, [&](double t) { return mol.ramp(t); }, t_end, wo);
        Vec H(K + 1);
        for (int k = 0; k <= K; ++k) {
            const int j = k * opt.refine;
            const double t = j * ht;
            const double g = (-3.0 * f.trace0[j] + 4.0 * f.trace1[j] - f.trace2[j]) / (2.0 * f.hx);
            H[k] = g + alpha * mol.step(t) - beta * mol.ramp(t);
        }
        const Vec Hp = differentiate(H, step, 1);
        Vec p = Vec::Zero(2 * n + 1);
        for (int k = k0; k <= 2 * n; ++k) p[k] = 0.5 * Hp[k + cs];
        // The probe start-up transient lingers a few steps past the probe
        // support, so the head is rebuilt from nodes a full probe width later.
        extrapolate_head(p, opt.probe_steps + 2, true);
        out = 2.0 * differentiate(p, step, 1);
        ResponseKernel rk = ResponseKernel::dirichlet(T, out, alpha, beta);
        rk.pulse_width = mol.width();
        return rk;
    }
    const WaveField f = solve_wave(sys, m, [&](double t) { return mol.step(t); }, t_end, wo);
    Vec U(K + 1);
    for (int k = 0; k <= K; ++k) U[k] = f.trace0[k * opt.refine];
    const Vec D = differentiate(U, step, 1);
    for (int k = k0; k <= 2 * n; ++k) out[k] = D[k + cs];
    extrapolate_head(out, k0, false);
    ResponseKernel rk = ResponseKernel::neumann(T, out, alpha, beta);
    rk.pulse_width = mol.width();
    return rk;
}

ResponseKernel extract_scattering(const MediumProfile& m, int n, const ExtractionOptions& opt) {
    if (!m.support_bound) throw DomainError("scattering extraction needs a potential support bound");
    if (n < 8) throw GridError("kernel extraction needs n >= 8");
    if (opt.probe_steps < 2 || opt.probe_steps % 2 != 0) throw GridError("probe width must be an even step count");
    const double a = *m.support_bound;
    const double step = 2.0 * a / n;
    const double ht = step / opt.refine;
    const double hx = ht / opt.cfl;
    const double w = opt.probe_steps * step;
    const int k0 = opt.probe_steps / 2 + 1;
    const int total = n + opt.tail_steps;

    const int irec = static_cast<int>(std::ceil((a + 2.0 * w + 0.05) / hx));
    const double xrec = irec * hx;
    // delay chosen so that the pulse centre sits on the kernel grid
    const double s0 = std::ceil((xrec + 0.5 * w + 2.0 * step) / step) * step - xrec;
    const double s_lo = s0 - 0.5 * w;
    const long K0 = std::max<long>(static_cast<long>(std::ceil((2.0 * xrec + w + 0.1 + s0) / step)), total + 1);
    const double t0 = xrec + s0 - K0 * step;
    const double t_end = xrec + s_lo;
    const int nt = static_cast<int>(std::floor((t_end - t0) / ht + 1e-9));

    const Mollifier mol(w, s_lo);
    WaveOptions wo;
    wo.ht = ht;
    wo.hx = hx;
    wo.t0 = t0;
    wo.record_node = irec;
    wo.support_lo = s_lo;
    wo.support_hi = s_lo + w;
    wo.x_end = std::max(a + xrec + 0.1, s_lo + w - t0 + 0.1);
    const auto incident = [&](double s) { return mol.density(s); };
    const double horizon = t0 + nt * ht;

    MediumProfile free = m;
    free.q.setZero();
    free.q_fn = [](double) { return 0.0; };
    const WaveField with_q = solve_wave(System::Scattering, m, incident, horizon, wo);
    const WaveField without_q = solve_wave(System::Scattering, free, incident, horizon, wo);
    const Vec diff = with_q.record - without_q.record;

    Vec r = Vec::Zero(total + 1);
    for (int k = k0; k <= total; ++k) {
        const long j = (K0 - k) * opt.refine;
        if (j < 0 || j > nt) throw WindowError("scattering window too short to contain [0, 2a]");
        r[k] = diff[j];
    }
    extrapolate_head(r, k0, false);
    ResponseKernel rk = ResponseKernel::scattering(a, n, r);
    rk.pulse_width = w;
    return rk;
}

}  // namespace

ResponseKernel extract_response_kernel(System system, const MediumProfile& m, double T, int n,
                                       const ExtractionOptions& opt) {
    if (system == System::Scattering) return extract_scattering(m, n, opt);
    if (!(T > 0.0)) throw GridError("horizon must be positive");
    return extract_boundary(system, m, T, n, opt);
}

SampledFunction apply_control_operator(System system, const MediumProfile& m, const SampledFunction& f, double T,
                                       int refine) {
    const int N = f.grid.n_steps();
    const double ht = f.grid.step() / refine;
    WaveOptions wo;
    wo.ht = ht;
    if (system == System::Scattering) {
        if (!m.support_bound) throw DomainError("scattering needs a potential support bound");
        const double Lf = f.grid.t_end();
        const int K = static_cast<int>(std::ceil((*m.support_bound + 0.1) / ht));
        wo.t0 = -K * ht;
        wo.support_lo = 0.0;
        wo.support_hi = Lf;
        wo.x_interest = Lf;
        wo.slice_levels = {K};
        const WaveField w = solve_wave(system, m, f, 0.0, wo);
        return SampledFunction::sample(f.grid, [&](double x) { return w.slice_at(K, x); });
    }
    const int nt = static_cast<int>(std::lround(T / ht));
    const SpaceGrid xs(depth_at_time(m, T), N);
    if (system == System::Dirichlet) {
        wo.slice_levels = {nt};
        const WaveField w = solve_wave(system, m, f, nt * ht, wo);
        return SampledFunction::sample(xs, [&](double x) { return w.slice_at(nt, x); });
    }
    wo.slice_levels = {nt - 1, nt + 1};
    const WaveField w = solve_wave(system, m, f, (nt + 1) * ht, wo);
    const Vec ut = (w.slice(nt + 1) - w.slice(nt - 1)) / (2.0 * ht);
    return SampledFunction::sample(xs, [&](double x) { return lagrange4(ut, w.hx, x); });
}

double cubic_bspline(double u) {
    u = std::abs(u);
    if (u >= 2.0) return 0.0;
    if (u >= 1.0) return (2.0 - u) * (2.0 - u) * (2.0 - u) / 6.0;
    return 2.0 / 3.0 - u * u + 0.5 * u * u * u;
}

Mat scattering_state_gram(const MediumProfile& m, int n, int refine) {
    if (!m.support_bound) throw DomainError("scattering needs a potential support bound");
    if (n < 8) throw GridError("basis needs n >= 8");
    const double a = *m.support_bound;
    const double h = 2.0 * a / n;
    const int N = n - 1;
    WaveOptions wo;
    wo.ht = h / refine;
    const int K = static_cast<int>(std::ceil((a + 0.1) / wo.ht));
    wo.t0 = -K * wo.ht;
    wo.support_lo = 0.0;
    wo.support_hi = (n + 2) * h;
    wo.x_interest = (n + 2) * h;
    wo.slice_levels = {K};
    Mat U;
    double hx = 0.0;
    for (int i = 2; i <= n; ++i) {
        const WaveField w = solve_wave(
            System::Scattering, m, [&](double s) { return cubic_bspline(s / h - i); }, 0.0, wo);
        if (U.size() == 0) {
            U.resize(w.nx, N);
            hx = w.hx;
        }
        U.col(i - 2) = w.slice(K);
    }
    Vec wt = Vec::Constant(U.rows(), hx);
    wt[0] *= 0.5;
    wt[U.rows() - 1] *= 0.5;
    return U.transpose() * wt.asDiagonal() * U;
}

}  // namespace bcm
