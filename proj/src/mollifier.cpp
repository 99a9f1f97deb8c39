#include "bcm/mollifier.hpp"

#include "bcm/errors.hpp"

namespace bcm {

namespace {

using Poly = std::vector<double>;

Poly mul(const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

double eval(const Poly& p, double u) {
    double acc = 0.0;
    for (size_t k = p.size(); k-- > 0;) acc = acc * u + p[k];
    return acc;
}

/// Antiderivative vanishing at u = -1.
Poly integrate(const Poly& p) {
    Poly q(p.size() + 1, 0.0);
    for (size_t k = 0; k < p.size(); ++k) q[k + 1] = p[k] / static_cast<double>(k + 1);
    q[0] = -eval(q, -1.0);
    return q;
}

double moment(const Poly& phi, int k) {
    Poly m = phi;
    m.insert(m.begin(), static_cast<size_t>(k), 0.0);
    const Poly I = integrate(m);
    return eval(I, 1.0);
}

}  // namespace

Mollifier::Mollifier(double width, double start) : width_(width), start_(start) {
    if (!(width > 0.0)) throw DomainError("mollifier width must be positive");
    constexpr int kPower = 8;
    Poly phi{1.0};
    for (int i = 0; i < kPower; ++i) phi = mul(phi, Poly{1.0, 0.0, -1.0});
    const double m0 = moment(phi, 0), m2 = moment(phi, 2), m4 = moment(phi, 4);
    // (A + B u^2) phi: unit mass, zero second moment
    const double ratio = -m2 / m4;
    const double A = 1.0 / (m0 + ratio * m2);
    const double B = ratio * A;
    p_ = mul(phi, Poly{A, 0.0, B});
    i1_ = integrate(p_);
    i2_ = integrate(i1_);
}

double Mollifier::density(double t) const {
    const double s = 0.5 * width_;
    const double u = (t - centre()) / s;
    if (u <= -1.0 || u >= 1.0) return 0.0;
    return eval(p_, u) / s;
}

double Mollifier::step(double t) const {
    const double u = (t - centre()) / (0.5 * width_);
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return eval(i1_, u);
}

double Mollifier::ramp(double t) const {
    const double s = 0.5 * width_;
    const double u = (t - centre()) / s;
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return t - centre();
    return s * eval(i2_, u);
}

}  // namespace bcm
