#pragma once

#include <vector>

namespace bcm {

/// Smooth compactly supported probe density b(t) on [start, start + width].
///
/// b is a polynomial bump (1-u^2)^8 (A + B u^2) in u = (t - centre)/(width/2),
/// normalised to unit mass with vanishing first and second central moments.
/// Convolving a smooth function with b therefore reproduces it up to
/// O(width^4), which is what the kernel-extraction probes rely on.
class Mollifier {
public:
    explicit Mollifier(double width, double start = 0.0);

    double width() const { return width_; }
    double start() const { return start_; }
    double centre() const { return start_ + 0.5 * width_; }

    /// b(t)
    double density(double t) const;
    /// (J b)(t) = \int_{-inf}^t b: smooth unit step.
    double step(double t) const;
    /// (J^2 b)(t): smooth ramp, equal to t - centre() after the support.
    double ramp(double t) const;

private:
    double width_, start_;
    std::vector<double> p_, i1_, i2_;  // polynomials in u
};

}  // namespace bcm
