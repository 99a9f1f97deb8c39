#pragma once

#include <string>
#include <vector>

#include "bcm/operators.hpp"

namespace bcm {

/// Target of a special boundary control problem: the static solution with
/// y(0) = y0, y'(0) = y0p (boundary systems) or the Jost-type solution
/// behaving like e^{-k x} beyond the potential (scattering).
struct FamilyTarget {
    double y0 = 0.0;
    double y0p = 1.0;
    double k = 1.0;

    static FamilyTarget gl() { return {0.0, 1.0, 0.0}; }
    static FamilyTarget krein() { return {-1.0, 0.0, 0.0}; }
    static FamilyTarget pariiskii() { return {0.0, -1.0, 0.0}; }
    static FamilyTarget scattering(double k) { return {0.0, 0.0, k}; }
};

/// Solutions f^{xi_j} of C^{xi_j} f = rhs for every node xi_j of the kernel grid.
///
/// Dirichlet/Neumann: solution j lives on t_0..t_j.  Scattering: on
/// tau_j..tau_{last_j}; beyond last_j the control equals e^{-k tau} exactly.
struct ControlFamily {
    System system = System::Dirichlet;
    FamilyTarget target;
    double step = 0.0;
    std::vector<Vec> solutions;
    std::vector<int> first, last;
    Vec readouts;   ///< f^xi(0) (boundary systems) or f^xi(xi) (scattering)
    Vec residuals;  ///< relative sup residual of each solve

    int count() const { return static_cast<int>(solutions.size()); }
    double xi(int j) const { return j * step; }
    /// f^{xi_j} at node i of the kernel grid.
    double value(int j, int i) const;
};

/// Solve the special BCP family for xi_0..xi_{j_max} (default: the whole
/// horizon [0, T], or [0, 2a] for scattering).  Throws InadmissibleData when
/// the largest connecting operator fails the admissibility check.
ControlFamily solve_special_family(const ResponseKernel& k, const FamilyTarget& target, int j_max = -1,
                                   const FredholmOptions& opt = {});

/// Dirichlet control whose final state is the eigenfunction of
/// -y'' + q y = lambda y with y(0) = 0, y'(0) = 1:  C^T f = sin(sqrt(lambda)(T - t))/sqrt(lambda).
SampledFunction solve_eigen_target(const ResponseKernel& k, double lambda, double T,
                                   const FredholmOptions& opt = {});

enum class ClassicalKind { GL, Krein, Pariiskii, Marchenko };

std::string to_string(ClassicalKind kind);
ClassicalKind classical_from_string(const std::string& s);

/// Kernel of a classical integral equation, stored row by row in xi.
///  GL: L(xi, t), t in [0, xi].   Krein: g(xi, t), Pariiskii: G(xi, t), t in [-xi, xi].
///  Marchenko: g(xi, tau), tau in [xi, max(xi, 2a - xi)].
struct ClassicalKernel {
    ClassicalKind kind = ClassicalKind::GL;
    double step = 0.0;
    std::vector<int> rows;        ///< xi index of each row
    std::vector<int> row_first;   ///< t index of the first entry of each row
    std::vector<Vec> values;

    int row_of(int j) const;      ///< position of xi index j in rows, -1 if absent
    /// Value at xi index j and t index i.
    double at(int j, int i) const;
    double max_abs() const;
};

/// Classical kernels derived from a control family by differentiation in xi.
/// The xi = 0 row is omitted when its normaliser vanishes by the target's
/// initial data; any other vanishing normaliser raises DegenerateKernel.
ClassicalKernel classical_kernel_from_family(const ControlFamily& fam, ClassicalKind kind);

/// Direct Nyström solve of one classical equation at xi (a grid node).
ClassicalKernel solve_classical(ClassicalKind kind, const ResponseKernel& k, double xi,
                                const FredholmOptions& opt = {});

/// delta(t - (T - xi)) * amplitude + regular part, supported on [T - xi, T].
struct SingularControl {
    double xi = 0.0;
    double T = 0.0;
    double amplitude = 1.0;
    int delay_index = 0;
    SampledFunction regular;  ///< on [0, T]; zero before T - xi
};

SingularControl singular_control(const ControlFamily& gl_family, const ClassicalKernel& L, double xi);

/// Value of the visualising functional <delta^{T,xi}, f> = u^f(xi, T), computed
/// from boundary data only through the connecting operator on [0, T].
double visualize_wave(const ConnectingOperator& C, const SingularControl& s, const SampledFunction& f);

/// Control producing the state a(x) at time T:  f(t) = a(s) + \int_s^T L(xi, s) a(xi) dxi,  s = T - t.
SampledFunction apply_inverse_control_operator(const ClassicalKernel& L, const SampledFunction& a);

/// Transformation operator applied to sin(sqrt(lambda) x)/sqrt(lambda) at x in [0, xi_max].
double transformation_apply(const ClassicalKernel& L, double lambda, double x);

}  // namespace bcm
