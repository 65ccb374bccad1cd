#pragma once

#include <cstdint>

#include "engel/curves.hpp"
#include "engel/fronts.hpp"

namespace engel::rigidity {

/// Deformation of the central kernel orbit of a mapping torus, reconstructed
/// from its front: eta(theta) = (x(theta), y(theta), z(theta), theta).
struct TorusDeformation {
    fronts::Front front;
    SampledCurve curve;
    double closure_defect = 0.0;   // |phi(eta(1)) - eta(0)| in (x, y, z)
    double angle_residual = 0.0;   // max | front angle - f | mod pi, away from cusps
    double y_residual = 0.0;       // max | y' - z x' | at grid resolution
};

/// Recомputes the deformation report for a curve against its model.
TorusDeformation torus_reconstruct(const fronts::Front& front, const EngelModel& torus, double y0,
                                   double angle_tol = 1e-6);

struct Lemma2Start {
    std::vector<double> t;
    double max_abs_t = 0.0;
    double defect = 0.0;        // |sum t_i^2 dx - (z1 - z0)|
    bool converged = false;
    int iterations = 0;
};

struct Lemma2Report {
    std::vector<Lemma2Start> starts;
    int best = -1;              // lexicographic by (defect, start index)
    std::vector<double> x_grid;
};

/// Searches for a deformation profile t(x) with integral of t^2 dx equal to
/// z1 - z0 (the Lorentzian-model constraint for deformations relative to the
/// ends). Equal endpoints force t identically zero; z1 < z0 is infeasible.
Lemma2Report lemma2_search(double z0, double z1, double a, double b, int n_starts,
                           std::uint64_t seed, std::size_t grid = 512, int iter_cap = 10000);

/// Teardrop deformation over the half-scaling mapping torus enclosing signed
/// area A, with y(0) = A and y(1) = 2A (the half-scaling closure algebra). A = 0
/// returns the undeformed kernel orbit.
TorusDeformation build_example4(double area, std::size_t samples = 32768);

struct Example5Result {
    TorusDeformation deformation;
    double closed_form = 0.0;      // sin^2(a) z1 x1 - cos(a) sin(a) (z1^2 - x1^2)/2
    double polyline_integral = 0.0;  // integral of z dx over the two-segment polyline
    Vec2 p0, p1;                   // front endpoints
};

/// Deformation over the mapping torus of the lift of the rotation by -alpha,
/// ending on the first-quadrant ray at angle alpha/2 from the vertical axis.
Example5Result build_example5(double alpha, double r, std::size_t samples = 32768);

/// Deformation over the torus of a linear contactomorphism with
/// conformal factor c != 1: a closed front over the origin enclosing positive
/// area S with y(1) = S / (1 - c).
TorusDeformation prop7_deform(const Contactomorphism3& phi, std::size_t samples = 32768);

}  // namespace engel::rigidity
