#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "engel/core.hpp"
#include "engel/geiges.hpp"

namespace engel::fronts {

/// Planar curve with marked cusps; the (x, z) image of a Legendrian under
/// front projection. slope_bound is the epsilon-band constraint on t = dz/dx;
/// fronts whose tangent rotates through the vertical carry +infinity there.
struct Front {
    std::vector<double> params;
    std::vector<double> x, z;
    std::vector<double> cusp_marks;  // sorted parameter values
    double slope_bound = std::numeric_limits<double>::infinity();

    std::size_t size() const { return params.size(); }
};

bool front_is_closed(const Front& f, double tol = 1e-10);

/// Integral of z dx over the closed front (composite trapezoid).
/// Counterclockwise traversal of an embedded front gives minus the enclosed
/// geometric area.
double signed_area(const Front& f);

struct CuspDetectOptions {
    double cusp_floor_rel = 2e-2;   // speed threshold relative to mean speed
    double slope_bound = std::numeric_limits<double>::infinity();
    bool check_alternation = false; // odd count + alternating departures
};

/// Locates cusps (isolated speed minima below the floor whose tangent line
/// stays regular across the minimum) on raw front samples.
Front detect_cusps(const std::vector<double>& params, const std::vector<double>& x,
                   const std::vector<double>& z, const CuspDetectOptions& opts = {});

/// Per-window loop capacity |dA| achievable by insert_r1_loop at s0 with the
/// given parameter half-width; scales like c0 * slope_headroom * footprint^2.
double r1_area_capacity(const Front& f, double s0, double half_width);

/// Returns a front agreeing with f outside [s0-hw, s0+hw], with one
/// Reidemeister-I loop inserted whose discrete signed-area contribution is
/// exactly dA. Cusp count increases by 2; slope stays within f.slope_bound.
/// half_width <= 0 selects the widest admissible window automatically.
Front insert_r1_loop(const Front& f, double s0, double dA, double half_width = 0.0);

struct Window {
    double lo = 0.0, hi = 0.0;
};

struct AreaAdjustOptions {
    int n_max = 64;            // cap on the loop count
    double carrier_frac = 0.15;  // opposite-loop carrier amplitude as a fraction of A_max
    double fill_frac = 0.85;     // usable fraction of per-slot capacity
};

struct AreaAdjustPlan {
    std::vector<double> slot_centers;
    std::vector<double> slot_half_widths;
    int n_loops = 0;            // even
};

/// Chooses an even loop count and alternating per-loop areas inside the given
/// cusp-free windows so the result's signed area equals target exactly at
/// quadrature resolution. plan_out (optional) receives the slot layout so a
/// family can reuse it slice by slice.
Front adjust_area_to(const Front& f, double target, const std::vector<Window>& windows,
                     const AreaAdjustOptions& opts = {}, AreaAdjustPlan* plan_out = nullptr);

// --- Legendrian-level machinery (shared with the homotopy engine) ----------

struct LoopSpec {
    double s0 = 0.0;
    double half_width = 0.0;
    double target_area = 0.0;
};

/// Inserts loops into Legendrian data (exact slopes known), keeping the grid.
/// Windows must be pairwise disjoint and cusp-free. new_cusps (optional)
/// receives the parameters of the created cusp pairs.
LegendrianCurve insert_r1_loops(const LegendrianCurve& l, const std::vector<LoopSpec>& loops,
                                double slope_bound, std::vector<double>* new_cusps = nullptr);

double r1_capacity(const LegendrianCurve& l, double s0, double half_width, double slope_bound);

// --- Area-positivity certificate --------------------------------------------

struct ReductionStep {
    double removed_area = 0.0;
    int cusps_before = 0;
    int cusps_after = 0;
    std::vector<Vec2> removed_loop;  // the spliced-out configuration, closed at the crossing
};

struct AreaCertificate {
    double total_area = 0.0;
    std::vector<ReductionStep> reduction_trace;
};

/// Executes the cusp-count induction on an admissible front (closed, slope
/// direction rotating monotonically through pi, odd alternating cusps,
/// piecewise convex): normalizes cusp heights area-preservingly, removes one
/// Reidemeister-I configuration per step down to 3 cusps, and certifies that
/// the total signed area is positive.
AreaCertificate positive_area_certificate(const Front& f);

/// Seeded generator of admissible fronts with the given odd cusp count
/// (cusp parameters snapped to the grid, closure solved exactly on the grid).
Front generate_admissible_front(int n_cusps, std::uint64_t seed, std::size_t samples = 4096);

}  // namespace engel::fronts
