#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "engel/models.hpp"

namespace engel {

/// Discretized parametrized curve in model coordinates. For closed curves the
/// last sample duplicates the first (params 0 and 1 both present).
struct SampledCurve {
    std::vector<double> params;        // strictly increasing grid in [0, 1]
    std::vector<Point4> points;
    bool closed = false;
    std::vector<Vec4> framing;         // optional formal section F, one per sample

    std::size_t size() const { return params.size(); }
    bool has_framing() const { return !framing.empty(); }
};

inline constexpr double kSpeedFloor = 1e-6;
inline constexpr double kTolAngle = 1e-3;

/// Finite-difference tangents (periodic for closed curves).
std::vector<Vec4> curve_tangents(const SampledCurve& c);

/// Checks the SampledCurve invariants: grid monotone, points finite,
/// closure within 1e-10, immersion proxy, and (when framing and a model are
/// given) that F is a non-vanishing section of D.
void validate_curve(const SampledCurve& c, const EngelModel* model = nullptr);

/// max over samples of (|alpha(gamma')| + |beta(gamma')|) / |gamma'|.
double horizontality_residual(const SampledCurve& c, const EngelModel& m);

enum class TangencyClass { EverywhereTangent, NotEverywhereTangent, Generic, Transverse };

std::string to_string(TangencyClass c);

struct TangencyLocus {
    std::vector<std::pair<double, double>> intervals;  // disjoint, sorted parameter ranges
    TangencyClass cls = TangencyClass::Transverse;
};

TangencyLocus tangency_locus(const SampledCurve& c, const EngelModel& m,
                             double tol_angle = kTolAngle);

/// Winding number of the tangent (or F when present) against the ordered
/// frame (kernel, complement). Convention: the winding angle is
/// atan2(kernel coefficient, complement coefficient), so a Darboux loop whose
/// (x', t') trace is the counterclockwise unit circle has rotation +1.
int rotation_number(const SampledCurve& c, const EngelModel& m);

/// Total projective turning (radians) of the Legendrian direction along a
/// kernel-tangent segment; additive under concatenation.
double developing_total_angle(const SampledCurve& seg, const EngelModel& m);

/// Integer part of the total turning counted in projective (pi) turns.
int developing_turns(const SampledCurve& seg, const EngelModel& m);

struct FamilyOfCurves {
    std::vector<double> k_grid;
    std::vector<SampledCurve> curves;  // one per k, shared s-grid and closure flag
};

struct GenericityOptions {
    std::uint64_t seed = 1;
    double tol_angle = kTolAngle;   // tangency threshold entering the indicator
    double tol_g = 3e-7;            // |g| below this counts as vanishing
    double tol_dg = 3e-5;           // |discrete d_s g| below this counts as vanishing
    int max_rounds = 200;
};

/// True when the discrete tangency indicator g(k,s) = angle(gamma', W) - tol
/// has a transverse zero set on the grid: no cell where g and its discrete
/// s-derivative both vanish below tolerance without a sign change.
bool tangency_indicator_transverse(const FamilyOfCurves& fam, const EngelModel& m,
                                   const GenericityOptions& opts = {});

struct GenericityReport {
    FamilyOfCurves family;
    double c0_distance = 0.0;   // max coordinate deviation from the input
    double c1_distance = 0.0;   // max finite-difference tangent deviation
    int rounds = 0;
};

/// Perturbs the family (t-coordinate bumps, horizontality restored by
/// re-integration) until the indicator zero set is discretely transverse.
GenericityReport make_generic(const FamilyOfCurves& fam, const EngelModel& m, double delta,
                              const GenericityOptions& opts = {});

/// Sampled map from a 2- or 3-dimensional parameter grid into the model space.
struct GridMap {
    std::vector<std::vector<double>> axis_params;  // one strictly increasing array per axis
    std::vector<Point4> points;                    // row-major over the axes
};

/// Minimum over interior grid points of the smallest singular value of
/// (projection to TM/D) o df. Strictly positive iff transverse at grid
/// resolution. Throws SubcriticalDomain for 1-dimensional domains.
double transverse_residual(const GridMap& surface, const EngelModel& m);

}  // namespace engel
