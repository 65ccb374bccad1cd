#pragma once

#include <cstdint>

#include "engel/curves.hpp"
#include "engel/fronts.hpp"
#include "engel/geiges.hpp"

namespace engel::homotopy {

/// Immersed closed plane curve (structure-of-arrays, duplicated end sample).
struct PlaneLoop {
    std::vector<double> params;
    std::vector<double> u, v;
};

int plane_winding(const PlaneLoop& l);

/// Whitney-Graustein interpolation: angle functions interpolated linearly
/// after unwrapping, speeds log-linearly, per-slice closure restored by
/// subtracting the mean displacement. The endpoint slices reproduce the
/// inputs bit-exactly. Throws WindingMismatch when the windings differ.
std::vector<PlaneLoop> wg_homotopy(const PlaneLoop& l0, const PlaneLoop& l1,
                                   const std::vector<double>& time_grid);

/// Minimum finite-difference speed over a family, relative to the mean.
double family_min_speed(const std::vector<PlaneLoop>& fam);

struct SliceReport {
    double residual = 0.0;        // horizontality residual in the Darboux model
    double closure = 0.0;         // endpoint gap including y
    double front_area = 0.0;      // discrete integral of z dx before lifting
    int rotation = 0;
    TangencyClass tangency = TangencyClass::Transverse;
};

struct HomotopyFamily {
    std::vector<double> time_grid;
    std::vector<SampledCurve> slices;
    std::vector<SliceReport> report;
    int r1_loops_per_slice = 0;
    std::vector<double> loop_amplitudes;  // per slice: max |carrier + net| used
};

struct ConnectOptions {
    std::size_t slices = 64;
    double slope_bound = 0.0;   // 0 selects 1.3 * max input |t| + 0.1
    double input_residual_tol = 1e-6;
    int max_subdivisions = 3;   // time-interval bisection when no common window exists
};

/// Loop-connecting pipeline for closed horizontal Darboux loops of equal
/// rotation number: project, interpolate the Legendrians through the
/// (x, t)-plane, re-zero every front area with shared Reidemeister-I slots,
/// lift with matched y-offsets.
HomotopyFamily connect_loops(const SampledCurve& c0, const SampledCurve& c1,
                             const ConnectOptions& opts = {});

struct FamilyCheck {
    bool pass = false;
    int first_bad_slice = -1;
    double worst_residual = 0.0;
    double worst_closure = 0.0;
    bool rotation_constant = false;
    std::vector<SliceReport> report;
};

FamilyCheck verify_family(const HomotopyFamily& h, const EngelModel& m,
                          double tol_residual = 1e-6, double tol_closure = 1e-9);

}  // namespace engel::homotopy
