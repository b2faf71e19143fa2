#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "rbm/model.hpp"

namespace rbm {

struct SimConfig {
    double dt = 1e-3;
    double horizon_radius = 60.0;
    double max_time = 400.0;
    long n_paths = 100000;
    std::uint64_t seed = 42;
    double bin_width = 0.1;           // occupation cells for g
    double boundary_bin_width = 2e-3; // local-time cells for h1, h2
    int n_replicates = 64;
    int n_threads = 0;                // 0: hardware concurrency
    // Project onto walls shifted into the quadrant by 0.5826 sigma sqrt(dt),
    // cancelling the leading local-time undershoot of the discrete scheme.
    bool boundary_shift_correction = true;

    // Probes registered before the run so replicate spreads are available.
    std::vector<std::pair<cd, cd>> phi_probes;  // (x, y), Re < 0 each
    std::vector<Vec2> green_probes;             // interior points for g
};

// Aggregated run artifacts: fine histograms plus per-replicate copies of the
// one-dimensional data and of registered probe statistics.  All estimators
// derive from this object; a fixed seed reproduces it bit-exactly.
struct SimArtifact {
    QuadrantParams params;
    SimConfig cfg;

    int nx = 0, ny = 0;          // occupation grid
    std::vector<double> occ;     // sum of dt per cell (row-major x*ny + y)
    int nb = 0;                  // boundary bins
    std::vector<double> h1, h2;  // sum of dL^i per bin

    int R = 0;
    std::vector<double> h1_rep, h2_rep;        // R x nb
    std::vector<cd> phi_rep;                   // R x n_phi_probes
    std::vector<double> green_rep;             // R x n_green_probes (dt mass in cell)
    std::vector<double> l1_rep, l2_rep;        // R totals
    std::vector<long> paths_rep;               // paths per replicate
    std::vector<long> truncated_rep;           // stopped by max_time

    long n_paths = 0;
    double truncated_fraction = 0.0;

    long cell_index(double a, double b) const;
    double replicate_weight(int k) const { return static_cast<double>(paths_rep[k]); }
};

struct OccupationEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    double truncated_fraction = 0.0;  // bias note
};

struct ComplexEstimate {
    cd value{0.0, 0.0};
    double std_error = 0.0;
    long n_paths = 0;
    double truncated_fraction = 0.0;
};

// Constrained Euler scheme: free Gaussian step, then minimal nonnegative
// pushback along the reflection columns when the step exits the quadrant.
SimArtifact simulate(const QuadrantParams& params, const SimConfig& cfg);

// Single-path trace, for inspection and tests.
struct PathPoint {
    double t;
    Vec2 z;
    double dl1, dl2;
};
std::vector<PathPoint> simulate_path(const QuadrantParams& params, const SimConfig& cfg,
                                     std::uint64_t path_index);

// Occupation density estimate at an interior point (registered or not; the
// standard error requires registration in cfg.green_probes).
OccupationEstimate estimate_green(const SimArtifact& art, Vec2 point);

// Boundary density h_axis at coordinate u (axis 1: vertical, bins b;
// axis 2: horizontal, bins a).
OccupationEstimate estimate_boundary(const SimArtifact& art, double u, int axis);

// E[L^i_inf] with standard error.
OccupationEstimate local_time_total(const SimArtifact& art, int axis);

// Laplace transforms.  phi requires a registered probe; phi1/phi2 evaluate
// lazily from the boundary histograms at any argument with Re < 0.
ComplexEstimate estimate_phi(const SimArtifact& art, cd x, cd y);
ComplexEstimate estimate_phi1(const SimArtifact& art, cd y);
ComplexEstimate estimate_phi2(const SimArtifact& art, cd x);

// Replicate-resolved boundary transforms (axis 1 for phi1, 2 for phi2).
cd boundary_transform_rep(const SimArtifact& art, int axis, int rep, cd arg);
cd boundary_transform_mean(const SimArtifact& art, int axis, cd arg);

}  // namespace rbm
