#pragma once

#include <cstdint>
#include <cstddef>

#include "csae/matrix.hpp"

namespace csae::pedcc {

// Charge-dynamics solver settings. n points repel on the unit sphere in R^d
// until they spread out evenly; the recommended regime is n <= d+1, where the
// equilibrium is the regular simplex. For crowded configurations (n >> d+1)
// reduce step_coeff and raise iterations.
struct PedccConfig {
    std::size_t n_classes = 0;       // n, >= 2
    std::size_t dim = 0;             // d, >= 2
    std::size_t iterations = 200;    // q
    double step_coeff = 0.01;        // lambda
    double distance_floor = 0.01;    // epsilon
    double damping = 0.85;           // velocity decay per step, in (0, 1]
    std::uint64_t seed = 0;
    bool early_stop = false;         // stop once max tangent-force norm < force_tol
    double force_tol = 1e-9;

    void validate() const;
};

struct SimState {
    Matrix positions;     // n x d, unit rows
    Matrix velocities;    // n x d
    std::size_t iteration = 0;
};

// Frozen scaled centroids: mu = alpha * U with alpha = sqrt(d).
struct CentroidSet {
    Matrix mu;
    double alpha = 0.0;
    std::uint64_t seed = 0;

    std::size_t classes() const { return mu.rows(); }
    std::size_t dim() const { return mu.cols(); }
};

// Rows sampled standard-normal and normalized; velocities zero.
SimState init_state(const PedccConfig& config);

// Row i = sum over j != i of (1 / max(|l|, floor)^2) * (l / |l|), l = u_i - u_j.
// Exactly coincident rows contribute nothing (no direction exists).
Matrix compute_forces(const Matrix& positions, double distance_floor);

// Remove the radial component: row i = f_i - dot(u_i, f_i) * u_i.
Matrix tangent_project(const Matrix& forces, const Matrix& positions);

// One iteration: forces at the current positions, position update by the
// current velocity, re-normalization, damped velocity update, velocity
// re-projected to the tangent plane at the new position.
void step(SimState& state, const PedccConfig& config);

// Runs init_state + q steps and scales by alpha = sqrt(d).
CentroidSet generate(const PedccConfig& config);

// Symmetric, zero diagonal.
Matrix pairwise_distance_matrix(const Matrix& mu);

// Sum over pairs of 1/|u_i - u_j| (Riesz s=1). Infinite if rows coincide.
double riesz_energy(const Matrix& unit_rows);

// Largest row norm of the tangent force field; the early-stop statistic.
double max_tangent_force_norm(const Matrix& positions, double distance_floor);

}  // namespace csae::pedcc
