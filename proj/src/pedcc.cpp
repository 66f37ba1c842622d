#include "csae/pedcc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "csae/rng.hpp"

namespace csae::pedcc {

void PedccConfig::validate() const {
    if (n_classes < 2) throw std::invalid_argument("pedcc: n_classes must be >= 2");
    if (dim < 2) throw std::invalid_argument("pedcc: dim must be >= 2");
    if (iterations < 1) throw std::invalid_argument("pedcc: iterations must be >= 1");
    if (!(step_coeff > 0.0)) throw std::invalid_argument("pedcc: step_coeff must be > 0");
    if (!(distance_floor > 0.0)) throw std::invalid_argument("pedcc: distance_floor must be > 0");
    if (!(damping > 0.0) || damping > 1.0) throw std::invalid_argument("pedcc: damping must be in (0, 1]");
}

namespace {

constexpr double kNormFloor = 1e-12;

void normalize_rows(Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        const double n = norm(r);
        if (n < kNormFloor)
            throw std::runtime_error("pedcc: degenerate configuration, row norm underflow at row " +
                                     std::to_string(i));
        for (double& v : r) v /= n;
    }
}

}  // namespace

SimState init_state(const PedccConfig& config) {
    config.validate();
    Rng rng(config.seed);
    SimState state;
    state.positions = Matrix(config.n_classes, config.dim);
    state.velocities = Matrix(config.n_classes, config.dim);
    for (std::size_t i = 0; i < config.n_classes; ++i) {
        auto row = state.positions.row(i);
        double n = 0.0;
        do {
            for (double& v : row) v = rng.gaussian();
            n = norm(row);
        } while (n < kNormFloor);
        for (double& v : row) v /= n;
    }
    return state;
}

Matrix compute_forces(const Matrix& positions, double distance_floor) {
    const std::size_t n = positions.rows();
    const std::size_t d = positions.cols();
    Matrix forces(n, d);
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < n; ++i) {
        auto fi = forces.row(i);
        const auto ui = positions.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto uj = positions.row(j);
            double dist2 = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                diff[k] = ui[k] - uj[k];
                dist2 += diff[k] * diff[k];
            }
            const double dist = std::sqrt(dist2);
            if (dist == 0.0) continue;  // coincident: no direction
            const double clamped = std::max(dist, distance_floor);
            const double scale = 1.0 / (clamped * clamped * dist);
            for (std::size_t k = 0; k < d; ++k) fi[k] += scale * diff[k];
        }
    }
    return forces;
}

Matrix tangent_project(const Matrix& forces, const Matrix& positions) {
    forces.require_same_shape(positions);
    Matrix out(forces.rows(), forces.cols());
    for (std::size_t i = 0; i < forces.rows(); ++i) {
        const auto f = forces.row(i);
        const auto u = positions.row(i);
        const double radial = dot(u, f);
        auto o = out.row(i);
        for (std::size_t k = 0; k < f.size(); ++k) o[k] = f[k] - radial * u[k];
    }
    return out;
}

void step(SimState& state, const PedccConfig& config) {
    Matrix tangent = tangent_project(compute_forces(state.positions, config.distance_floor),
                                     state.positions);
    state.positions += state.velocities;
    normalize_rows(state.positions);

    Matrix& v = state.velocities;
    for (std::size_t i = 0; i < v.size(); ++i)
        v.data()[i] = config.damping * (v.data()[i] + config.step_coeff * tangent.data()[i]);
    // keep the velocity in the tangent plane of the new position
    for (std::size_t i = 0; i < v.rows(); ++i) {
        const auto u = state.positions.row(i);
        auto vi = v.row(i);
        const double radial = dot(u, vi);
        for (std::size_t k = 0; k < vi.size(); ++k) vi[k] -= radial * u[k];
    }
    ++state.iteration;
}

CentroidSet generate(const PedccConfig& config) {
    SimState state = init_state(config);
    for (std::size_t k = 0; k < config.iterations; ++k) {
        step(state, config);
        if (config.early_stop &&
            max_tangent_force_norm(state.positions, config.distance_floor) < config.force_tol)
            break;
    }
    CentroidSet set;
    set.alpha = std::sqrt(static_cast<double>(config.dim));
    set.seed = config.seed;
    set.mu = state.positions;
    set.mu *= set.alpha;
    return set;
}

Matrix pairwise_distance_matrix(const Matrix& mu) {
    const std::size_t n = mu.rows();
    Matrix dist(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < mu.cols(); ++k) {
                const double diff = mu(i, k) - mu(j, k);
                s += diff * diff;
            }
            dist(i, j) = dist(j, i) = std::sqrt(s);
        }
    return dist;
}

double riesz_energy(const Matrix& unit_rows) {
    double e = 0.0;
    for (std::size_t i = 0; i < unit_rows.rows(); ++i)
        for (std::size_t j = i + 1; j < unit_rows.rows(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < unit_rows.cols(); ++k) {
                const double diff = unit_rows(i, k) - unit_rows(j, k);
                s += diff * diff;
            }
            if (s == 0.0) return std::numeric_limits<double>::infinity();
            e += 1.0 / std::sqrt(s);
        }
    return e;
}

double max_tangent_force_norm(const Matrix& positions, double distance_floor) {
    Matrix t = tangent_project(compute_forces(positions, distance_floor), positions);
    double worst = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) worst = std::max(worst, norm(t.row(i)));
    return worst;
}

}  // namespace csae::pedcc
