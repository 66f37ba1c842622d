// Test-only reference implementations, kept independent of the library paths
// they check.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "csae/matrix.hpp"
#include "csae/rng.hpp"

namespace oracles {

using csae::Matrix;

inline Matrix random_matrix(std::size_t rows, std::size_t cols, csae::Rng& rng, double lo = 0.0,
                            double hi = 1.0) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = lo + (hi - lo) * rng.uniform();
    return m;
}

inline double riesz_energy_ref(const Matrix& u) {
    double e = 0.0;
    for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = i + 1; j < u.rows(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < u.cols(); ++k) {
                const double d = u(i, k) - u(j, k);
                s += d * d;
            }
            e += 1.0 / std::sqrt(s);
        }
    return e;
}

// Independent Riesz s=1 minimizer on the unit sphere: plain projected gradient
// descent with backtracking and random restarts. No velocities, no distance
// floor -- a different algorithm from the library solver on purpose.
inline Matrix brute_force_min_energy(std::size_t n, std::size_t d, std::size_t restarts,
                                     std::uint64_t seed) {
    csae::Rng rng(seed);
    Matrix best;
    double best_e = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
        Matrix u(n, d);
        for (std::size_t i = 0; i < u.size(); ++i) u.data()[i] = rng.gaussian();
        for (std::size_t i = 0; i < n; ++i) {
            auto row = u.row(i);
            const double nm = csae::norm(row);
            for (double& v : row) v /= nm;
        }
        double eta = 0.05;
        double e = riesz_energy_ref(u);
        for (std::size_t it = 0; it < 4000; ++it) {
            Matrix grad(n, d);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    double s = 0.0;
                    for (std::size_t k = 0; k < d; ++k) {
                        const double diff = u(i, k) - u(j, k);
                        s += diff * diff;
                    }
                    const double inv3 = 1.0 / (s * std::sqrt(s));
                    for (std::size_t k = 0; k < d; ++k)
                        grad(i, k) -= (u(i, k) - u(j, k)) * inv3;
                }
            Matrix trial = u;
            for (std::size_t i = 0; i < trial.size(); ++i)
                trial.data()[i] -= eta * grad.data()[i];
            for (std::size_t i = 0; i < n; ++i) {
                auto row = trial.row(i);
                const double nm = csae::norm(row);
                for (double& v : row) v /= nm;
            }
            const double te = riesz_energy_ref(trial);
            if (te < e) {
                u = std::move(trial);
                e = te;
                eta *= 1.1;
            } else {
                eta *= 0.5;
                if (eta < 1e-12) break;
            }
        }
        if (e < best_e) {
            best_e = e;
            best = std::move(u);
        }
    }
    return best;
}

// Central finite differences of a scalar function over a parameter vector.
inline std::vector<double> fd_gradient(const std::function<double()>& f,
                                       std::vector<double*> params, double h = 1e-5) {
    std::vector<double> g(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double orig = *params[i];
        *params[i] = orig + h;
        const double fp = f();
        *params[i] = orig - h;
        const double fm = f();
        *params[i] = orig;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// Relative agreement check; entries where both are below `floor` are skipped.
inline double max_rel_error(const std::vector<double>& analytic, const std::vector<double>& fd,
                            double floor = 1e-7) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double scale = std::max(std::abs(analytic[i]), std::abs(fd[i]));
        if (scale < floor) continue;
        worst = std::max(worst, std::abs(analytic[i] - fd[i]) / scale);
    }
    return worst;
}

}  // namespace oracles
