#pragma once

#include <cstdint>
#include <cstddef>
#include <span>
#include <vector>

#include "csae/matrix.hpp"
#include "csae/pedcc.hpp"
#include "csae/rng.hpp"

namespace csae::latent {

// Training-time latent noise: z* = z + alpha * beta * n0, n0 ~ N(0, I).
// Applied only on the decoder path during training, never at evaluation.
struct NoiseConfig {
    double beta = 0.0;         // in [0, 1]
    double alpha = 1.0;        // sqrt(d), from the centroid set
    std::uint64_t seed = 0;

    void validate() const;
};

// beta = 0 is the exact identity (no draws consumed).
std::vector<double> add_noise(std::span<const double> z, const NoiseConfig& cfg, Rng& rng);

// In-place batch variant used by the trainer: fills offset with fresh noise
// rows (or zeros when beta = 0).
void fill_noise(Matrix& offset, const NoiseConfig& cfg, Rng& rng);

// argmin over centroid rows of the Euclidean distance; ties break to the
// lowest class index.
std::size_t nearest_class_mean(std::span<const double> z, const pedcc::CentroidSet& centroids);
std::vector<std::size_t> classify(const Matrix& latents, const pedcc::CentroidSet& centroids);

// Per-class latent Gaussian fit: sample mean, sample covariance (divisor
// max(count-1, 1)) and the Cholesky factor of the regularized covariance
// cov + delta * max(1, trace(cov)/d) * I.
struct ClassStats {
    std::size_t n_classes = 0;
    std::size_t dim = 0;
    double delta = 1e-6;
    std::vector<std::vector<double>> means;   // n_classes x d
    std::vector<Matrix> covariances;          // raw sample covariances
    std::vector<Matrix> factors;              // lower-triangular factors
};

ClassStats fit_class_stats(const Matrix& latents, const std::vector<std::size_t>& labels,
                           std::size_t n_classes, double delta = 1e-6);

// Rows = mean_k + factor_k * g, g ~ N(0, I). Deterministic given seed.
Matrix sample_latent(const ClassStats& stats, std::size_t cls, std::size_t count,
                     std::uint64_t seed);

// Lower-triangular L with L L^T = m (m symmetric positive definite).
Matrix cholesky(const Matrix& m);

}  // namespace csae::latent
