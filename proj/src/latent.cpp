#include "csae/latent.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace csae::latent {

void NoiseConfig::validate() const {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("noise: beta must be in [0, 1]");
    if (!(alpha > 0.0)) throw std::invalid_argument("noise: alpha must be > 0");
}

std::vector<double> add_noise(std::span<const double> z, const NoiseConfig& cfg, Rng& rng) {
    cfg.validate();
    std::vector<double> out(z.begin(), z.end());
    if (cfg.beta == 0.0) return out;
    const double amp = cfg.alpha * cfg.beta;
    for (double& v : out) v += amp * rng.gaussian();
    return out;
}

void fill_noise(Matrix& offset, const NoiseConfig& cfg, Rng& rng) {
    cfg.validate();
    if (cfg.beta == 0.0) {
        for (std::size_t i = 0; i < offset.size(); ++i) offset.data()[i] = 0.0;
        return;
    }
    const double amp = cfg.alpha * cfg.beta;
    for (std::size_t i = 0; i < offset.size(); ++i) offset.data()[i] = amp * rng.gaussian();
}

std::size_t nearest_class_mean(std::span<const double> z, const pedcc::CentroidSet& centroids) {
    const Matrix& mu = centroids.mu;
    if (mu.rows() == 0) throw std::invalid_argument("nearest_class_mean: empty centroid set");
    if (z.size() != mu.cols())
        throw std::invalid_argument("nearest_class_mean: latent dim != centroid dim");
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mu.rows(); ++i) {
        double d2 = 0.0;
        const auto row = mu.row(i);
        for (std::size_t k = 0; k < row.size(); ++k) {
            const double diff = z[k] - row[k];
            d2 += diff * diff;
        }
        if (d2 < best_d2) {  // strict: ties keep the lowest index
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

std::vector<std::size_t> classify(const Matrix& latents, const pedcc::CentroidSet& centroids) {
    std::vector<std::size_t> out(latents.rows());
    for (std::size_t r = 0; r < latents.rows(); ++r)
        out[r] = nearest_class_mean(latents.row(r), centroids);
    return out;
}

Matrix cholesky(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("cholesky: matrix must be square");
    const std::size_t n = m.rows();
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

ClassStats fit_class_stats(const Matrix& latents, const std::vector<std::size_t>& labels,
                           std::size_t n_classes, double delta) {
    if (latents.rows() != labels.size())
        throw std::invalid_argument("fit_class_stats: latents/labels length mismatch");
    if (n_classes == 0) throw std::invalid_argument("fit_class_stats: n_classes must be > 0");
    if (delta < 0) throw std::invalid_argument("fit_class_stats: delta must be >= 0");
    const std::size_t d = latents.cols();

    std::vector<std::size_t> counts(n_classes, 0);
    for (std::size_t r = 0; r < labels.size(); ++r) {
        if (labels[r] >= n_classes)
            throw std::invalid_argument("fit_class_stats: label out of range at row " +
                                        std::to_string(r));
        ++counts[labels[r]];
    }
    for (std::size_t k = 0; k < n_classes; ++k)
        if (counts[k] == 0)
            throw std::invalid_argument("fit_class_stats: class " + std::to_string(k) +
                                        " has no samples");

    ClassStats stats;
    stats.n_classes = n_classes;
    stats.dim = d;
    stats.delta = delta;
    stats.means.assign(n_classes, std::vector<double>(d, 0.0));
    stats.covariances.assign(n_classes, Matrix(d, d));
    stats.factors.reserve(n_classes);

    for (std::size_t r = 0; r < latents.rows(); ++r) {
        const auto z = latents.row(r);
        auto& mean = stats.means[labels[r]];
        for (std::size_t k = 0; k < d; ++k) mean[k] += z[k];
    }
    for (std::size_t k = 0; k < n_classes; ++k)
        for (double& v : stats.means[k]) v /= static_cast<double>(counts[k]);

    for (std::size_t r = 0; r < latents.rows(); ++r) {
        const auto z = latents.row(r);
        const auto& mean = stats.means[labels[r]];
        Matrix& cov = stats.covariances[labels[r]];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                cov(i, j) += (z[i] - mean[i]) * (z[j] - mean[j]);
    }
    for (std::size_t k = 0; k < n_classes; ++k) {
        const double divisor = static_cast<double>(counts[k] > 1 ? counts[k] - 1 : 1);
        stats.covariances[k] *= 1.0 / divisor;

        Matrix reg = stats.covariances[k];
        double trace = 0.0;
        for (std::size_t i = 0; i < d; ++i) trace += reg(i, i);
        const double ridge = delta * std::max(1.0, trace / static_cast<double>(d));
        for (std::size_t i = 0; i < d; ++i) reg(i, i) += ridge;
        bool all_zero = true;
        for (std::size_t i = 0; i < reg.size() && all_zero; ++i)
            if (reg.data()[i] != 0.0) all_zero = false;
        // all-zero regularized covariance (delta = 0 override on a degenerate
        // class): sampling collapses onto the mean
        stats.factors.push_back(all_zero ? Matrix(d, d) : cholesky(reg));
    }
    return stats;
}

Matrix sample_latent(const ClassStats& stats, std::size_t cls, std::size_t count,
                     std::uint64_t seed) {
    if (cls >= stats.n_classes)
        throw std::invalid_argument("sample_latent: class index out of range (valid 0.." +
                                    std::to_string(stats.n_classes - 1) + ")");
    const std::size_t d = stats.dim;
    const Matrix& factor = stats.factors[cls];
    const auto& mean = stats.means[cls];
    Rng rng(seed);
    Matrix out(count, d);
    std::vector<double> g(d);
    for (std::size_t r = 0; r < count; ++r) {
        for (double& v : g) v = rng.gaussian();
        auto row = out.row(r);
        for (std::size_t i = 0; i < d; ++i) {
            double s = mean[i];
            for (std::size_t k = 0; k <= i; ++k) s += factor(i, k) * g[k];
            row[i] = s;
        }
    }
    return out;
}

}  // namespace csae::latent
