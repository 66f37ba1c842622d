#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "csae/data.hpp"
#include "csae/losses.hpp"
#include "csae/net.hpp"
#include "csae/pedcc.hpp"

namespace csae::trainer {

struct TrainConfig {
    net::OptimizerConfig optimizer;
    losses::LossWeights loss_weights;
    double beta = 0.0;                              // latent noise amplitude factor
    std::size_t batch_size = 64;
    std::size_t eval_every = 1;                     // 0 = evaluate only after the last epoch
    std::uint64_t seed = 0;
    std::vector<std::size_t> encoder_hidden = {256, 64};
    std::vector<std::size_t> decoder_hidden = {64, 256};

    void validate() const;
};

struct EpochMetrics {
    std::size_t epoch = 0;
    double loss1 = 0.0;
    double loss2 = 0.0;
    double total = 0.0;
    bool has_eval = false;
    double test_accuracy = 0.0;
    double test_mse = 0.0;
};

struct Metrics {
    std::vector<EpochMetrics> rows;
};

// Test instrumentation: override the per-sample noise row (called once per
// sample per step when set, regardless of beta).
struct TrainHooks {
    std::function<void(std::span<double>)> noise_override;
};

struct TrainResult {
    net::Network network;
    Metrics metrics;
    std::size_t noise_applications = 0;   // samples that received a noise row
};

// One epoch: seeded shuffle, then per batch z = encode(x), z* = z + noise,
// x* = decode(z*), loss = loss1(z, mu) + recon_scale * loss2(x*, x), backprop
// both paths, SGD step. Deterministic given seed. Aborts on non-finite loss.
TrainResult train(const TrainConfig& cfg, const data::Dataset& train_ds,
                  const data::Dataset& test_ds, const pedcc::CentroidSet& centroids,
                  const TrainHooks* hooks = nullptr);

// Noise-free: accuracy of nearest-class-mean over encoded test latents plus
// clean reconstruction MSE and the loss terms. Pure, no RNG.
EpochMetrics evaluate(const net::Network& network, const data::Dataset& ds,
                      const pedcc::CentroidSet& centroids, const losses::LossWeights& weights);

// Flattens dataset images into rows (N x side^2).
Matrix flatten_images(const data::Dataset& ds);

}  // namespace csae::trainer
