#pragma once

#include <cstdint>
#include <string>

#include "csae/latent.hpp"
#include "csae/matrix.hpp"
#include "csae/net.hpp"
#include "csae/pedcc.hpp"
#include "csae/trainer.hpp"

namespace csae::io {

// 64-bit FNV-1a over a byte range.
std::uint64_t fnv1a64(const void* bytes, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ULL);

// Stable fingerprint of a centroid set (hashes n, d, alpha, seed and the
// row-major matrix bytes); stored in checkpoints to pin the training geometry.
std::uint64_t centroid_fingerprint(const pedcc::CentroidSet& set);

// Versioned binary centroid file: magic, version, n, d, alpha, seed, row-major
// float64 matrix. Byte-identical for identical inputs.
void save_centroids(const pedcc::CentroidSet& set, const std::string& path);
pedcc::CentroidSet load_centroids(const std::string& path);

// Full-precision CSV of a matrix (one row per line).
void write_matrix_csv(const Matrix& m, const std::string& path);

// n x n distance matrix CSV, fixed 4 decimal places.
void write_distance_csv(const Matrix& dist, const std::string& path);

// Metrics CSV: versioned header row, one row per epoch.
void write_metrics_csv(const trainer::Metrics& metrics, const std::string& path);

// Model checkpoint: layer specs, parameters + momentum buffers, epoch count,
// the training configuration, image side and the centroid fingerprint.
struct Checkpoint {
    net::Network network;
    trainer::TrainConfig config;
    std::size_t epoch = 0;
    std::size_t side = 0;
    std::uint64_t centroid_fp = 0;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

void save_class_stats(const latent::ClassStats& stats, const std::string& path);
latent::ClassStats load_class_stats(const std::string& path);

// "key = value" config file ('#' comments). Unknown keys are an error; see
// README for the schema. Values not present keep their defaults.
trainer::TrainConfig load_train_config(const std::string& path);

}  // namespace csae::io
