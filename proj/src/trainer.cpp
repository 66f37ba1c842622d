#include "csae/trainer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "csae/latent.hpp"
#include "csae/rng.hpp"

namespace csae::trainer {

void TrainConfig::validate() const {
    loss_weights.validate();
    if (batch_size < 1) throw std::invalid_argument("trainer: batch_size must be >= 1");
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("trainer: beta must be in [0, 1]");
    if (optimizer.epochs > 0) optimizer.validate();
    if (encoder_hidden.empty() || decoder_hidden.empty())
        throw std::invalid_argument("trainer: hidden layer lists must be nonempty");
}

Matrix flatten_images(const data::Dataset& ds) {
    const std::size_t side = ds.side();
    Matrix rows(ds.size(), side * side);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto dst = rows.row(i);
        const Matrix& img = ds.images[i];
        for (std::size_t p = 0; p < img.size(); ++p) dst[p] = img.data()[p];
    }
    return rows;
}

namespace {

void preflight(const TrainConfig& cfg, const data::Dataset& train_ds,
               const data::Dataset& test_ds, const pedcc::CentroidSet& centroids) {
    cfg.validate();
    if (train_ds.size() == 0) throw std::invalid_argument("trainer: empty training set");
    if (train_ds.n_classes > centroids.classes())
        throw std::invalid_argument("trainer: dataset has " + std::to_string(train_ds.n_classes) +
                                    " classes but the centroid set provides only " +
                                    std::to_string(centroids.classes()));
    if (!test_ds.images.empty() && test_ds.side() != train_ds.side())
        throw std::invalid_argument("trainer: train/test image sides differ");
    const std::size_t side = train_ds.side();
    const std::size_t block = std::size_t{1} << cfg.loss_weights.levels;
    if (side % block != 0)
        throw std::invalid_argument("trainer: image side " + std::to_string(side) +
                                    " is not divisible by 2^levels");
}

// seeded Fisher-Yates
void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = rng.next_u64() % i;
        std::swap(idx[i - 1], idx[j]);
    }
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const data::Dataset& train_ds,
                  const data::Dataset& test_ds, const pedcc::CentroidSet& centroids,
                  const TrainHooks* hooks) {
    preflight(cfg, train_ds, test_ds, centroids);

    const std::size_t side = train_ds.side();
    const std::size_t m2 = side * side;
    const std::size_t d = centroids.dim();

    Rng master(cfg.seed);
    Rng init_rng = master.fork();
    Rng shuffle_rng = master.fork();
    Rng noise_rng = master.fork();   // own stream: consumption never shifts the others

    TrainResult result;
    result.network = net::Network::init(net::mlp_spec(m2, cfg.encoder_hidden, d),
                                        net::mlp_spec(d, cfg.decoder_hidden, m2),
                                        init_rng.next_u64());

    const Matrix all_rows = flatten_images(train_ds);
    latent::NoiseConfig noise_cfg{cfg.beta, centroids.alpha, cfg.seed};
    noise_cfg.validate();

    std::vector<std::size_t> order(train_ds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 0; epoch < cfg.optimizer.epochs; ++epoch) {
        shuffle_indices(order, shuffle_rng);
        double epoch_loss1 = 0.0, epoch_loss2 = 0.0;
        std::size_t seen = 0;

        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t bsz = std::min(cfg.batch_size, order.size() - start);
            Matrix xb(bsz, m2);
            Matrix targets(bsz, d);
            for (std::size_t r = 0; r < bsz; ++r) {
                const std::size_t src = order[start + r];
                auto dst = xb.row(r);
                const auto srow = all_rows.row(src);
                for (std::size_t p = 0; p < m2; ++p) dst[p] = srow[p];
                const auto mu = centroids.mu.row(train_ds.labels[src]);
                auto trow = targets.row(r);
                for (std::size_t p = 0; p < d; ++p) trow[p] = mu[p];
            }

            Matrix offset;
            const Matrix* offset_ptr = nullptr;
            const bool override_noise = hooks && hooks->noise_override;
            if (cfg.beta > 0.0 || override_noise) {
                offset = Matrix(bsz, d);
                if (override_noise)
                    for (std::size_t r = 0; r < bsz; ++r) hooks->noise_override(offset.row(r));
                else
                    latent::fill_noise(offset, noise_cfg, noise_rng);
                offset_ptr = &offset;
                result.noise_applications += bsz;
            }

            const net::ForwardCache cache = result.network.forward(xb, offset_ptr);

            const double l1v = losses::loss1(cache.latent, targets);
            const losses::Loss2Report l2r = losses::batch_loss2(cache.recon, xb, side,
                                                                cfg.loss_weights);
            const double total = losses::total_loss(l1v, l2r.total, cfg.loss_weights.recon_scale);
            if (!std::isfinite(total))
                throw std::runtime_error(
                    "trainer: non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                    std::to_string(start / cfg.batch_size) + " (loss1=" + std::to_string(l1v) +
                    ", loss2=" + std::to_string(l2r.total) + ")");

            Matrix latent_grad = losses::loss1_gradient(cache.latent, targets);
            Matrix recon_grad = losses::batch_loss2_gradient(cache.recon, xb, side,
                                                             cfg.loss_weights);
            recon_grad *= cfg.loss_weights.recon_scale;

            const net::Gradients grads = result.network.backward(cache, latent_grad, recon_grad);
            net::sgd_step(result.network, grads, cfg.optimizer, epoch);

            epoch_loss1 += l1v * static_cast<double>(bsz);
            epoch_loss2 += l2r.total * static_cast<double>(bsz);
            seen += bsz;
        }

        EpochMetrics row;
        row.epoch = epoch;
        row.loss1 = epoch_loss1 / static_cast<double>(seen);
        row.loss2 = epoch_loss2 / static_cast<double>(seen);
        row.total = losses::total_loss(row.loss1, row.loss2, cfg.loss_weights.recon_scale);
        const bool last = epoch + 1 == cfg.optimizer.epochs;
        if (!test_ds.images.empty() &&
            ((cfg.eval_every > 0 && (epoch + 1) % cfg.eval_every == 0) || last)) {
            const EpochMetrics ev = evaluate(result.network, test_ds, centroids, cfg.loss_weights);
            row.has_eval = true;
            row.test_accuracy = ev.test_accuracy;
            row.test_mse = ev.test_mse;
        }
        result.metrics.rows.push_back(row);
    }
    return result;
}

EpochMetrics evaluate(const net::Network& network, const data::Dataset& ds,
                      const pedcc::CentroidSet& centroids, const losses::LossWeights& weights) {
    if (ds.size() == 0) throw std::invalid_argument("evaluate: empty dataset");
    const std::size_t side = ds.side();
    const Matrix rows = flatten_images(ds);
    const Matrix z = network.encode(rows);
    const Matrix recon = network.decode(z);

    const std::vector<std::size_t> pred = latent::classify(z, centroids);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i] == ds.labels[i]) ++hits;

    Matrix targets(z.rows(), z.cols());
    for (std::size_t r = 0; r < z.rows(); ++r) {
        const auto mu = centroids.mu.row(ds.labels[r]);
        auto t = targets.row(r);
        for (std::size_t p = 0; p < t.size(); ++p) t[p] = mu[p];
    }

    EpochMetrics m;
    m.has_eval = true;
    m.test_accuracy = static_cast<double>(hits) / static_cast<double>(pred.size());
    m.test_mse = losses::mse(recon, rows);
    m.loss1 = losses::loss1(z, targets);
    m.loss2 = losses::batch_loss2(recon, rows, side, weights).total;
    m.total = losses::total_loss(m.loss1, m.loss2, weights.recon_scale);
    return m;
}

}  // namespace csae::trainer
