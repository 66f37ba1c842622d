#include <cmath>

#include "csae/io.hpp"
#include "csae/trainer.hpp"
#include "doctest.h"

using namespace csae;
using namespace csae::trainer;

namespace {

pedcc::CentroidSet centroids3(std::size_t d = 8) {
    pedcc::PedccConfig cfg;
    cfg.n_classes = 3;
    cfg.dim = d;
    cfg.iterations = 500;
    cfg.seed = 12345;
    return pedcc::generate(cfg);
}

TrainConfig tiny_config(std::size_t epochs) {
    TrainConfig cfg;
    cfg.optimizer.epochs = epochs;
    cfg.optimizer.decay_every = 30;
    cfg.encoder_hidden = {32, 16};
    cfg.decoder_hidden = {16, 32};
    cfg.batch_size = 16;
    cfg.seed = 7;
    return cfg;
}

bool params_equal(const net::Network& a, const net::Network& b) {
    if (a.params().size() != b.params().size()) return false;
    for (std::size_t p = 0; p < a.params().size(); ++p) {
        for (std::size_t i = 0; i < a.params()[p].weight.size(); ++i)
            if (a.params()[p].weight.data()[i] != b.params()[p].weight.data()[i]) return false;
        for (std::size_t i = 0; i < a.params()[p].bias.size(); ++i)
            if (a.params()[p].bias[i] != b.params()[p].bias[i]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("zero epochs returns the initialized network untouched") {
    const auto [train_ds, test_ds] = data::make_synthetic(3, 8, 16, 0.2, 3);
    const auto cents = centroids3();
    const TrainResult a = train(tiny_config(0), train_ds, test_ds, cents);
    const TrainResult b = train(tiny_config(0), train_ds, test_ds, cents);
    CHECK(a.metrics.rows.empty());
    CHECK(a.noise_applications == 0);
    CHECK(params_equal(a.network, b.network));

    const TrainResult trained = train(tiny_config(1), train_ds, test_ds, cents);
    CHECK_FALSE(params_equal(a.network, trained.network));
}

TEST_CASE("beta = 0 equals a run whose noise draws are all zero, bitwise") {
    const auto [train_ds, test_ds] = data::make_synthetic(3, 8, 16, 0.2, 5);
    const auto cents = centroids3();

    TrainConfig cfg = tiny_config(3);
    cfg.beta = 0.0;
    const TrainResult plain = train(cfg, train_ds, test_ds, cents);
    CHECK(plain.noise_applications == 0);

    TrainConfig noisy = cfg;
    noisy.beta = 0.5;  // hook overrides the draws with zeros
    TrainHooks hooks;
    hooks.noise_override = [](std::span<double> row) {
        for (double& v : row) v = 0.0;
    };
    const TrainResult zeroed = train(noisy, train_ds, test_ds, cents, &hooks);
    CHECK(zeroed.noise_applications == 3 * train_ds.size());
    CHECK(params_equal(plain.network, zeroed.network));
}

TEST_CASE("training is reproducible and logs total = loss1 + loss2") {
    const auto [train_ds, test_ds] = data::make_synthetic(3, 8, 16, 0.2, 11);
    const auto cents = centroids3();
    TrainConfig cfg = tiny_config(4);
    cfg.beta = 0.04;
    const TrainResult a = train(cfg, train_ds, test_ds, cents);
    const TrainResult b = train(cfg, train_ds, test_ds, cents);
    REQUIRE(a.metrics.rows.size() == 4);
    CHECK(params_equal(a.network, b.network));
    for (std::size_t i = 0; i < a.metrics.rows.size(); ++i) {
        const auto& ra = a.metrics.rows[i];
        const auto& rb = b.metrics.rows[i];
        CHECK(ra.loss1 == rb.loss1);
        CHECK(ra.loss2 == rb.loss2);
        CHECK(ra.total == rb.total);
        CHECK(ra.total == losses::total_loss(ra.loss1, ra.loss2));
    }
}

TEST_CASE("evaluation does not consume the noise stream") {
    const auto [train_ds, test_ds] = data::make_synthetic(3, 8, 16, 0.2, 13);
    const auto cents = centroids3();
    TrainConfig with_eval = tiny_config(3);
    with_eval.beta = 0.3;
    with_eval.eval_every = 1;
    TrainConfig no_eval = with_eval;
    no_eval.eval_every = 0;

    const TrainResult a = train(with_eval, train_ds, test_ds, cents);
    const TrainResult b = train(no_eval, train_ds, test_ds, cents);
    CHECK(a.noise_applications == b.noise_applications);
    CHECK(params_equal(a.network, b.network));

    // evaluate is pure: identical rows on repeated calls
    losses::LossWeights w;
    const EpochMetrics m1 = evaluate(a.network, test_ds, cents, w);
    const EpochMetrics m2 = evaluate(a.network, test_ds, cents, w);
    CHECK(m1.test_accuracy == m2.test_accuracy);
    CHECK(m1.test_mse == m2.test_mse);
    CHECK(m1.loss1 == m2.loss1);
}

TEST_CASE("learning signal: epoch-10 loss strictly below epoch-0") {
    const auto [train_ds, test_ds] = data::make_synthetic(3, 30, 16, 0.2, 17);
    const auto cents = centroids3();
    TrainConfig cfg = tiny_config(11);
    cfg.encoder_hidden = {64, 32};
    cfg.decoder_hidden = {32, 64};
    const TrainResult r = train(cfg, train_ds, test_ds, cents);
    CHECK(r.metrics.rows[10].total < r.metrics.rows[0].total);
}

TEST_CASE("a constructed perfect encoder scores accuracy 1") {
    // two classes: constant-0 and constant-1 images; a single affine encoder
    // mapping pixel sums onto the two centroids
    pedcc::PedccConfig pcfg;
    pcfg.n_classes = 2;
    pcfg.dim = 4;
    pcfg.iterations = 2000;
    pcfg.seed = 3;
    const pedcc::CentroidSet cents = pedcc::generate(pcfg);

    data::Dataset ds;
    ds.n_classes = 2;
    ds.split = "test";
    const std::size_t side = 4, m2 = side * side;
    for (int k = 0; k < 2; ++k) {
        ds.images.push_back(Matrix(side, side, static_cast<double>(k)));
        ds.labels.push_back(k);
    }

    net::Network netw = net::Network::init(net::mlp_spec(m2, {}, 4), net::mlp_spec(4, {}, m2), 1);
    auto& enc = netw.params()[0];
    for (std::size_t r = 0; r < 4; ++r) {
        enc.bias[r] = cents.mu(0, r);
        const double w = (cents.mu(1, r) - cents.mu(0, r)) / static_cast<double>(m2);
        for (std::size_t c = 0; c < m2; ++c) enc.weight(r, c) = w;
    }
    losses::LossWeights w;
    w.levels = 1;
    const EpochMetrics m = evaluate(netw, ds, cents, w);
    CHECK(m.test_accuracy == 1.0);
}

TEST_CASE("preflight rejects inconsistent inputs") {
    const auto cents = centroids3();
    auto [train_ds, test_ds] = data::make_synthetic(4, 4, 16, 0.2, 19);
    // 4 dataset classes vs 3 centroids
    CHECK_THROWS_WITH_AS(train(tiny_config(1), train_ds, test_ds, cents),
                         doctest::Contains("classes"), std::invalid_argument);

    auto [t12a, t12b] = data::make_synthetic(3, 4, 12, 0.2, 19);
    TrainConfig cfg = tiny_config(1);
    cfg.loss_weights.levels = 3;  // 12 % 8 != 0
    CHECK_THROWS_WITH_AS(train(cfg, t12a, t12b, cents), doctest::Contains("divisible"),
                         std::invalid_argument);
}

TEST_CASE("divergence aborts loudly") {
    const auto [train_ds, test_ds] = data::make_synthetic(3, 8, 16, 0.2, 23);
    const auto cents = centroids3();
    TrainConfig cfg = tiny_config(30);
    cfg.optimizer.lr0 = 1e9;
    CHECK_THROWS_AS(train(cfg, train_ds, test_ds, cents), std::runtime_error);
}
