#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "csae/matrix.hpp"

namespace csae::net {

enum class LayerKind { affine, relu };

struct LayerSpec {
    LayerKind kind = LayerKind::affine;
    std::size_t in_dim = 0;   // affine only
    std::size_t out_dim = 0;  // affine only
};

// Builds [affine in->h0, relu, affine h0->h1, relu, ..., affine hk->out].
std::vector<LayerSpec> mlp_spec(std::size_t in_dim, const std::vector<std::size_t>& hidden,
                                std::size_t out_dim);

struct AffineParam {
    Matrix weight;                    // out_dim x in_dim
    std::vector<double> bias;         // out_dim
    Matrix weight_vel;                // momentum buffers, same shapes
    std::vector<double> bias_vel;
};

struct OptimizerConfig {
    double lr0 = 0.01;          // no batch norm here, so the stable desk default
    double momentum = 0.9;
    double weight_decay = 0.0005;
    std::size_t epochs = 120;
    std::size_t decay_every = 30;
    double decay_factor = 10.0;

    void validate() const;
    double learning_rate(std::size_t epoch) const;
};

struct Gradients {
    // one entry per affine layer, encoder first then decoder
    std::vector<Matrix> weight;
    std::vector<std::vector<double>> bias;
};

// Activations cached by forward() for the backward pass.
struct ForwardCache {
    Matrix input;                        // B x in_dim
    std::vector<Matrix> encoder_post;    // output of each encoder layer
    Matrix latent;                       // clean z, B x d
    Matrix decoder_input;                // z plus caller-provided offset
    std::vector<Matrix> decoder_post;    // output of each decoder layer
    Matrix recon;                        // B x out_dim
};

class Network {
public:
    Network() = default;

    static Network init(const std::vector<LayerSpec>& encoder_spec,
                        const std::vector<LayerSpec>& decoder_spec, std::uint64_t seed);

    std::size_t input_dim() const;
    std::size_t latent_dim() const;
    std::size_t output_dim() const;

    const std::vector<LayerSpec>& encoder_spec() const { return encoder_spec_; }
    const std::vector<LayerSpec>& decoder_spec() const { return decoder_spec_; }
    std::vector<AffineParam>& params() { return params_; }
    const std::vector<AffineParam>& params() const { return params_; }
    std::size_t encoder_affine_count() const { return encoder_affine_count_; }

    // Pure passes, no caching; safe on a const snapshot.
    Matrix encode(const Matrix& x_rows) const;
    Matrix decode(const Matrix& z_rows) const;

    // Full pass with caches. latent_offset (e.g. training noise) is added to
    // the latent before decoding; pass nullptr for the clean path.
    ForwardCache forward(const Matrix& x_rows, const Matrix* latent_offset = nullptr) const;

    // Reverse-mode pass. latent_grad enters at the latent node (classification
    // path), recon_grad at the decoder output. The latent node receives the sum
    // of both paths; an additive latent offset has identity Jacobian.
    Gradients backward(const ForwardCache& cache, const Matrix& latent_grad,
                       const Matrix& recon_grad) const;

private:
    std::vector<LayerSpec> encoder_spec_;
    std::vector<LayerSpec> decoder_spec_;
    std::vector<AffineParam> params_;   // encoder affines, then decoder affines
    std::size_t encoder_affine_count_ = 0;

    friend void sgd_step(Network&, const Gradients&, const OptimizerConfig&, std::size_t);
};

// g' = g + weight_decay * w (weights only); v <- momentum * v + g'; w -= lr * v.
void sgd_step(Network& net, const Gradients& grads, const OptimizerConfig& cfg,
              std::size_t epoch);

}  // namespace csae::net
