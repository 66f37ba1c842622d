#include "csae/net.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "csae/rng.hpp"

namespace csae::net {

std::vector<LayerSpec> mlp_spec(std::size_t in_dim, const std::vector<std::size_t>& hidden,
                                std::size_t out_dim) {
    std::vector<LayerSpec> spec;
    std::size_t cur = in_dim;
    for (std::size_t h : hidden) {
        spec.push_back({LayerKind::affine, cur, h});
        spec.push_back({LayerKind::relu, 0, 0});
        cur = h;
    }
    spec.push_back({LayerKind::affine, cur, out_dim});
    return spec;
}

void OptimizerConfig::validate() const {
    if (!(lr0 > 0)) throw std::invalid_argument("optimizer: lr0 must be > 0");
    if (momentum < 0 || momentum >= 1) throw std::invalid_argument("optimizer: momentum must be in [0, 1)");
    if (weight_decay < 0) throw std::invalid_argument("optimizer: weight_decay must be >= 0");
    if (epochs < 1) throw std::invalid_argument("optimizer: epochs must be >= 1");
    if (decay_every < 1 || decay_every > epochs)
        throw std::invalid_argument("optimizer: decay_every must be in [1, epochs]");
    if (!(decay_factor > 0)) throw std::invalid_argument("optimizer: decay_factor must be > 0");
}

double OptimizerConfig::learning_rate(std::size_t epoch) const {
    return lr0 / std::pow(decay_factor, static_cast<double>(epoch / decay_every));
}

namespace {

// Walks a spec, checking the dimension chain; returns {in_dim, out_dim}.
std::pair<std::size_t, std::size_t> chain_dims(const std::vector<LayerSpec>& spec,
                                               const char* name) {
    if (spec.empty()) throw std::invalid_argument(std::string(name) + ": empty layer spec");
    std::size_t in = 0, cur = 0;
    bool have_dim = false;
    for (const auto& layer : spec) {
        if (layer.kind == LayerKind::affine) {
            if (layer.in_dim == 0 || layer.out_dim == 0)
                throw std::invalid_argument(std::string(name) + ": affine dims must be nonzero");
            if (have_dim && layer.in_dim != cur)
                throw std::invalid_argument(std::string(name) + ": dimension chain broken");
            if (!have_dim) {
                in = layer.in_dim;
                have_dim = true;
            }
            cur = layer.out_dim;
        }
    }
    if (!have_dim) throw std::invalid_argument(std::string(name) + ": needs at least one affine layer");
    return {in, cur};
}

Matrix affine_forward(const Matrix& x, const AffineParam& p) {
    Matrix y = matmul_nt(x, p.weight);  // B x out
    for (std::size_t r = 0; r < y.rows(); ++r) {
        auto row = y.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) row[c] += p.bias[c];
    }
    return y;
}

Matrix relu_forward(const Matrix& x) {
    Matrix y = x;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y.data()[i] < 0) y.data()[i] = 0;
    return y;
}

}  // namespace

Network Network::init(const std::vector<LayerSpec>& encoder_spec,
                      const std::vector<LayerSpec>& decoder_spec, std::uint64_t seed) {
    const auto [enc_in, enc_out] = chain_dims(encoder_spec, "encoder");
    const auto [dec_in, dec_out] = chain_dims(decoder_spec, "decoder");
    if (enc_out != dec_in)
        throw std::invalid_argument("network: encoder output dim != decoder input dim");
    (void)enc_in;
    (void)dec_out;

    Network n;
    n.encoder_spec_ = encoder_spec;
    n.decoder_spec_ = decoder_spec;
    Rng rng(seed);
    auto init_stack = [&](const std::vector<LayerSpec>& spec) {
        for (const auto& layer : spec) {
            if (layer.kind != LayerKind::affine) continue;
            AffineParam p;
            p.weight = Matrix(layer.out_dim, layer.in_dim);
            const double scale = 1.0 / std::sqrt(static_cast<double>(layer.in_dim));
            for (std::size_t i = 0; i < p.weight.size(); ++i)
                p.weight.data()[i] = scale * rng.gaussian();
            p.bias.assign(layer.out_dim, 0.0);
            p.weight_vel = Matrix(layer.out_dim, layer.in_dim);
            p.bias_vel.assign(layer.out_dim, 0.0);
            n.params_.push_back(std::move(p));
        }
    };
    init_stack(encoder_spec);
    n.encoder_affine_count_ = n.params_.size();
    init_stack(decoder_spec);
    return n;
}

std::size_t Network::input_dim() const { return chain_dims(encoder_spec_, "encoder").first; }
std::size_t Network::latent_dim() const { return chain_dims(encoder_spec_, "encoder").second; }
std::size_t Network::output_dim() const { return chain_dims(decoder_spec_, "decoder").second; }

namespace {

// Runs one stack; if posts != nullptr, records every layer output.
Matrix run_stack(const std::vector<LayerSpec>& spec, const std::vector<AffineParam>& params,
                 std::size_t param_offset, const Matrix& input, std::vector<Matrix>* posts) {
    Matrix h = input;
    std::size_t pi = param_offset;
    for (const auto& layer : spec) {
        if (layer.kind == LayerKind::affine)
            h = affine_forward(h, params[pi++]);
        else
            h = relu_forward(h);
        if (posts) posts->push_back(h);
    }
    return h;
}

}  // namespace

Matrix Network::encode(const Matrix& x_rows) const {
    if (x_rows.cols() != input_dim()) throw std::invalid_argument("encode: input dim mismatch");
    return run_stack(encoder_spec_, params_, 0, x_rows, nullptr);
}

Matrix Network::decode(const Matrix& z_rows) const {
    if (z_rows.cols() != latent_dim()) throw std::invalid_argument("decode: latent dim mismatch");
    return run_stack(decoder_spec_, params_, encoder_affine_count_, z_rows, nullptr);
}

ForwardCache Network::forward(const Matrix& x_rows, const Matrix* latent_offset) const {
    if (x_rows.cols() != input_dim()) throw std::invalid_argument("forward: input dim mismatch");
    ForwardCache cache;
    cache.input = x_rows;
    cache.latent = run_stack(encoder_spec_, params_, 0, x_rows, &cache.encoder_post);
    cache.decoder_input = cache.latent;
    if (latent_offset) {
        latent_offset->require_same_shape(cache.latent);
        cache.decoder_input += *latent_offset;
    }
    cache.recon =
        run_stack(decoder_spec_, params_, encoder_affine_count_, cache.decoder_input,
                  &cache.decoder_post);
    return cache;
}

namespace {

// Backprop through one stack. grads are written at [param_offset, ...] in
// reverse layer order; returns the gradient with respect to the stack input.
Matrix backprop_stack(const std::vector<LayerSpec>& spec, const std::vector<AffineParam>& params,
                      std::size_t param_offset, const Matrix& stack_input,
                      const std::vector<Matrix>& posts, Matrix grad_out, Gradients& grads) {
    std::size_t affine_total = 0;
    for (const auto& layer : spec)
        if (layer.kind == LayerKind::affine) ++affine_total;

    std::size_t pi = param_offset + affine_total;
    Matrix g = std::move(grad_out);
    for (std::size_t li = spec.size(); li-- > 0;) {
        const Matrix& input = li == 0 ? stack_input : posts[li - 1];
        if (spec[li].kind == LayerKind::relu) {
            const Matrix& out = posts[li];
            for (std::size_t i = 0; i < g.size(); ++i)
                if (out.data()[i] <= 0.0) g.data()[i] = 0.0;
        } else {
            --pi;
            const AffineParam& p = params[pi];
            grads.weight[pi] = matmul_tn(g, input);  // out x in
            auto& gb = grads.bias[pi];
            gb.assign(g.cols(), 0.0);
            for (std::size_t r = 0; r < g.rows(); ++r) {
                const auto row = g.row(r);
                for (std::size_t c = 0; c < row.size(); ++c) gb[c] += row[c];
            }
            g = matmul(g, p.weight);  // B x in
        }
    }
    return g;
}

}  // namespace

Gradients Network::backward(const ForwardCache& cache, const Matrix& latent_grad,
                            const Matrix& recon_grad) const {
    if (!latent_grad.same_shape(cache.latent) || !recon_grad.same_shape(cache.recon))
        throw std::invalid_argument("backward: gradient shapes do not match the cache");
    if (cache.encoder_post.size() != encoder_spec_.size() ||
        cache.decoder_post.size() != decoder_spec_.size())
        throw std::invalid_argument("backward: stale cache");

    Gradients grads;
    grads.weight.resize(params_.size());
    grads.bias.resize(params_.size());

    Matrix latent_total = backprop_stack(decoder_spec_, params_, encoder_affine_count_,
                                         cache.decoder_input, cache.decoder_post, recon_grad,
                                         grads);
    latent_total += latent_grad;  // additive offset at the latent has identity Jacobian
    backprop_stack(encoder_spec_, params_, 0, cache.input, cache.encoder_post,
                   std::move(latent_total), grads);
    return grads;
}

void sgd_step(Network& net, const Gradients& grads, const OptimizerConfig& cfg,
              std::size_t epoch) {
    cfg.validate();
    if (grads.weight.size() != net.params_.size() || grads.bias.size() != net.params_.size())
        throw std::invalid_argument("sgd_step: gradient count mismatch");
    const double lr = cfg.learning_rate(epoch);
    for (std::size_t p = 0; p < net.params_.size(); ++p) {
        AffineParam& par = net.params_[p];
        const Matrix& gw = grads.weight[p];
        gw.require_same_shape(par.weight);
        for (std::size_t i = 0; i < gw.size(); ++i) {
            const double g = gw.data()[i];
            if (!std::isfinite(g)) throw std::runtime_error("sgd_step: non-finite weight gradient");
            const double gp = g + cfg.weight_decay * par.weight.data()[i];
            par.weight_vel.data()[i] = cfg.momentum * par.weight_vel.data()[i] + gp;
            par.weight.data()[i] -= lr * par.weight_vel.data()[i];
        }
        const auto& gb = grads.bias[p];
        if (gb.size() != par.bias.size())
            throw std::invalid_argument("sgd_step: bias gradient shape mismatch");
        for (std::size_t i = 0; i < gb.size(); ++i) {
            if (!std::isfinite(gb[i])) throw std::runtime_error("sgd_step: non-finite bias gradient");
            par.bias_vel[i] = cfg.momentum * par.bias_vel[i] + gb[i];
            par.bias[i] -= lr * par.bias_vel[i];
        }
    }
}

}  // namespace csae::net
