#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "csae/matrix.hpp"

namespace csae::losses {

// Weights of the wavelet reconstruction loss and the level count J.
// recon_scale is an optional reweight of the whole reconstruction term in the
// total loss; 1 recovers the plain sum.
struct LossWeights {
    double approx_weight = 1.0;   // lambda1, MSE on the coarsest approximation
    double horiz_weight = 1.0;    // lambda2, L1 on horizontal details
    double vert_weight = 6.0;     // lambda3, L1 on vertical details
    double diag_weight = 10.0;    // lambda4, L1 on diagonal details
    std::size_t levels = 2;       // J
    double recon_scale = 1.0;

    void validate() const;
};

// Per-term breakdown of the wavelet loss. detail_l1[q-1] = {h, v, c} L1 means
// of level q, each normalized by its own subband entry count and already
// multiplied by its lambda.
struct Loss2Report {
    double total = 0.0;
    double approx_mse = 0.0;
    std::vector<std::array<double, 3>> detail_l1;
};

struct LossReport {
    double loss1 = 0.0;
    Loss2Report loss2;
    double total = 0.0;
};

// Mean squared / absolute difference over all entries.
double mse(const Matrix& a, const Matrix& b);
double l1(const Matrix& a, const Matrix& b);

// d mse / da = 2 (a - b) / size; d l1 / da = sign(a - b) / size, sign(0) = 0.
Matrix mse_gradient(const Matrix& a, const Matrix& b);
Matrix l1_gradient(const Matrix& a, const Matrix& b);

// Classification loss: mean over batch rows and latent coordinates of the
// squared gap between each latent and its class centroid row.
double loss1(const Matrix& latents, const Matrix& targets);
Matrix loss1_gradient(const Matrix& latents, const Matrix& targets);

// Wavelet loss of one image pair.
Loss2Report loss2(const Matrix& recon, const Matrix& image, const LossWeights& w);
// Gradient with respect to recon, pulled back through the synthesis operator.
Matrix loss2_gradient(const Matrix& recon, const Matrix& image, const LossWeights& w);

// Batch versions over flattened rows (B x side^2); means over the batch.
Loss2Report batch_loss2(const Matrix& recon_rows, const Matrix& image_rows, std::size_t side,
                        const LossWeights& w);
Matrix batch_loss2_gradient(const Matrix& recon_rows, const Matrix& image_rows, std::size_t side,
                            const LossWeights& w);

double total_loss(double loss1_value, double loss2_value, double recon_scale = 1.0);

LossReport make_report(double loss1_value, Loss2Report loss2_report, double recon_scale = 1.0);

}  // namespace csae::losses
