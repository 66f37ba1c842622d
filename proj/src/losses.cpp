#include "csae/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "csae/wavelet.hpp"

namespace csae::losses {

void LossWeights::validate() const {
    if (approx_weight < 0 || horiz_weight < 0 || vert_weight < 0 || diag_weight < 0)
        throw std::invalid_argument("losses: weights must be non-negative");
    if (levels < 1) throw std::invalid_argument("losses: levels must be >= 1");
    if (recon_scale < 0) throw std::invalid_argument("losses: recon_scale must be non-negative");
}

double mse(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

double l1(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.data()[i] - b.data()[i]);
    return s / static_cast<double>(a.size());
}

Matrix mse_gradient(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    Matrix g(a.rows(), a.cols());
    const double inv = 2.0 / static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) g.data()[i] = inv * (a.data()[i] - b.data()[i]);
    return g;
}

Matrix l1_gradient(const Matrix& a, const Matrix& b) {
    a.require_same_shape(b);
    Matrix g(a.rows(), a.cols());
    const double inv = 1.0 / static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        g.data()[i] = d > 0 ? inv : (d < 0 ? -inv : 0.0);
    }
    return g;
}

double loss1(const Matrix& latents, const Matrix& targets) {
    return mse(latents, targets);
}

Matrix loss1_gradient(const Matrix& latents, const Matrix& targets) {
    return mse_gradient(latents, targets);
}

Loss2Report loss2(const Matrix& recon, const Matrix& image, const LossWeights& w) {
    recon.require_same_shape(image);
    w.validate();
    const wavelet::WaveletPyramid pr = wavelet::dwt2(recon, w.levels);
    const wavelet::WaveletPyramid pi = wavelet::dwt2(image, w.levels);

    Loss2Report report;
    report.approx_mse = w.approx_weight * mse(pr.approx, pi.approx);
    report.total = report.approx_mse;
    report.detail_l1.resize(w.levels);
    for (std::size_t q = 0; q < w.levels; ++q) {
        const double h = w.horiz_weight * l1(pr.details[q][0], pi.details[q][0]);
        const double v = w.vert_weight * l1(pr.details[q][1], pi.details[q][1]);
        const double c = w.diag_weight * l1(pr.details[q][2], pi.details[q][2]);
        report.detail_l1[q] = {h, v, c};
        report.total += h + v + c;
    }
    return report;
}

Matrix loss2_gradient(const Matrix& recon, const Matrix& image, const LossWeights& w) {
    recon.require_same_shape(image);
    w.validate();
    const wavelet::WaveletPyramid pr = wavelet::dwt2(recon, w.levels);
    const wavelet::WaveletPyramid pi = wavelet::dwt2(image, w.levels);

    // subband gradients, then one synthesis pass (the transform is orthogonal,
    // so synthesis is the adjoint of analysis)
    wavelet::WaveletPyramid grad;
    grad.levels = w.levels;
    grad.approx = mse_gradient(pr.approx, pi.approx);
    grad.approx *= w.approx_weight;
    grad.details.resize(w.levels);
    for (std::size_t q = 0; q < w.levels; ++q) {
        grad.details[q][0] = l1_gradient(pr.details[q][0], pi.details[q][0]);
        grad.details[q][0] *= w.horiz_weight;
        grad.details[q][1] = l1_gradient(pr.details[q][1], pi.details[q][1]);
        grad.details[q][1] *= w.vert_weight;
        grad.details[q][2] = l1_gradient(pr.details[q][2], pi.details[q][2]);
        grad.details[q][2] *= w.diag_weight;
    }
    return wavelet::idwt2(grad);
}

namespace {

Matrix unflatten_row(const Matrix& rows, std::size_t r, std::size_t side) {
    Matrix img(side, side);
    const auto src = rows.row(r);
    for (std::size_t i = 0; i < side * side; ++i) img.data()[i] = src[i];
    return img;
}

}  // namespace

Loss2Report batch_loss2(const Matrix& recon_rows, const Matrix& image_rows, std::size_t side,
                        const LossWeights& w) {
    recon_rows.require_same_shape(image_rows);
    if (recon_rows.cols() != side * side)
        throw std::invalid_argument("batch_loss2: rows are not side*side long");
    const std::size_t batch = recon_rows.rows();
    if (batch == 0) throw std::invalid_argument("batch_loss2: empty batch");

    Loss2Report acc;
    acc.detail_l1.assign(w.levels, {0.0, 0.0, 0.0});
    for (std::size_t r = 0; r < batch; ++r) {
        const Loss2Report one =
            loss2(unflatten_row(recon_rows, r, side), unflatten_row(image_rows, r, side), w);
        acc.total += one.total;
        acc.approx_mse += one.approx_mse;
        for (std::size_t q = 0; q < w.levels; ++q)
            for (int t = 0; t < 3; ++t) acc.detail_l1[q][t] += one.detail_l1[q][t];
    }
    const double inv = 1.0 / static_cast<double>(batch);
    acc.total *= inv;
    acc.approx_mse *= inv;
    for (auto& lvl : acc.detail_l1)
        for (double& t : lvl) t *= inv;
    return acc;
}

Matrix batch_loss2_gradient(const Matrix& recon_rows, const Matrix& image_rows, std::size_t side,
                            const LossWeights& w) {
    recon_rows.require_same_shape(image_rows);
    if (recon_rows.cols() != side * side)
        throw std::invalid_argument("batch_loss2_gradient: rows are not side*side long");
    const std::size_t batch = recon_rows.rows();
    if (batch == 0) throw std::invalid_argument("batch_loss2_gradient: empty batch");

    Matrix grads(batch, side * side);
    const double inv = 1.0 / static_cast<double>(batch);
    for (std::size_t r = 0; r < batch; ++r) {
        const Matrix g = loss2_gradient(unflatten_row(recon_rows, r, side),
                                        unflatten_row(image_rows, r, side), w);
        auto dst = grads.row(r);
        for (std::size_t i = 0; i < g.size(); ++i) dst[i] = g.data()[i] * inv;
    }
    return grads;
}

double total_loss(double loss1_value, double loss2_value, double recon_scale) {
    return loss1_value + recon_scale * loss2_value;
}

LossReport make_report(double loss1_value, Loss2Report loss2_report, double recon_scale) {
    LossReport report;
    report.loss1 = loss1_value;
    report.total = total_loss(loss1_value, loss2_report.total, recon_scale);
    report.loss2 = std::move(loss2_report);
    return report;
}

}  // namespace csae::losses
