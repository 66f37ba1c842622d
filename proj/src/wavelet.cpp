#include "csae/wavelet.hpp"

#include <stdexcept>

namespace csae::wavelet {

namespace {

void require_square_even(const Matrix& img) {
    if (img.rows() != img.cols()) throw std::invalid_argument("dwt2: image must be square");
    if (img.rows() == 0 || img.rows() % 2 != 0)
        throw std::invalid_argument("dwt2: image side must be even and nonzero");
}

}  // namespace

Subbands dwt2_level(const Matrix& img) {
    require_square_even(img);
    const std::size_t half = img.rows() / 2;
    Subbands sb{Matrix(half, half), Matrix(half, half), Matrix(half, half), Matrix(half, half)};
    for (std::size_t i = 0; i < half; ++i)
        for (std::size_t j = 0; j < half; ++j) {
            const double a = img(2 * i, 2 * j);
            const double b = img(2 * i, 2 * j + 1);
            const double c = img(2 * i + 1, 2 * j);
            const double d = img(2 * i + 1, 2 * j + 1);
            sb.approx(i, j) = (a + b + c + d) / 2.0;
            sb.horiz(i, j) = (a + b - c - d) / 2.0;
            sb.vert(i, j) = (a - b + c - d) / 2.0;
            sb.diag(i, j) = (a - b - c + d) / 2.0;
        }
    return sb;
}

Matrix idwt2_level(const Matrix& approx, const Matrix& horiz, const Matrix& vert,
                   const Matrix& diag) {
    approx.require_same_shape(horiz);
    approx.require_same_shape(vert);
    approx.require_same_shape(diag);
    if (approx.rows() != approx.cols()) throw std::invalid_argument("idwt2: subbands must be square");
    const std::size_t half = approx.rows();
    Matrix img(2 * half, 2 * half);
    for (std::size_t i = 0; i < half; ++i)
        for (std::size_t j = 0; j < half; ++j) {
            const double b = approx(i, j);
            const double h = horiz(i, j);
            const double v = vert(i, j);
            const double c = diag(i, j);
            img(2 * i, 2 * j) = (b + h + v + c) / 2.0;
            img(2 * i, 2 * j + 1) = (b + h - v - c) / 2.0;
            img(2 * i + 1, 2 * j) = (b - h + v - c) / 2.0;
            img(2 * i + 1, 2 * j + 1) = (b - h - v + c) / 2.0;
        }
    return img;
}

Matrix idwt2_level(const Subbands& sb) {
    return idwt2_level(sb.approx, sb.horiz, sb.vert, sb.diag);
}

WaveletPyramid dwt2(const Matrix& img, std::size_t levels) {
    if (levels < 1) throw std::invalid_argument("dwt2: levels must be >= 1");
    const std::size_t side = img.rows();
    const std::size_t block = std::size_t{1} << levels;
    if (img.rows() != img.cols() || side == 0 || side % block != 0)
        throw std::invalid_argument("dwt2: side must be divisible by 2^levels");

    WaveletPyramid p;
    p.levels = levels;
    p.details.reserve(levels);
    Matrix approx = img;
    for (std::size_t q = 0; q < levels; ++q) {
        Subbands sb = dwt2_level(approx);
        p.details.push_back({std::move(sb.horiz), std::move(sb.vert), std::move(sb.diag)});
        approx = std::move(sb.approx);
    }
    p.approx = std::move(approx);
    return p;
}

Matrix idwt2(const WaveletPyramid& pyramid) {
    if (pyramid.levels == 0 || pyramid.details.size() != pyramid.levels)
        throw std::invalid_argument("idwt2: inconsistent pyramid");
    Matrix approx = pyramid.approx;
    for (std::size_t q = pyramid.levels; q-- > 0;) {
        const auto& [h, v, c] = pyramid.details[q];
        approx = idwt2_level(approx, h, v, c);
    }
    return approx;
}

}  // namespace csae::wavelet
