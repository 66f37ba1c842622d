#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "csae/matrix.hpp"

namespace csae::wavelet {

// One analysis level: approximation plus horizontal/vertical/diagonal detail,
// each of half the input side.
struct Subbands {
    Matrix approx;
    Matrix horiz;
    Matrix vert;
    Matrix diag;
};

// J-level decomposition. details[q-1] holds the level-q (h, v, c) triple of
// side m / 2^q; approx has side m / 2^J.
struct WaveletPyramid {
    std::size_t levels = 0;
    Matrix approx;
    std::vector<std::array<Matrix, 3>> details;
};

// Orthonormal Haar analysis over non-overlapping 2x2 blocks [[a,b],[c,d]]:
//   approx = (a+b+c+d)/2, horiz = (a+b-c-d)/2,
//   vert   = (a-b+c-d)/2, diag  = (a-b-c+d)/2.
// Requires an even side. Orthonormality gives exact energy conservation.
Subbands dwt2_level(const Matrix& img);

// Exact inverse of dwt2_level (the transform is orthogonal, so this is also
// the adjoint used to pull subband gradients back to pixel space).
Matrix idwt2_level(const Matrix& approx, const Matrix& horiz, const Matrix& vert,
                   const Matrix& diag);
Matrix idwt2_level(const Subbands& sb);

// Recursive analysis of the approximation, J times. Side must divide by 2^J.
WaveletPyramid dwt2(const Matrix& img, std::size_t levels);

// Full synthesis back to the original side.
Matrix idwt2(const WaveletPyramid& pyramid);

}  // namespace csae::wavelet
