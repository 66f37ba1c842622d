#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "csae/matrix.hpp"

namespace csae::data {

// Grayscale image set with pixels in [0, 1].
struct Dataset {
    std::vector<Matrix> images;
    std::vector<std::size_t> labels;
    std::size_t n_classes = 0;
    std::string split;   // "train" / "test"

    std::size_t size() const { return images.size(); }
    std::size_t side() const { return images.empty() ? 0 : images.front().rows(); }
    void validate() const;
};

// IDX container parsing (big-endian headers; magic 0x00000803 for 3-D
// unsigned-byte image tensors, 0x00000801 for 1-D label vectors). Pixels are
// scaled by 1/255. Errors report the failing byte offset.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// Writes a matching IDX pair (used by tests and to export fixtures).
void write_idx(const Dataset& ds, const std::string& images_path, const std::string& labels_path);

// Zero-pads equally on all sides; the target-source difference must be even.
Matrix pad_to(const Matrix& img, std::size_t target_side);

// Built-in class templates for the synthetic corpus.
inline constexpr std::size_t kTemplateCount = 8;
// 0 horizontal stripes, 1 vertical stripes, 2 checkerboard, 3 centered disk,
// 4 cross, 5 diagonal band, 6 border frame, 7 horizontal gradient.
Matrix template_image(std::size_t index, std::size_t side);

// Samples = template + Gaussian pixel noise (sd noise_sd), clamped to [0, 1].
// Train split gets per_class samples per class, test split per_class / 2
// (at least 1). Classes use templates 0..n_classes-1.
std::pair<Dataset, Dataset> make_synthetic(std::size_t n_classes, std::size_t per_class,
                                           std::size_t side, double noise_sd,
                                           std::uint64_t seed);

// Same, over an explicit template list (class k uses templates[k]); lets a
// held-out-template set be built through the same path.
std::pair<Dataset, Dataset> make_synthetic(const std::vector<std::size_t>& templates,
                                           std::size_t per_class, std::size_t side,
                                           double noise_sd, std::uint64_t seed);

// Binary PGM (P5), maxval 255; values clamped to [0, 1] then quantized.
void write_pgm(const Matrix& img, const std::string& path);
Matrix read_pgm(const std::string& path);

}  // namespace csae::data
