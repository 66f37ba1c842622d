#include "csae/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "csae/rng.hpp"

namespace csae::data {

void Dataset::validate() const {
    if (images.size() != labels.size())
        throw std::invalid_argument("dataset: images/labels length mismatch");
    const std::size_t s = side();
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].rows() != s || images[i].cols() != s)
            throw std::invalid_argument("dataset: inconsistent image shape at index " +
                                        std::to_string(i));
        for (std::size_t p = 0; p < images[i].size(); ++p) {
            const double v = images[i].data()[p];
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("dataset: pixel out of [0,1] at image " +
                                            std::to_string(i));
        }
        if (labels[i] >= n_classes)
            throw std::invalid_argument("dataset: label out of range at index " +
                                        std::to_string(i));
    }
}

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::ifstream& in, const std::string& path, std::size_t offset) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw std::runtime_error("idx: truncated header in " + path + " at byte offset " +
                                 std::to_string(offset));
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void write_be32(std::ofstream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw std::runtime_error("idx: cannot open " + images_path);
    const std::uint32_t magic = read_be32(img, images_path, 0);
    if (magic != kImageMagic)
        throw std::runtime_error("idx: bad image magic 0x" + std::to_string(magic) + " in " +
                                 images_path + " at byte offset 0 (expected 0x00000803)");
    const std::uint32_t count = read_be32(img, images_path, 4);
    const std::uint32_t rows = read_be32(img, images_path, 8);
    const std::uint32_t cols = read_be32(img, images_path, 12);

    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw std::runtime_error("idx: cannot open " + labels_path);
    const std::uint32_t lmagic = read_be32(lab, labels_path, 0);
    if (lmagic != kLabelMagic)
        throw std::runtime_error("idx: bad label magic 0x" + std::to_string(lmagic) + " in " +
                                 labels_path + " at byte offset 0 (expected 0x00000801)");
    const std::uint32_t lcount = read_be32(lab, labels_path, 4);
    if (lcount != count)
        throw std::runtime_error("idx: image/label count mismatch (" + std::to_string(count) +
                                 " images vs " + std::to_string(lcount) + " labels)");

    Dataset ds;
    ds.images.reserve(count);
    ds.labels.reserve(count);
    std::vector<unsigned char> buf(static_cast<std::size_t>(rows) * cols);
    for (std::uint32_t i = 0; i < count; ++i) {
        if (!img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
            throw std::runtime_error("idx: truncated image payload in " + images_path +
                                     " at byte offset " +
                                     std::to_string(16 + std::size_t(i) * buf.size()));
        Matrix m(rows, cols);
        for (std::size_t p = 0; p < buf.size(); ++p) m.data()[p] = buf[p] / 255.0;
        ds.images.push_back(std::move(m));

        unsigned char l;
        if (!lab.read(reinterpret_cast<char*>(&l), 1))
            throw std::runtime_error("idx: truncated label payload in " + labels_path +
                                     " at byte offset " + std::to_string(8 + i));
        ds.labels.push_back(l);
    }
    ds.n_classes = ds.labels.empty() ? 0 : *std::max_element(ds.labels.begin(), ds.labels.end()) + 1;
    ds.split = "idx";
    ds.validate();
    return ds;
}

void write_idx(const Dataset& ds, const std::string& images_path, const std::string& labels_path) {
    const std::size_t side = ds.side();
    std::ofstream img(images_path, std::ios::binary);
    if (!img) throw std::runtime_error("idx: cannot write " + images_path);
    write_be32(img, kImageMagic);
    write_be32(img, static_cast<std::uint32_t>(ds.size()));
    write_be32(img, static_cast<std::uint32_t>(side));
    write_be32(img, static_cast<std::uint32_t>(side));
    for (const Matrix& m : ds.images)
        for (std::size_t p = 0; p < m.size(); ++p) {
            const double v = std::clamp(m.data()[p], 0.0, 1.0);
            const unsigned char b = static_cast<unsigned char>(std::lround(v * 255.0));
            img.write(reinterpret_cast<const char*>(&b), 1);
        }

    std::ofstream lab(labels_path, std::ios::binary);
    if (!lab) throw std::runtime_error("idx: cannot write " + labels_path);
    write_be32(lab, kLabelMagic);
    write_be32(lab, static_cast<std::uint32_t>(ds.size()));
    for (std::size_t l : ds.labels) {
        const unsigned char b = static_cast<unsigned char>(l);
        lab.write(reinterpret_cast<const char*>(&b), 1);
    }
}

Matrix pad_to(const Matrix& img, std::size_t target_side) {
    if (img.rows() != img.cols()) throw std::invalid_argument("pad_to: image must be square");
    if (target_side < img.rows())
        throw std::invalid_argument("pad_to: target smaller than source");
    const std::size_t diff = target_side - img.rows();
    if (diff % 2 != 0) throw std::invalid_argument("pad_to: side difference must be even");
    const std::size_t off = diff / 2;
    Matrix out(target_side, target_side);
    for (std::size_t i = 0; i < img.rows(); ++i)
        for (std::size_t j = 0; j < img.cols(); ++j) out(i + off, j + off) = img(i, j);
    return out;
}

Matrix template_image(std::size_t index, std::size_t side) {
    if (index >= kTemplateCount)
        throw std::invalid_argument("template_image: index must be < " +
                                    std::to_string(kTemplateCount));
    if (side < 8) throw std::invalid_argument("template_image: side must be >= 8");
    Matrix t(side, side);
    const double center = (side - 1) / 2.0;
    const std::size_t band = std::max<std::size_t>(1, side / 8);
    const std::size_t arm = side / 4;
    const std::size_t lo = (side - arm) / 2, hi = lo + arm;
    for (std::size_t r = 0; r < side; ++r)
        for (std::size_t c = 0; c < side; ++c) {
            double v = 0.0;
            switch (index) {
                case 0: v = ((r / 2) % 2 == 0) ? 1.0 : 0.0; break;
                case 1: v = ((c / 2) % 2 == 0) ? 1.0 : 0.0; break;
                case 2: v = (((r / 2) + (c / 2)) % 2 == 0) ? 1.0 : 0.0; break;
                case 3: {
                    const double dr = r - center, dc = c - center;
                    v = (dr * dr + dc * dc <= 0.35 * side * 0.35 * side) ? 1.0 : 0.0;
                    break;
                }
                case 4: v = ((r >= lo && r < hi) || (c >= lo && c < hi)) ? 1.0 : 0.0; break;
                case 5: {
                    const double diff = r > c ? double(r - c) : double(c - r);
                    v = diff <= double(band) ? 1.0 : 0.0;
                    break;
                }
                case 6:
                    v = (r < band || r >= side - band || c < band || c >= side - band) ? 1.0 : 0.0;
                    break;
                case 7: v = double(c) / double(side - 1); break;
            }
            t(r, c) = v;
        }
    return t;
}

namespace {

Dataset synth_split(const std::vector<std::size_t>& templates, std::size_t per_class,
                    std::size_t side, double noise_sd, Rng& rng, const char* split) {
    Dataset ds;
    ds.n_classes = templates.size();
    ds.split = split;
    for (std::size_t k = 0; k < templates.size(); ++k) {
        const Matrix t = template_image(templates[k], side);
        for (std::size_t s = 0; s < per_class; ++s) {
            Matrix img = t;
            if (noise_sd > 0)
                for (std::size_t p = 0; p < img.size(); ++p)
                    img.data()[p] =
                        std::clamp(img.data()[p] + noise_sd * rng.gaussian(), 0.0, 1.0);
            ds.images.push_back(std::move(img));
            ds.labels.push_back(k);
        }
    }
    return ds;
}

}  // namespace

std::pair<Dataset, Dataset> make_synthetic(const std::vector<std::size_t>& templates,
                                           std::size_t per_class, std::size_t side,
                                           double noise_sd, std::uint64_t seed) {
    if (templates.empty()) throw std::invalid_argument("make_synthetic: no templates given");
    for (std::size_t t : templates)
        if (t >= kTemplateCount)
            throw std::invalid_argument("make_synthetic: template index out of range");
    if (per_class == 0) throw std::invalid_argument("make_synthetic: per_class must be >= 1");
    if (noise_sd < 0) throw std::invalid_argument("make_synthetic: noise_sd must be >= 0");

    Rng rng(seed);
    Rng train_rng = rng.fork();
    Rng test_rng = rng.fork();
    const std::size_t per_test = std::max<std::size_t>(1, per_class / 2);
    Dataset train = synth_split(templates, per_class, side, noise_sd, train_rng, "train");
    Dataset test = synth_split(templates, per_test, side, noise_sd, test_rng, "test");
    train.validate();
    test.validate();
    return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> make_synthetic(std::size_t n_classes, std::size_t per_class,
                                           std::size_t side, double noise_sd,
                                           std::uint64_t seed) {
    if (n_classes == 0 || n_classes > kTemplateCount)
        throw std::invalid_argument("make_synthetic: n_classes must be in [1, " +
                                    std::to_string(kTemplateCount) + "]");
    std::vector<std::size_t> templates(n_classes);
    for (std::size_t i = 0; i < n_classes; ++i) templates[i] = i;
    return make_synthetic(templates, per_class, side, noise_sd, seed);
}

void write_pgm(const Matrix& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("pgm: cannot write " + path);
    out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
    for (std::size_t p = 0; p < img.size(); ++p) {
        const double v = std::clamp(img.data()[p], 0.0, 1.0);
        const unsigned char b = static_cast<unsigned char>(std::lround(v * 255.0));
        out.write(reinterpret_cast<const char*>(&b), 1);
    }
    if (!out) throw std::runtime_error("pgm: write failed for " + path);
}

Matrix read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("pgm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5") throw std::runtime_error("pgm: " + path + " is not binary PGM (P5)");
    std::size_t cols = 0, rows = 0, maxval = 0;
    in >> cols >> rows >> maxval;
    if (!in || cols == 0 || rows == 0 || maxval == 0 || maxval > 255)
        throw std::runtime_error("pgm: bad header in " + path);
    in.get();  // single whitespace after maxval
    Matrix img(rows, cols);
    std::vector<unsigned char> buf(rows * cols);
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
        throw std::runtime_error("pgm: truncated payload in " + path);
    for (std::size_t p = 0; p < buf.size(); ++p)
        img.data()[p] = buf[p] / static_cast<double>(maxval);
    return img;
}

}  // namespace csae::data
