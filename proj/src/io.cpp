#include "csae/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace csae::io {

std::uint64_t fnv1a64(const void* bytes, std::size_t len, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t centroid_fingerprint(const pedcc::CentroidSet& set) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const std::uint64_t n = set.classes(), d = set.dim();
    h = fnv1a64(&n, sizeof n, h);
    h = fnv1a64(&d, sizeof d, h);
    h = fnv1a64(&set.alpha, sizeof set.alpha, h);
    h = fnv1a64(&set.seed, sizeof set.seed, h);
    h = fnv1a64(set.mu.data(), set.mu.size() * sizeof(double), h);
    return h;
}

namespace {

constexpr char kCentroidMagic[8] = {'C', 'S', 'A', 'E', 'P', 'C', 'C', '1'};
constexpr char kCheckpointMagic[8] = {'C', 'S', 'A', 'E', 'C', 'K', 'P', '1'};
constexpr char kStatsMagic[8] = {'C', 'S', 'A', 'E', 'S', 'T', 'A', '1'};

template <typename T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
    T v;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
        throw std::runtime_error("io: truncated file " + path);
    return v;
}

void put_matrix(std::ofstream& out, const Matrix& m) {
    put<std::uint64_t>(out, m.rows());
    put<std::uint64_t>(out, m.cols());
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
}

Matrix get_matrix(std::ifstream& in, const std::string& path) {
    const auto rows = get<std::uint64_t>(in, path);
    const auto cols = get<std::uint64_t>(in, path);
    Matrix m(rows, cols);
    if (!in.read(reinterpret_cast<char*>(m.data()),
                 static_cast<std::streamsize>(m.size() * sizeof(double))))
        throw std::runtime_error("io: truncated matrix in " + path);
    return m;
}

void put_vector(std::ofstream& out, const std::vector<double>& v) {
    put<std::uint64_t>(out, v.size());
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> get_vector(std::ifstream& in, const std::string& path) {
    const auto len = get<std::uint64_t>(in, path);
    std::vector<double> v(len);
    if (!in.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(len * sizeof(double))))
        throw std::runtime_error("io: truncated vector in " + path);
    return v;
}

void check_magic(std::ifstream& in, const char (&magic)[8], const std::string& path) {
    char buf[8];
    if (!in.read(buf, 8) || std::memcmp(buf, magic, 8) != 0)
        throw std::runtime_error("io: " + path + " has the wrong magic (expected " +
                                 std::string(magic, 8) + ")");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("io: cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("io: cannot open " + path);
    return in;
}

}  // namespace

void save_centroids(const pedcc::CentroidSet& set, const std::string& path) {
    auto out = open_out(path);
    out.write(kCentroidMagic, 8);
    put<std::uint32_t>(out, 1);
    put<std::uint64_t>(out, set.classes());
    put<std::uint64_t>(out, set.dim());
    put(out, set.alpha);
    put(out, set.seed);
    out.write(reinterpret_cast<const char*>(set.mu.data()),
              static_cast<std::streamsize>(set.mu.size() * sizeof(double)));
    if (!out) throw std::runtime_error("io: write failed for " + path);
}

pedcc::CentroidSet load_centroids(const std::string& path) {
    auto in = open_in(path);
    check_magic(in, kCentroidMagic, path);
    const auto version = get<std::uint32_t>(in, path);
    if (version != 1)
        throw std::runtime_error("io: unsupported centroid file version " +
                                 std::to_string(version));
    const auto n = get<std::uint64_t>(in, path);
    const auto d = get<std::uint64_t>(in, path);
    pedcc::CentroidSet set;
    set.alpha = get<double>(in, path);
    set.seed = get<std::uint64_t>(in, path);
    set.mu = Matrix(n, d);
    if (!in.read(reinterpret_cast<char*>(set.mu.data()),
                 static_cast<std::streamsize>(set.mu.size() * sizeof(double))))
        throw std::runtime_error("io: truncated centroid matrix in " + path);
    return set;
}

void write_matrix_csv(const Matrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot write " + path);
    out.precision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

void write_distance_csv(const Matrix& dist, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot write " + path);
    char buf[32];
    for (std::size_t i = 0; i < dist.rows(); ++i) {
        for (std::size_t j = 0; j < dist.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.4f", dist(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
}

void write_metrics_csv(const trainer::Metrics& metrics, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("io: cannot write " + path);
    out << "epoch,loss1,loss2,total,test_accuracy,test_mse\n";
    out.precision(10);
    for (const auto& r : metrics.rows) {
        out << r.epoch << ',' << r.loss1 << ',' << r.loss2 << ',' << r.total << ',';
        if (r.has_eval)
            out << r.test_accuracy << ',' << r.test_mse;
        else
            out << ',';
        out << '\n';
    }
}

namespace {

void put_spec(std::ofstream& out, const std::vector<net::LayerSpec>& spec) {
    put<std::uint64_t>(out, spec.size());
    for (const auto& l : spec) {
        put<std::uint8_t>(out, l.kind == net::LayerKind::affine ? 0 : 1);
        put<std::uint64_t>(out, l.in_dim);
        put<std::uint64_t>(out, l.out_dim);
    }
}

std::vector<net::LayerSpec> get_spec(std::ifstream& in, const std::string& path) {
    const auto count = get<std::uint64_t>(in, path);
    std::vector<net::LayerSpec> spec(count);
    for (auto& l : spec) {
        l.kind = get<std::uint8_t>(in, path) == 0 ? net::LayerKind::affine : net::LayerKind::relu;
        l.in_dim = get<std::uint64_t>(in, path);
        l.out_dim = get<std::uint64_t>(in, path);
    }
    return spec;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    auto out = open_out(path);
    out.write(kCheckpointMagic, 8);
    put<std::uint32_t>(out, 1);
    put_spec(out, ckpt.network.encoder_spec());
    put_spec(out, ckpt.network.decoder_spec());
    put<std::uint64_t>(out, ckpt.network.params().size());
    for (const auto& p : ckpt.network.params()) {
        put_matrix(out, p.weight);
        put_vector(out, p.bias);
        put_matrix(out, p.weight_vel);
        put_vector(out, p.bias_vel);
    }
    put<std::uint64_t>(out, ckpt.epoch);
    put<std::uint64_t>(out, ckpt.side);
    put(out, ckpt.centroid_fp);

    const trainer::TrainConfig& c = ckpt.config;
    put(out, c.optimizer.lr0);
    put(out, c.optimizer.momentum);
    put(out, c.optimizer.weight_decay);
    put<std::uint64_t>(out, c.optimizer.epochs);
    put<std::uint64_t>(out, c.optimizer.decay_every);
    put(out, c.optimizer.decay_factor);
    put(out, c.loss_weights.approx_weight);
    put(out, c.loss_weights.horiz_weight);
    put(out, c.loss_weights.vert_weight);
    put(out, c.loss_weights.diag_weight);
    put<std::uint64_t>(out, c.loss_weights.levels);
    put(out, c.loss_weights.recon_scale);
    put(out, c.beta);
    put<std::uint64_t>(out, c.batch_size);
    put<std::uint64_t>(out, c.eval_every);
    put(out, c.seed);
    put<std::uint64_t>(out, c.encoder_hidden.size());
    for (std::size_t h : c.encoder_hidden) put<std::uint64_t>(out, h);
    put<std::uint64_t>(out, c.decoder_hidden.size());
    for (std::size_t h : c.decoder_hidden) put<std::uint64_t>(out, h);
    if (!out) throw std::runtime_error("io: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    auto in = open_in(path);
    check_magic(in, kCheckpointMagic, path);
    const auto version = get<std::uint32_t>(in, path);
    if (version != 1)
        throw std::runtime_error("io: unsupported checkpoint version " + std::to_string(version));

    Checkpoint ckpt;
    const auto enc_spec = get_spec(in, path);
    const auto dec_spec = get_spec(in, path);
    ckpt.network = net::Network::init(enc_spec, dec_spec, 0);
    const auto pcount = get<std::uint64_t>(in, path);
    if (pcount != ckpt.network.params().size())
        throw std::runtime_error("io: checkpoint parameter count mismatch in " + path);
    for (auto& p : ckpt.network.params()) {
        p.weight = get_matrix(in, path);
        p.bias = get_vector(in, path);
        p.weight_vel = get_matrix(in, path);
        p.bias_vel = get_vector(in, path);
    }
    ckpt.epoch = get<std::uint64_t>(in, path);
    ckpt.side = get<std::uint64_t>(in, path);
    ckpt.centroid_fp = get<std::uint64_t>(in, path);

    trainer::TrainConfig& c = ckpt.config;
    c.optimizer.lr0 = get<double>(in, path);
    c.optimizer.momentum = get<double>(in, path);
    c.optimizer.weight_decay = get<double>(in, path);
    c.optimizer.epochs = get<std::uint64_t>(in, path);
    c.optimizer.decay_every = get<std::uint64_t>(in, path);
    c.optimizer.decay_factor = get<double>(in, path);
    c.loss_weights.approx_weight = get<double>(in, path);
    c.loss_weights.horiz_weight = get<double>(in, path);
    c.loss_weights.vert_weight = get<double>(in, path);
    c.loss_weights.diag_weight = get<double>(in, path);
    c.loss_weights.levels = get<std::uint64_t>(in, path);
    c.loss_weights.recon_scale = get<double>(in, path);
    c.beta = get<double>(in, path);
    c.batch_size = get<std::uint64_t>(in, path);
    c.eval_every = get<std::uint64_t>(in, path);
    c.seed = get<std::uint64_t>(in, path);
    c.encoder_hidden.resize(get<std::uint64_t>(in, path));
    for (auto& h : c.encoder_hidden) h = get<std::uint64_t>(in, path);
    c.decoder_hidden.resize(get<std::uint64_t>(in, path));
    for (auto& h : c.decoder_hidden) h = get<std::uint64_t>(in, path);
    return ckpt;
}

void save_class_stats(const latent::ClassStats& stats, const std::string& path) {
    auto out = open_out(path);
    out.write(kStatsMagic, 8);
    put<std::uint32_t>(out, 1);
    put<std::uint64_t>(out, stats.n_classes);
    put<std::uint64_t>(out, stats.dim);
    put(out, stats.delta);
    for (std::size_t k = 0; k < stats.n_classes; ++k) {
        put_vector(out, stats.means[k]);
        put_matrix(out, stats.covariances[k]);
        put_matrix(out, stats.factors[k]);
    }
    if (!out) throw std::runtime_error("io: write failed for " + path);
}

latent::ClassStats load_class_stats(const std::string& path) {
    auto in = open_in(path);
    check_magic(in, kStatsMagic, path);
    const auto version = get<std::uint32_t>(in, path);
    if (version != 1)
        throw std::runtime_error("io: unsupported stats version " + std::to_string(version));
    latent::ClassStats stats;
    stats.n_classes = get<std::uint64_t>(in, path);
    stats.dim = get<std::uint64_t>(in, path);
    stats.delta = get<double>(in, path);
    for (std::size_t k = 0; k < stats.n_classes; ++k) {
        stats.means.push_back(get_vector(in, path));
        stats.covariances.push_back(get_matrix(in, path));
        stats.factors.push_back(get_matrix(in, path));
    }
    return stats;
}

namespace {

std::vector<std::size_t> parse_size_list(const std::string& value, const std::string& key) {
    std::vector<std::size_t> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoul(item));
        } catch (const std::exception&) {
            throw std::runtime_error("config: bad value for " + key + ": '" + item + "'");
        }
    }
    if (out.empty()) throw std::runtime_error("config: empty list for " + key);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

trainer::TrainConfig load_train_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    trainer::TrainConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "epochs") cfg.optimizer.epochs = std::stoul(value);
            else if (key == "batch_size") cfg.batch_size = std::stoul(value);
            else if (key == "lr0") cfg.optimizer.lr0 = std::stod(value);
            else if (key == "momentum") cfg.optimizer.momentum = std::stod(value);
            else if (key == "weight_decay") cfg.optimizer.weight_decay = std::stod(value);
            else if (key == "decay_every") cfg.optimizer.decay_every = std::stoul(value);
            else if (key == "decay_factor") cfg.optimizer.decay_factor = std::stod(value);
            else if (key == "beta") cfg.beta = std::stod(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "eval_every") cfg.eval_every = std::stoul(value);
            else if (key == "lambda1") cfg.loss_weights.approx_weight = std::stod(value);
            else if (key == "lambda2") cfg.loss_weights.horiz_weight = std::stod(value);
            else if (key == "lambda3") cfg.loss_weights.vert_weight = std::stod(value);
            else if (key == "lambda4") cfg.loss_weights.diag_weight = std::stod(value);
            else if (key == "levels") cfg.loss_weights.levels = std::stoul(value);
            else if (key == "recon_scale") cfg.loss_weights.recon_scale = std::stod(value);
            else if (key == "encoder_hidden") cfg.encoder_hidden = parse_size_list(value, key);
            else if (key == "decoder_hidden") cfg.decoder_hidden = parse_size_list(value, key);
            else
                throw std::runtime_error("config: unknown key '" + key + "' at line " +
                                         std::to_string(lineno));
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("config: bad value for " + key + " at line " +
                                     std::to_string(lineno));
        }
    }
    return cfg;
}

}  // namespace csae::io
