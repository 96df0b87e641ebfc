#include "biosim/nn.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "biosim/error.hpp"

namespace biosim::nn {

namespace {

constexpr char kMagic[4] = {'B', 'S', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

Mlp::Gradients zeros_like(const Mlp& net) {
    Mlp::Gradients g;
    for (const auto& l : net.layers()) {
        g.weight.push_back(Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()));
        g.bias.push_back(Eigen::VectorXd::Zero(l.bias.size()));
    }
    return g;
}

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw Error("truncated weight file");
    return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64(std::istream& in) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) throw Error("truncated weight file");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace

double Mlp::Gradients::squared_norm() const {
    double s = 0.0;
    for (const auto& w : weight) s += w.squaredNorm();
    for (const auto& b : bias) s += b.squaredNorm();
    return s;
}

void Mlp::Gradients::scale(double s) {
    for (auto& w : weight) w *= s;
    for (auto& b : bias) b *= s;
}

Mlp::Mlp(const std::vector<int>& sizes, Rng& rng) {
    if (sizes.size() < 2) throw Error("network needs at least input and output sizes");
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        const int in = sizes[i], out = sizes[i + 1];
        if (in < 1 || out < 1) throw Error("layer sizes must be positive");
        const double limit = std::sqrt(6.0 / (in + out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        Layer l{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
        for (int r = 0; r < out; ++r)
            for (int c = 0; c < in; ++c) l.weight(r, c) = dist(rng);
        layers_.push_back(std::move(l));
    }
}

Mlp::Mlp(std::vector<Layer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw Error("network has no layers");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (layers_[i].bias.size() != layers_[i].weight.rows()) throw Error("bias size mismatch");
        if (i > 0 && layers_[i].weight.cols() != layers_[i - 1].weight.rows()) throw Error("layer shape mismatch");
    }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd h = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        Eigen::MatrixXd z = (layers_[i].weight * h).colwise() + layers_[i].bias;
        h = i + 1 < layers_.size() ? Eigen::MatrixXd(z.array().tanh()) : z;
    }
    return h;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Cache& cache) const {
    cache.inputs.clear();
    Eigen::MatrixXd h = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        cache.inputs.push_back(h);
        Eigen::MatrixXd z = (layers_[i].weight * h).colwise() + layers_[i].bias;
        h = i + 1 < layers_.size() ? Eigen::MatrixXd(z.array().tanh()) : z;
    }
    return h;
}

Mlp::Gradients Mlp::backward(const Cache& cache, const Eigen::MatrixXd& d_output) const {
    Gradients g = zeros_like(*this);
    Eigen::MatrixXd delta = d_output;
    for (std::size_t k = layers_.size(); k-- > 0;) {
        const Eigen::MatrixXd& in = cache.inputs[k];
        g.weight[k] = delta * in.transpose();
        g.bias[k] = delta.rowwise().sum();
        if (k > 0) {
            // in = tanh(z_{k-1}); d tanh = 1 - tanh^2
            delta = (layers_[k].weight.transpose() * delta).array() * (1.0 - in.array().square());
        }
    }
    return g;
}

bool Mlp::all_finite() const {
    for (const auto& l : layers_) {
        if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
    }
    return true;
}

bool operator==(const Mlp& a, const Mlp& b) {
    if (a.layers_.size() != b.layers_.size()) return false;
    for (std::size_t i = 0; i < a.layers_.size(); ++i) {
        const auto& x = a.layers_[i];
        const auto& y = b.layers_[i];
        if (x.weight.rows() != y.weight.rows() || x.weight.cols() != y.weight.cols()) return false;
        if (x.weight != y.weight || x.bias != y.bias) return false;
    }
    return true;
}

void clip_grad_norm(Mlp::Gradients& g, double max_norm) {
    if (max_norm <= 0.0) return;
    const double norm = std::sqrt(g.squared_norm());
    if (norm > max_norm) g.scale(max_norm / norm);
}

Adam::Adam(const Mlp& net, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(zeros_like(net)), v_(zeros_like(net)) {}

void Adam::step(Mlp& net, const Mlp::Gradients& g) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
        m = beta1_ * m + (1.0 - beta1_) * grad;
        v = beta2_ * v + (1.0 - beta2_) * grad.cwiseProduct(grad);
        param.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
    };
    auto& layers = net.layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
        update(layers[i].weight, g.weight[i], m_.weight[i], v_.weight[i]);
        update(layers[i].bias, g.bias[i], m_.bias[i], v_.bias[i]);
    }
}

RmsProp::RmsProp(const Mlp& net, double lr, double alpha, double eps)
    : lr_(lr), alpha_(alpha), eps_(eps), sq_(zeros_like(net)) {}

void RmsProp::step(Mlp& net, const Mlp::Gradients& g) {
    auto update = [&](auto& param, const auto& grad, auto& sq) {
        sq = alpha_ * sq + (1.0 - alpha_) * grad.cwiseProduct(grad);
        param.array() -= lr_ * grad.array() / (sq.array().sqrt() + eps_);
    };
    auto& layers = net.layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
        update(layers[i].weight, g.weight[i], sq_.weight[i]);
        update(layers[i].bias, g.bias[i], sq_.bias[i]);
    }
}

void save_weights(std::ostream& out, const Mlp& net) {
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(net.layers().size()));
    for (const auto& l : net.layers()) {
        const auto rows = static_cast<std::uint32_t>(l.weight.rows());
        const auto cols = static_cast<std::uint32_t>(l.weight.cols() + 1);
        write_u32(out, rows);
        write_u32(out, cols);
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) write_f64(out, l.weight(r, c));
            write_f64(out, l.bias(r));
        }
    }
    if (!out) throw Error("failed to write weights");
}

Mlp load_weights(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw Error("not a weight file (bad magic)");
    if (const auto v = read_u32(in); v != kVersion) throw Error("unsupported weight file version " + std::to_string(v));
    const std::uint32_t count = read_u32(in);
    if (count == 0 || count > 64) throw Error("implausible layer count in weight file");
    std::vector<Mlp::Layer> layers;
    for (std::uint32_t k = 0; k < count; ++k) {
        const std::uint32_t rows = read_u32(in);
        const std::uint32_t cols = read_u32(in);
        if (rows == 0 || cols < 2 || rows > (1u << 16) || cols > (1u << 16)) throw Error("implausible layer shape");
        Mlp::Layer l{Eigen::MatrixXd(rows, cols - 1), Eigen::VectorXd(rows)};
        for (std::uint32_t r = 0; r < rows; ++r) {
            for (std::uint32_t c = 0; c + 1 < cols; ++c) l.weight(r, c) = read_f64(in);
            l.bias(r) = read_f64(in);
        }
        layers.push_back(std::move(l));
    }
    return Mlp(std::move(layers));
}

void save_weights_file(const std::string& path, const Mlp& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    save_weights(out, net);
}

Mlp load_weights_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    try {
        return load_weights(in);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

}  // namespace biosim::nn
