#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biosim/rng.hpp"

namespace biosim::nn {

/// Fully connected network with tanh hidden layers and a linear output layer.
/// Batches are column-major: one sample per column.
class Mlp {
public:
    struct Layer {
        Eigen::MatrixXd weight;  // out x in
        Eigen::VectorXd bias;    // out
    };

    struct Cache {
        std::vector<Eigen::MatrixXd> inputs;  // input to each layer
    };

    struct Gradients {
        std::vector<Eigen::MatrixXd> weight;
        std::vector<Eigen::VectorXd> bias;

        double squared_norm() const;
        void scale(double s);
    };

    Mlp() = default;
    /// sizes = {input, hidden..., output}; Glorot-uniform weights, zero biases.
    Mlp(const std::vector<int>& sizes, Rng& rng);
    explicit Mlp(std::vector<Layer> layers);

    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Cache& cache) const;
    /// Gradients of a scalar loss given dLoss/dOutput for the cached forward pass.
    Gradients backward(const Cache& cache, const Eigen::MatrixXd& d_output) const;

    int input_size() const { return static_cast<int>(layers_.front().weight.cols()); }
    int output_size() const { return static_cast<int>(layers_.back().weight.rows()); }
    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& layers() { return layers_; }
    bool all_finite() const;

    friend bool operator==(const Mlp& a, const Mlp& b);

private:
    std::vector<Layer> layers_;
};

/// Rescale gradients so their global L2 norm is at most `max_norm` (no-op if max_norm <= 0).
void clip_grad_norm(Mlp::Gradients& g, double max_norm);

class Adam {
public:
    explicit Adam(const Mlp& net, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
    void step(Mlp& net, const Mlp::Gradients& g);

private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    Mlp::Gradients m_, v_;
};

class RmsProp {
public:
    explicit RmsProp(const Mlp& net, double lr, double alpha = 0.99, double eps = 1e-5);
    void step(Mlp& net, const Mlp::Gradients& g);

private:
    double lr_, alpha_, eps_;
    Mlp::Gradients sq_;
};

/// Flat little-endian binary: "BSNN", u32 version (1), u32 layer count, then per
/// layer u32 rows, u32 cols and rows*cols float64 row-major. Each layer block is
/// the weight matrix with the bias appended as its last column (cols = in + 1).
void save_weights(std::ostream& out, const Mlp& net);
Mlp load_weights(std::istream& in);
void save_weights_file(const std::string& path, const Mlp& net);
Mlp load_weights_file(const std::string& path);

}  // namespace biosim::nn
