#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

// Minimal dense-network core: batched forward, exact reverse-mode gradients,
// adaptive-moment optimizer with L2 regularization, soft target updates, and
// full-precision checkpointing. Double precision throughout; all heavy loops
// go through the kernels layer.

namespace uavrl::nn {

struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> v;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}

    double* row(std::size_t i) { return v.data() + i * cols; }
    const double* row(std::size_t i) const { return v.data() + i * cols; }
    double& at(std::size_t i, std::size_t j) { return v[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
};

enum class Head { Linear, Tanh };

struct Layer {
    Mat w;                 // out x in
    std::vector<double> b; // out
};

struct DenseNet {
    Head head = Head::Linear;
    std::vector<Layer> layers;
    std::uint64_t revision = 0; // bumped on every parameter mutation

    std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().w.cols; }
    std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().w.rows; }
    std::vector<std::size_t> dims() const;
    std::size_t param_count() const;
};

// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero,
// deterministic per seed. dims = [input, hidden..., output].
DenseNet init_net(const std::vector<std::size_t>& dims, Head head, std::uint64_t seed);

struct ForwardCache {
    std::uint64_t revision = 0;
    std::vector<std::size_t> dims;
    Mat input;
    std::vector<Mat> pre; // per layer pre-activations
    std::vector<Mat> act; // per hidden layer rectified activations
    Mat output;
};

// X is batch-major (rows are samples). Cache, when given, is filled for a
// later backward pass.
Mat forward_batch(const DenseNet& net, const Mat& x, ForwardCache* cache = nullptr);
std::vector<double> forward(const DenseNet& net, const std::vector<double>& x,
                            ForwardCache* cache = nullptr);

struct Gradients {
    std::vector<Layer> layers; // same shapes as the net
};
Gradients zero_gradients_like(const DenseNet& net);

struct BackwardOptions {
    bool want_input_grad = false;
    bool param_grads = true;
};

// Exact reverse-mode gradients of sum_batch(output . dy) with respect to
// every parameter (accumulated into grads, summed over the batch) and,
// when requested, the input. The cache must come from a matching forward
// on the same parameter revision.
Mat backward_batch(const DenseNet& net, const ForwardCache& cache, const Mat& dy,
                   Gradients* grads, const BackwardOptions& opt = {});

// Single-sample convenience: returns the input gradient.
std::vector<double> backward(const DenseNet& net, const ForwardCache& cache,
                             const std::vector<double>& dy, Gradients* grads);

struct OptimizerState {
    double learning_rate = 1e-4;
    double l2_coeff = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t step_count = 0;
    std::vector<Layer> m; // first moments, shaped like the parameters
    std::vector<Layer> v; // second moments
};

OptimizerState make_optimizer(const DenseNet& net, double learning_rate, double l2_coeff);

// One bias-corrected adaptive-moment step; the effective gradient includes
// l2_coeff * parameter. Throws NumericError on non-finite gradients or if a
// parameter would become non-finite.
void optimize_step(DenseNet& net, const Gradients& grads, OptimizerState& opt);

// target <- tau * online + (1 - tau) * target, parameter-wise.
void soft_update(DenseNet& target, const DenseNet& online, double tau);

nlohmann::json net_to_json(const DenseNet& net);
DenseNet net_from_json(const nlohmann::json& j);
nlohmann::json optimizer_to_json(const OptimizerState& opt);
OptimizerState optimizer_from_json(const nlohmann::json& j, const DenseNet& net);

void save_net(const DenseNet& net, const std::string& path);
DenseNet load_net(const std::string& path);

} // namespace uavrl::nn
