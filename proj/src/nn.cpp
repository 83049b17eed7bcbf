#include "uavrl/nn.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "uavrl/errors.hpp"
#include "uavrl/kernels.hpp"
#include "uavrl/rng.hpp"

namespace uavrl::nn {

namespace {

bool all_finite(const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(x[i])) return false;
    return true;
}

std::string dims_string(const std::vector<std::size_t>& dims) {
    std::ostringstream os;
    for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "x" : "") << dims[i];
    return os.str();
}

void check_same_topology(const DenseNet& a, const DenseNet& b, const char* what) {
    if (a.dims() != b.dims() || a.head != b.head)
        throw DimensionError(std::string(what) + ": topology mismatch (" +
                             dims_string(a.dims()) + " vs " + dims_string(b.dims()) + ")");
}

} // namespace

std::vector<std::size_t> DenseNet::dims() const {
    std::vector<std::size_t> d;
    if (layers.empty()) return d;
    d.push_back(layers.front().w.cols);
    for (const Layer& l : layers) d.push_back(l.w.rows);
    return d;
}

std::size_t DenseNet::param_count() const {
    std::size_t n = 0;
    for (const Layer& l : layers) n += l.w.v.size() + l.b.size();
    return n;
}

DenseNet init_net(const std::vector<std::size_t>& dims, Head head, std::uint64_t seed) {
    if (dims.size() < 2)
        throw DimensionError("init_net: need at least an input and an output dimension");
    for (std::size_t d : dims)
        if (d == 0) throw DimensionError("init_net: zero-sized layer");

    DenseNet net;
    net.head = head;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Layer layer;
        layer.w = Mat(dims[l + 1], dims[l]);
        layer.b.assign(dims[l + 1], 0.0);
        const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
        for (double& x : layer.w.v) x = rng.uniform(-bound, bound);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

Mat forward_batch(const DenseNet& net, const Mat& x, ForwardCache* cache) {
    if (net.layers.empty()) throw DimensionError("forward: empty network");
    if (x.cols != net.input_dim())
        throw DimensionError("forward: input has " + std::to_string(x.cols) +
                             " columns, network expects " + std::to_string(net.input_dim()));

    const auto& ops = kernels::active();
    const std::size_t batch = x.rows;
    const std::size_t n_layers = net.layers.size();

    if (cache) {
        cache->revision = net.revision;
        cache->dims = net.dims();
        cache->input = x;
        cache->pre.assign(n_layers, Mat());
        cache->act.assign(n_layers > 0 ? n_layers - 1 : 0, Mat());
    }

    Mat current = x;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const Layer& layer = net.layers[l];
        const std::size_t out = layer.w.rows;
        Mat z(batch, out);
        ops.gemm_nt(batch, out, layer.w.cols,
                    current.v.data(), current.cols,
                    layer.w.v.data(), layer.w.cols,
                    z.v.data(), z.cols);
        for (std::size_t i = 0; i < batch; ++i)
            ops.axpy(out, 1.0, layer.b.data(), z.row(i));

        if (cache) cache->pre[l] = z;

        if (l + 1 < n_layers) {
            Mat a(batch, out);
            ops.relu(z.v.size(), z.v.data(), a.v.data());
            if (cache) cache->act[l] = a;
            current = std::move(a);
        } else {
            if (net.head == Head::Tanh)
                for (double& t : z.v) t = std::tanh(t);
            if (cache) cache->output = z;
            current = std::move(z);
        }
    }
    return current;
}

std::vector<double> forward(const DenseNet& net, const std::vector<double>& x,
                            ForwardCache* cache) {
    Mat xm(1, x.size());
    xm.v = x;
    Mat y = forward_batch(net, xm, cache);
    return y.v;
}

Gradients zero_gradients_like(const DenseNet& net) {
    Gradients g;
    for (const Layer& l : net.layers) {
        Layer gl;
        gl.w = Mat(l.w.rows, l.w.cols);
        gl.b.assign(l.b.size(), 0.0);
        g.layers.push_back(std::move(gl));
    }
    return g;
}

Mat backward_batch(const DenseNet& net, const ForwardCache& cache, const Mat& dy,
                   Gradients* grads, const BackwardOptions& opt) {
    if (cache.revision != net.revision || cache.dims != net.dims())
        throw ContractError("backward: cache is stale (parameters changed since forward)");
    if (dy.rows != cache.input.rows || dy.cols != net.output_dim())
        throw DimensionError("backward: output gradient shape mismatch");
    if (opt.param_grads) {
        if (!grads || grads->layers.size() != net.layers.size())
            throw DimensionError("backward: gradient accumulator shape mismatch");
    }

    const auto& ops = kernels::active();
    const std::size_t batch = dy.rows;
    const std::size_t n_layers = net.layers.size();

    Mat dz = dy;
    if (net.head == Head::Tanh) {
        const Mat& y = cache.output;
        for (std::size_t i = 0; i < dz.v.size(); ++i)
            dz.v[i] *= 1.0 - y.v[i] * y.v[i];
    }

    Mat input_grad;
    for (std::size_t l = n_layers; l-- > 0;) {
        const Layer& layer = net.layers[l];
        const Mat& input_act = (l == 0) ? cache.input : cache.act[l - 1];

        if (opt.param_grads) {
            Layer& gl = grads->layers[l];
            ops.gemm_tn(layer.w.rows, layer.w.cols, batch,
                        dz.v.data(), dz.cols,
                        input_act.v.data(), input_act.cols,
                        gl.w.v.data(), gl.w.cols);
            for (std::size_t i = 0; i < batch; ++i)
                ops.axpy(layer.b.size(), 1.0, dz.row(i), gl.b.data());
        }

        const bool need_dx = l > 0 || opt.want_input_grad;
        if (!need_dx) break;

        Mat dx(batch, layer.w.cols);
        ops.gemm_nn(batch, layer.w.cols, layer.w.rows,
                    dz.v.data(), dz.cols,
                    layer.w.v.data(), layer.w.cols,
                    dx.v.data(), dx.cols);
        if (l > 0)
            ops.relu_grad(dx.v.size(), cache.pre[l - 1].v.data(), dx.v.data());
        else
            input_grad = std::move(dx);
        if (l > 0) dz = std::move(dx);
    }
    return input_grad;
}

std::vector<double> backward(const DenseNet& net, const ForwardCache& cache,
                             const std::vector<double>& dy, Gradients* grads) {
    Mat dym(1, dy.size());
    dym.v = dy;
    BackwardOptions opt;
    opt.want_input_grad = true;
    opt.param_grads = grads != nullptr;
    Mat dx = backward_batch(net, cache, dym, grads, opt);
    return dx.v;
}

OptimizerState make_optimizer(const DenseNet& net, double learning_rate, double l2_coeff) {
    OptimizerState opt;
    opt.learning_rate = learning_rate;
    opt.l2_coeff = l2_coeff;
    opt.m = zero_gradients_like(net).layers;
    opt.v = zero_gradients_like(net).layers;
    return opt;
}

void optimize_step(DenseNet& net, const Gradients& grads, OptimizerState& opt) {
    if (grads.layers.size() != net.layers.size() || opt.m.size() != net.layers.size())
        throw DimensionError("optimize_step: shape mismatch");

    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const Layer& g = grads.layers[l];
        if (!all_finite(g.w.v.data(), g.w.v.size()) || !all_finite(g.b.data(), g.b.size()))
            throw NumericError("optimize_step: non-finite gradient in layer " +
                               std::to_string(l));
    }

    ++opt.step_count;
    const double bc1 = 1.0 / (1.0 - std::pow(opt.beta1, static_cast<double>(opt.step_count)));
    const double bc2 = 1.0 / (1.0 - std::pow(opt.beta2, static_cast<double>(opt.step_count)));

    const auto& ops = kernels::active();
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        Layer& p = net.layers[l];
        const Layer& g = grads.layers[l];
        ops.adam(p.w.v.size(), p.w.v.data(), g.w.v.data(),
                 opt.m[l].w.v.data(), opt.v[l].w.v.data(),
                 opt.learning_rate, opt.beta1, opt.beta2, opt.epsilon, opt.l2_coeff,
                 bc1, bc2);
        ops.adam(p.b.size(), p.b.data(), g.b.data(),
                 opt.m[l].b.data(), opt.v[l].b.data(),
                 opt.learning_rate, opt.beta1, opt.beta2, opt.epsilon, opt.l2_coeff,
                 bc1, bc2);
        if (!all_finite(p.w.v.data(), p.w.v.size()) || !all_finite(p.b.data(), p.b.size()))
            throw NumericError("optimize_step: parameters became non-finite in layer " +
                               std::to_string(l));
    }
    ++net.revision;
}

void soft_update(DenseNet& target, const DenseNet& online, double tau) {
    check_same_topology(target, online, "soft_update");
    const auto& ops = kernels::active();
    for (std::size_t l = 0; l < target.layers.size(); ++l) {
        ops.lerp(target.layers[l].w.v.size(), tau,
                 online.layers[l].w.v.data(), target.layers[l].w.v.data());
        ops.lerp(target.layers[l].b.size(), tau,
                 online.layers[l].b.data(), target.layers[l].b.data());
    }
    ++target.revision;
}

nlohmann::json net_to_json(const DenseNet& net) {
    nlohmann::json j;
    j["kind"] = "dense_net";
    j["head"] = net.head == Head::Tanh ? "tanh" : "linear";
    j["dims"] = net.dims();
    nlohmann::json layers = nlohmann::json::array();
    for (const Layer& l : net.layers) {
        nlohmann::json jl;
        jl["rows"] = l.w.rows;
        jl["cols"] = l.w.cols;
        jl["w"] = l.w.v; // row-major, full precision
        jl["b"] = l.b;
        layers.push_back(std::move(jl));
    }
    j["layers"] = std::move(layers);
    return j;
}

DenseNet net_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("kind", "") != "dense_net")
        throw IoError("net_from_json: not a dense_net object");
    DenseNet net;
    const std::string head = j.at("head").get<std::string>();
    if (head == "tanh")
        net.head = Head::Tanh;
    else if (head == "linear")
        net.head = Head::Linear;
    else
        throw IoError("net_from_json: unknown head '" + head + "'");

    std::size_t prev_out = 0;
    for (const auto& jl : j.at("layers")) {
        Layer l;
        l.w.rows = jl.at("rows").get<std::size_t>();
        l.w.cols = jl.at("cols").get<std::size_t>();
        l.w.v = jl.at("w").get<std::vector<double>>();
        l.b = jl.at("b").get<std::vector<double>>();
        if (l.w.v.size() != l.w.rows * l.w.cols || l.b.size() != l.w.rows)
            throw IoError("net_from_json: layer array sizes inconsistent with shape");
        if (prev_out != 0 && l.w.cols != prev_out)
            throw DimensionError("net_from_json: layer dimensions do not chain");
        prev_out = l.w.rows;
        net.layers.push_back(std::move(l));
    }
    if (net.layers.empty()) throw IoError("net_from_json: no layers");
    const auto dims = j.at("dims").get<std::vector<std::size_t>>();
    if (dims != net.dims())
        throw DimensionError("net_from_json: declared dims do not match layer shapes");
    return net;
}

nlohmann::json optimizer_to_json(const OptimizerState& opt) {
    nlohmann::json j;
    j["learning_rate"] = opt.learning_rate;
    j["l2_coeff"] = opt.l2_coeff;
    j["beta1"] = opt.beta1;
    j["beta2"] = opt.beta2;
    j["epsilon"] = opt.epsilon;
    j["step_count"] = opt.step_count;
    auto moments = [](const std::vector<Layer>& ms) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Layer& l : ms) {
            nlohmann::json jl;
            jl["w"] = l.w.v;
            jl["b"] = l.b;
            arr.push_back(std::move(jl));
        }
        return arr;
    };
    j["m"] = moments(opt.m);
    j["v"] = moments(opt.v);
    return j;
}

OptimizerState optimizer_from_json(const nlohmann::json& j, const DenseNet& net) {
    OptimizerState opt = make_optimizer(net, j.at("learning_rate").get<double>(),
                                        j.at("l2_coeff").get<double>());
    opt.beta1 = j.at("beta1").get<double>();
    opt.beta2 = j.at("beta2").get<double>();
    opt.epsilon = j.at("epsilon").get<double>();
    opt.step_count = j.at("step_count").get<std::uint64_t>();
    auto load_moments = [&](const nlohmann::json& arr, std::vector<Layer>& ms) {
        if (arr.size() != ms.size())
            throw DimensionError("optimizer_from_json: moment count mismatch");
        for (std::size_t l = 0; l < ms.size(); ++l) {
            auto w = arr[l].at("w").get<std::vector<double>>();
            auto b = arr[l].at("b").get<std::vector<double>>();
            if (w.size() != ms[l].w.v.size() || b.size() != ms[l].b.size())
                throw DimensionError("optimizer_from_json: moment shape mismatch");
            ms[l].w.v = std::move(w);
            ms[l].b = std::move(b);
        }
    };
    load_moments(j.at("m"), opt.m);
    load_moments(j.at("v"), opt.v);
    return opt;
}

void save_net(const DenseNet& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_net: cannot open " + path + " for writing");
    out << net_to_json(net).dump(2) << '\n';
    if (!out) throw IoError("save_net: write failed for " + path);
}

DenseNet load_net(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_net: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("load_net: " + path + " is not valid JSON: " + e.what());
    }
    return net_from_json(j);
}

} // namespace uavrl::nn
