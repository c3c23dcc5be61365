#include "fincast/lstm.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <numeric>

#include "fincast/crc32.hpp"
#include "fincast/errors.hpp"

namespace fincast::lstm {

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

LstmLayerWeights alloc_layer(int input_dim, int hidden_dim) {
    LstmLayerWeights layer;
    layer.input_dim = input_dim;
    layer.hidden_dim = hidden_dim;
    for (int g = 0; g < 4; ++g) {
        layer.w[g].assign(static_cast<std::size_t>(hidden_dim) * input_dim, 0.0);
        layer.u[g].assign(static_cast<std::size_t>(hidden_dim) * hidden_dim, 0.0);
        layer.b[g].assign(static_cast<std::size_t>(hidden_dim), 0.0);
    }
    return layer;
}

void glorot_fill(Rng& rng, std::vector<double>& m, int fan_in, int fan_out) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& v : m) v = rng.uniform(-limit, limit);
}

/// Per-step activations kept for backpropagation through time.
struct LayerCache {
    int steps = 0;
    std::vector<std::vector<double>> x;
    std::vector<std::vector<double>> h;
    std::vector<std::vector<double>> c;
    std::array<std::vector<std::vector<double>>, 4> gate;  // activated i,f,g,o
    std::vector<std::vector<double>> tanh_c;

    void reset(int t_steps, int input_dim, int hidden_dim) {
        steps = t_steps;
        x.assign(steps, std::vector<double>(input_dim, 0.0));
        h.assign(steps, std::vector<double>(hidden_dim, 0.0));
        c.assign(steps, std::vector<double>(hidden_dim, 0.0));
        for (auto& g : gate) g.assign(steps, std::vector<double>(hidden_dim, 0.0));
        tanh_c.assign(steps, std::vector<double>(hidden_dim, 0.0));
    }
};

void layer_run(const LstmLayerWeights& layer, const std::vector<std::vector<double>>& inputs,
               LayerCache& cache) {
    const int h = layer.hidden_dim;
    const int in = layer.input_dim;
    const int steps = static_cast<int>(inputs.size());
    cache.reset(steps, in, h);

    std::vector<double> h_prev(h, 0.0);
    std::vector<double> c_prev(h, 0.0);
    std::array<std::vector<double>, 4> pre;
    for (auto& p : pre) p.assign(h, 0.0);

    for (int t = 0; t < steps; ++t) {
        const auto& x = inputs[t];
        if (static_cast<int>(x.size()) != in)
            throw ShapeError("lstm layer: input width does not match input_dim");
        cache.x[t] = x;

        for (int g = 0; g < 4; ++g) {
            const double* wrow = layer.w[g].data();
            const double* urow = layer.u[g].data();
            for (int i = 0; i < h; ++i) {
                double acc = layer.b[g][i];
                for (int j = 0; j < in; ++j) acc += wrow[i * in + j] * x[j];
                for (int j = 0; j < h; ++j) acc += urow[i * h + j] * h_prev[j];
                pre[g][i] = acc;
            }
        }
        for (int i = 0; i < h; ++i) {
            const double gi = sigmoid(pre[kInput][i]);
            const double gf = sigmoid(pre[kForget][i]);
            const double gc = std::tanh(pre[kCell][i]);
            const double go = sigmoid(pre[kOutput][i]);
            const double c = gf * c_prev[i] + gi * gc;
            const double tc = std::tanh(c);
            cache.gate[kInput][t][i] = gi;
            cache.gate[kForget][t][i] = gf;
            cache.gate[kCell][t][i] = gc;
            cache.gate[kOutput][t][i] = go;
            cache.c[t][i] = c;
            cache.tanh_c[t][i] = tc;
            cache.h[t][i] = go * tc;
        }
        h_prev = cache.h[t];
        c_prev = cache.c[t];
    }
}

/// Reverse pass over one layer. `d_h` carries the upstream gradient on every
/// step's hidden output; gradients accumulate into `grads`; `d_x`, when
/// non-null, receives the gradient on the layer inputs.
void layer_backward(const LstmLayerWeights& layer, const LayerCache& cache,
                    const std::vector<std::vector<double>>& d_h, LstmLayerWeights& grads,
                    std::vector<std::vector<double>>* d_x) {
    const int h = layer.hidden_dim;
    const int in = layer.input_dim;
    const int steps = cache.steps;

    std::vector<double> dh_next(h, 0.0);
    std::vector<double> dc_next(h, 0.0);
    std::array<std::vector<double>, 4> da;
    for (auto& a : da) a.assign(h, 0.0);
    if (d_x) d_x->assign(steps, std::vector<double>(in, 0.0));

    for (int t = steps - 1; t >= 0; --t) {
        for (int i = 0; i < h; ++i) {
            const double dh = d_h[t][i] + dh_next[i];
            const double gi = cache.gate[kInput][t][i];
            const double gf = cache.gate[kForget][t][i];
            const double gc = cache.gate[kCell][t][i];
            const double go = cache.gate[kOutput][t][i];
            const double tc = cache.tanh_c[t][i];
            const double c_prev = t > 0 ? cache.c[t - 1][i] : 0.0;

            const double d_o = dh * tc;
            const double dc = dc_next[i] + dh * go * (1.0 - tc * tc);
            const double d_i = dc * gc;
            const double d_g = dc * gi;
            const double d_f = dc * c_prev;
            dc_next[i] = dc * gf;

            da[kInput][i] = d_i * gi * (1.0 - gi);
            da[kForget][i] = d_f * gf * (1.0 - gf);
            da[kCell][i] = d_g * (1.0 - gc * gc);
            da[kOutput][i] = d_o * go * (1.0 - go);
        }

        const auto& x = cache.x[t];
        const std::vector<double>* h_prev = t > 0 ? &cache.h[t - 1] : nullptr;
        std::fill(dh_next.begin(), dh_next.end(), 0.0);
        for (int g = 0; g < 4; ++g) {
            const double* wrow = layer.w[g].data();
            const double* urow = layer.u[g].data();
            double* gw = grads.w[g].data();
            double* gu = grads.u[g].data();
            for (int i = 0; i < h; ++i) {
                const double a = da[g][i];
                for (int j = 0; j < in; ++j) gw[i * in + j] += a * x[j];
                if (h_prev)
                    for (int j = 0; j < h; ++j) gu[i * h + j] += a * (*h_prev)[j];
                grads.b[g][i] += a;
                for (int j = 0; j < h; ++j) dh_next[j] += urow[i * h + j] * a;
                if (d_x)
                    for (int j = 0; j < in; ++j) (*d_x)[t][j] += wrow[i * in + j] * a;
            }
        }
    }
}

void check_network(const LstmNetwork& net) {
    if (net.layer2.input_dim != net.layer1.hidden_dim)
        throw ShapeError("lstm: layer2 input_dim must equal layer1 hidden_dim");
    if (static_cast<int>(net.dense_w.size()) != net.layer2.hidden_dim)
        throw ShapeError("lstm: dense width must equal layer2 hidden_dim");
}

void check_mask(const LstmNetwork& net, const DropoutMask& mask, int steps) {
    if (static_cast<int>(mask.layer1_seq.size()) != steps ||
        (steps > 0 &&
         static_cast<int>(mask.layer1_seq[0].size()) != net.layer1.hidden_dim) ||
        static_cast<int>(mask.layer2_out.size()) != net.layer2.hidden_dim)
        throw ShapeError("lstm: dropout mask shape does not match network");
}

/// Forward pass with full caches; shared by inference and training paths.
struct ForwardWork {
    LayerCache l1, l2;
    std::vector<std::vector<double>> x2;  // layer1 output after dropout
    std::vector<double> h2_dropped;
    double prediction = 0.0;
};

void forward_cached(const LstmNetwork& net, std::span<const double> window,
                    const DropoutMask* mask, ForwardWork& work) {
    check_network(net);
    if (static_cast<int>(window.size()) != net.lookback)
        throw ShapeError("lstm forward: window length " + std::to_string(window.size()) +
                         " does not match lookback " + std::to_string(net.lookback));
    const int steps = static_cast<int>(window.size());
    if (mask) check_mask(net, *mask, steps);

    std::vector<std::vector<double>> inputs(steps, std::vector<double>(net.layer1.input_dim, 0.0));
    if (net.layer1.input_dim != 1)
        throw ShapeError("lstm forward: scalar windows require input_dim 1");
    for (int t = 0; t < steps; ++t) inputs[t][0] = window[t];

    layer_run(net.layer1, inputs, work.l1);

    work.x2 = work.l1.h;
    if (mask)
        for (int t = 0; t < steps; ++t)
            for (int i = 0; i < net.layer1.hidden_dim; ++i)
                work.x2[t][i] *= mask->layer1_seq[t][i];

    layer_run(net.layer2, work.x2, work.l2);

    work.h2_dropped = work.l2.h.back();
    if (mask)
        for (int i = 0; i < net.layer2.hidden_dim; ++i)
            work.h2_dropped[i] *= mask->layer2_out[i];

    double y = net.dense_b;
    for (int i = 0; i < net.layer2.hidden_dim; ++i) y += net.dense_w[i] * work.h2_dropped[i];
    work.prediction = y;
}

NetworkGradients alloc_grads(const LstmNetwork& net) {
    NetworkGradients g;
    g.layer1 = alloc_layer(net.layer1.input_dim, net.layer1.hidden_dim);
    g.layer2 = alloc_layer(net.layer2.input_dim, net.layer2.hidden_dim);
    g.dense_w.assign(net.dense_w.size(), 0.0);
    g.dense_b = 0.0;
    return g;
}

void append_layer(std::vector<double>& flat, const LstmLayerWeights& layer) {
    for (int g = 0; g < 4; ++g) {
        flat.insert(flat.end(), layer.w[g].begin(), layer.w[g].end());
        flat.insert(flat.end(), layer.u[g].begin(), layer.u[g].end());
        flat.insert(flat.end(), layer.b[g].begin(), layer.b[g].end());
    }
}

std::size_t read_layer(LstmLayerWeights& layer, std::span<const double> flat, std::size_t pos) {
    for (int g = 0; g < 4; ++g) {
        for (auto* block : {&layer.w[g], &layer.u[g], &layer.b[g]}) {
            std::copy_n(flat.begin() + pos, block->size(), block->begin());
            pos += block->size();
        }
    }
    return pos;
}

}  // namespace

LstmNetwork init_network(std::uint64_t seed, int input_dim, int hidden, double dropout_rate,
                         int lookback) {
    if (input_dim < 1 || hidden < 1 || lookback < 1)
        throw ShapeError("init_network: dimensions must be positive");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0)
        throw ShapeError("init_network: dropout_rate must be in [0,1)");

    Rng rng(seed);
    LstmNetwork net;
    net.seed = seed;
    net.dropout_rate = dropout_rate;
    net.lookback = lookback;
    net.layer1 = alloc_layer(input_dim, hidden);
    net.layer2 = alloc_layer(hidden, hidden);
    net.dense_w.assign(static_cast<std::size_t>(hidden), 0.0);
    net.dense_b = 0.0;

    for (auto* layer : {&net.layer1, &net.layer2}) {
        for (int g = 0; g < 4; ++g) {
            glorot_fill(rng, layer->w[g], layer->input_dim, layer->hidden_dim);
            glorot_fill(rng, layer->u[g], layer->hidden_dim, layer->hidden_dim);
            // biases stay zero; forget gate opens at 1 so early cell state survives
            if (g == kForget) std::fill(layer->b[g].begin(), layer->b[g].end(), 1.0);
        }
    }
    glorot_fill(rng, net.dense_w, hidden, 1);
    return net;
}

DropoutMask make_dropout_mask(Rng& rng, double rate, int steps, int hidden) {
    if (rate < 0.0 || rate >= 1.0) throw ShapeError("dropout rate must be in [0,1)");
    DropoutMask mask;
    const double keep_scale = 1.0 / (1.0 - rate);
    mask.layer1_seq.assign(steps, std::vector<double>(hidden, 0.0));
    for (auto& row : mask.layer1_seq)
        for (double& v : row) v = rng.next_double() >= rate ? keep_scale : 0.0;
    mask.layer2_out.assign(hidden, 0.0);
    for (double& v : mask.layer2_out) v = rng.next_double() >= rate ? keep_scale : 0.0;
    return mask;
}

std::vector<std::vector<double>> layer_forward(const LstmLayerWeights& layer,
                                               const std::vector<std::vector<double>>& inputs) {
    if (inputs.empty()) throw ShapeError("layer_forward: empty input sequence");
    LayerCache cache;
    layer_run(layer, inputs, cache);
    return cache.h;
}

double forward(const LstmNetwork& net, std::span<const double> window, const DropoutMask* mask) {
    ForwardWork work;
    forward_cached(net, window, mask, work);
    return work.prediction;
}

LossGradients loss_and_gradients(const LstmNetwork& net, const preprocess::WindowedDataset& data,
                                 std::span<const std::size_t> indices,
                                 const std::vector<DropoutMask>* masks) {
    if (indices.empty()) throw InsufficientData("loss_and_gradients: empty batch");
    if (masks && masks->size() != indices.size())
        throw ShapeError("loss_and_gradients: one mask per batch item required");

    LossGradients out;
    out.grads = alloc_grads(net);

    const double inv_batch = 1.0 / static_cast<double>(indices.size());
    ForwardWork work;
    std::vector<std::vector<double>> d_h2, d_h1, d_x2;

    for (std::size_t k = 0; k < indices.size(); ++k) {
        const std::size_t idx = indices[k];
        if (idx >= data.size()) throw ShapeError("loss_and_gradients: batch index out of range");
        const DropoutMask* mask = masks ? &(*masks)[k] : nullptr;

        forward_cached(net, data.inputs[idx], mask, work);
        const double err = work.prediction - data.targets[idx];
        out.mse += err * err * inv_batch;

        // d(mean mse)/d(prediction) for this sample
        const double dy = 2.0 * err * inv_batch;

        const int h2 = net.layer2.hidden_dim;
        const int steps = work.l1.steps;
        std::vector<double> dh2_last(h2, 0.0);
        for (int i = 0; i < h2; ++i) {
            out.grads.dense_w[i] += work.h2_dropped[i] * dy;
            dh2_last[i] = net.dense_w[i] * dy;
            if (mask) dh2_last[i] *= mask->layer2_out[i];
        }
        out.grads.dense_b += dy;

        d_h2.assign(steps, std::vector<double>(h2, 0.0));
        d_h2.back() = dh2_last;
        layer_backward(net.layer2, work.l2, d_h2, out.grads.layer2, &d_x2);

        d_h1 = d_x2;
        if (mask)
            for (int t = 0; t < steps; ++t)
                for (int i = 0; i < net.layer1.hidden_dim; ++i)
                    d_h1[t][i] *= mask->layer1_seq[t][i];
        layer_backward(net.layer1, work.l1, d_h1, out.grads.layer1, nullptr);
    }
    return out;
}

std::vector<double> flatten_params(const LstmNetwork& net) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(net.param_count()));
    append_layer(flat, net.layer1);
    append_layer(flat, net.layer2);
    flat.insert(flat.end(), net.dense_w.begin(), net.dense_w.end());
    flat.push_back(net.dense_b);
    return flat;
}

void unflatten_params(LstmNetwork& net, std::span<const double> flat) {
    if (flat.size() != static_cast<std::size_t>(net.param_count()))
        throw ShapeError("unflatten_params: length does not match network shape");
    std::size_t pos = read_layer(net.layer1, flat, 0);
    pos = read_layer(net.layer2, flat, pos);
    std::copy_n(flat.begin() + pos, net.dense_w.size(), net.dense_w.begin());
    pos += net.dense_w.size();
    net.dense_b = flat[pos];
}

std::vector<double> flatten_grads(const NetworkGradients& grads) {
    std::vector<double> flat;
    append_layer(flat, grads.layer1);
    append_layer(flat, grads.layer2);
    flat.insert(flat.end(), grads.dense_w.begin(), grads.dense_w.end());
    flat.push_back(grads.dense_b);
    return flat;
}

std::uint32_t param_checksum(const LstmNetwork& net) {
    const auto flat = flatten_params(net);
    return crc32(flat.data(), flat.size() * sizeof(double));
}

void adam_step(std::vector<double>& params, std::span<const double> grads, AdamState& state,
               const TrainConfig& config) {
    if (grads.size() != params.size()) throw ShapeError("adam_step: gradient length mismatch");
    if (state.m.empty()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
    }
    if (state.m.size() != params.size()) throw ShapeError("adam_step: state length mismatch");

    state.step += 1;
    const double b1 = config.adam_beta1;
    const double b2 = config.adam_beta2;
    const double m_corr = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double v_corr = 1.0 - std::pow(b2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
        const double m_hat = state.m[i] / m_corr;
        const double v_hat = state.v[i] / v_corr;
        params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_epsilon);
    }
}

TrainReport train(LstmNetwork& net, const preprocess::SplitDataset& split,
                  const TrainConfig& config) {
    const auto& data = split.train;
    if (data.size() == 0) throw InsufficientData("train: empty training set");
    if (config.epochs < 0) throw ShapeError("train: negative epoch count");
    if (config.batch_size < 1) throw ShapeError("train: batch_size must be >= 1");

    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(config.shuffle_seed);
    AdamState state;
    std::vector<double> flat = flatten_params(net);

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainReport report;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t count =
                std::min(static_cast<std::size_t>(config.batch_size), order.size() - start);
            const std::span<const std::size_t> idx(order.data() + start, count);

            std::vector<DropoutMask> masks;
            const std::vector<DropoutMask>* mask_ptr = nullptr;
            if (net.dropout_rate > 0.0) {
                masks.reserve(count);
                for (std::size_t k = 0; k < count; ++k)
                    masks.push_back(make_dropout_mask(rng, net.dropout_rate, net.lookback,
                                                      net.layer1.hidden_dim));
                mask_ptr = &masks;
            }

            const LossGradients lg = loss_and_gradients(net, data, idx, mask_ptr);
            loss_sum += lg.mse * static_cast<double>(count);
            adam_step(flat, flatten_grads(lg.grads), state, config);
            unflatten_params(net, flat);
        }
        report.epoch_losses.push_back(loss_sum / static_cast<double>(data.size()));
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.param_checksum = param_checksum(net);
    return report;
}

std::vector<double> predict_series(const LstmNetwork& net,
                                   const std::vector<std::vector<double>>& windows) {
    std::vector<double> out;
    out.reserve(windows.size());
    for (const auto& w : windows) out.push_back(forward(net, w));
    return out;
}

metrics::MetricsReport metrics_from_scaled(std::span<const double> predicted_scaled,
                                           std::span<const double> targets_scaled,
                                           const preprocess::ScalerParams& scaler) {
    const auto predicted = preprocess::inverse_transform(scaler, predicted_scaled);
    const auto actual = preprocess::inverse_transform(scaler, targets_scaled);
    return metrics::evaluate(actual, predicted);
}

metrics::MetricsReport evaluate(const LstmNetwork& net, const preprocess::SplitDataset& split,
                                const preprocess::ScalerParams& scaler) {
    const auto predictions = predict_series(net, split.test.inputs);
    return metrics_from_scaled(predictions, split.test.targets, scaler);
}

std::vector<double> future_forecast(const LstmNetwork& net,
                                    const preprocess::ScalerParams& scaler,
                                    std::span<const double> last_window, int days) {
    if (days < 0) throw ShapeError("future_forecast: days must be non-negative");
    if (static_cast<int>(last_window.size()) != net.lookback)
        throw ShapeError("future_forecast: window length must equal lookback");

    std::vector<double> window(last_window.begin(), last_window.end());
    std::vector<double> prices;
    prices.reserve(static_cast<std::size_t>(days));
    for (int k = 0; k < days; ++k) {
        const double next_scaled = forward(net, window);
        prices.push_back(preprocess::inverse_transform(scaler, next_scaled));
        window.erase(window.begin());
        window.push_back(next_scaled);
    }
    return prices;
}

}  // namespace fincast::lstm
