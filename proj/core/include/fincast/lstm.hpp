#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fincast/metrics.hpp"
#include "fincast/preprocess.hpp"
#include "fincast/rng.hpp"

namespace fincast::lstm {

/// Gate index into the per-layer weight arrays.
enum Gate : int { kInput = 0, kForget = 1, kCell = 2, kOutput = 3 };

/// One LSTM layer. Per gate g: W_g (hidden x input, row-major),
/// U_g (hidden x hidden), b_g (hidden).
/// Parameter count = 4 * ((input_dim + hidden_dim) * hidden_dim + hidden_dim).
struct LstmLayerWeights {
    int input_dim = 0;
    int hidden_dim = 0;
    std::array<std::vector<double>, 4> w;
    std::array<std::vector<double>, 4> u;
    std::array<std::vector<double>, 4> b;

    int param_count() const {
        return 4 * ((input_dim + hidden_dim) * hidden_dim + hidden_dim);
    }
};

/// Two stacked LSTM layers and a scalar dense head. layer1 returns its full
/// hidden-state sequence, layer2 only its final state. With the default
/// shape (input 1, hidden 50) the parameter count is 30,651.
struct LstmNetwork {
    LstmLayerWeights layer1;
    LstmLayerWeights layer2;
    std::vector<double> dense_w;
    double dense_b = 0.0;
    double dropout_rate = 0.2;
    std::uint64_t seed = 0;
    int lookback = 60;

    int param_count() const {
        return layer1.param_count() + layer2.param_count() +
               static_cast<int>(dense_w.size()) + 1;
    }
};

/// Glorot-uniform weights (limit sqrt(6 / (fan_in + fan_out)) per matrix)
/// from a seed-deterministic generator; biases zero except the forget-gate
/// bias, which starts at 1. Identical seed, identical network.
LstmNetwork init_network(std::uint64_t seed, int input_dim = 1, int hidden = 50,
                         double dropout_rate = 0.2, int lookback = 60);

struct TrainConfig {
    int epochs = 10;
    int batch_size = 32;
    double learning_rate = 0.001;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t shuffle_seed = 0;
};

struct TrainReport {
    std::vector<double> epoch_losses;  // mean training MSE per epoch, scaled units
    double wall_seconds = 0.0;
    std::uint32_t param_checksum = 0;
};

/// Inverted-dropout masks: each element is 0 or 1/(1-rate), so the masked
/// activation is unbiased in expectation and inference needs no rescaling.
struct DropoutMask {
    std::vector<std::vector<double>> layer1_seq;  // [step][hidden]
    std::vector<double> layer2_out;               // [hidden]
};

DropoutMask make_dropout_mask(Rng& rng, double rate, int steps, int hidden);

/// Hidden-state sequence of a single layer run over `inputs`
/// (one input vector per step, h0 = c0 = 0).
std::vector<std::vector<double>> layer_forward(const LstmLayerWeights& layer,
                                               const std::vector<std::vector<double>>& inputs);

/// Full network forward pass for one window. A null mask means inference
/// (dropout disabled); passing a mask is train mode.
double forward(const LstmNetwork& net, std::span<const double> window,
               const DropoutMask* mask = nullptr);

/// Gradient container, same layout as the parameters.
struct NetworkGradients {
    LstmLayerWeights layer1;
    LstmLayerWeights layer2;
    std::vector<double> dense_w;
    double dense_b = 0.0;
};

struct LossGradients {
    double mse = 0.0;
    NetworkGradients grads;
};

/// Mean-squared-error loss over the selected windows plus full
/// backpropagation-through-time gradients of that mean. `masks`, when given,
/// must hold one entry per selected index (train-mode dropout).
LossGradients loss_and_gradients(const LstmNetwork& net, const preprocess::WindowedDataset& data,
                                 std::span<const std::size_t> indices,
                                 const std::vector<DropoutMask>* masks = nullptr);

// --- flat parameter view (fixed order: layer1 gates i,f,g,o each W,U,b;
// --- then layer2; then dense_w, dense_b) ---
std::vector<double> flatten_params(const LstmNetwork& net);
void unflatten_params(LstmNetwork& net, std::span<const double> flat);
std::vector<double> flatten_grads(const NetworkGradients& grads);
/// CRC-32 of the flat parameter bytes; stable across runs on one platform.
std::uint32_t param_checksum(const LstmNetwork& net);

/// Adam state over the flat parameter vector.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long step = 0;
};

/// One Adam update with bias correction. Sizes the moments on first use.
void adam_step(std::vector<double>& params, std::span<const double> grads, AdamState& state,
               const TrainConfig& config);

/// Epoch loop: shuffle with a seed-derived permutation, iterate mini-batches
/// (final partial batch included), forward/backward/Adam. Single-threaded by
/// contract so accumulation order, and therefore every weight, is
/// reproducible. epochs = 0 leaves the network bit-identical.
TrainReport train(LstmNetwork& net, const preprocess::SplitDataset& split,
                  const TrainConfig& config);

/// Inference predictions (scaled units), one per window.
std::vector<double> predict_series(const LstmNetwork& net,
                                   const std::vector<std::vector<double>>& windows);

/// Metrics in price units: both predictions and targets are inverse-scaled
/// before metrics::evaluate.
metrics::MetricsReport metrics_from_scaled(std::span<const double> predicted_scaled,
                                           std::span<const double> targets_scaled,
                                           const preprocess::ScalerParams& scaler);

/// Evaluates the network on the test partition, in price units.
metrics::MetricsReport evaluate(const LstmNetwork& net, const preprocess::SplitDataset& split,
                                const preprocess::ScalerParams& scaler);

/// Iterative multi-step forecast: predict one scaled step, slide the window,
/// repeat `days` times. Returns inverse-transformed prices. Predictions feed
/// back into the window, so long horizons compound model error.
std::vector<double> future_forecast(const LstmNetwork& net,
                                    const preprocess::ScalerParams& scaler,
                                    std::span<const double> last_window, int days);

// --- persistence ---
//
// Model file, line-oriented UTF-8:
//   FINCAST-MODEL v1
//   shape <input_dim> <hidden1> <hidden2>
//   lookback <n>
//   dropout_rate <float>
//   scaler <min> <max>
//   seed <u64>
//   params <count>
//   <one parameter per line, %.17g>
//   crc32 <8 hex digits of everything above>
// load(save(x)) is bit-identical on all parameters.

struct LoadedModel {
    LstmNetwork net;
    preprocess::ScalerParams scaler;
};

void save_model(const LstmNetwork& net, const preprocess::ScalerParams& scaler,
                const std::string& path);
LoadedModel load_model(const std::string& path);

}  // namespace fincast::lstm
