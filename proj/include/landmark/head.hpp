#pragma once

#include "landmark/distribution.hpp"
#include "landmark/embeddings.hpp"
#include "landmark/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace landmark {

/// One ReLU hidden layer followed by softmax: softmax(W2^T relu(W1^T x + b1) + b2).
struct SoftmaxHead {
    std::size_t dim = 0;
    std::size_t hidden = 0;
    std::size_t classes = 0;
    std::vector<double> w1;  // dim x hidden, row-major
    std::vector<double> b1;  // hidden
    std::vector<double> w2;  // hidden x classes, row-major
    std::vector<double> b2;  // classes
    std::vector<std::string> class_names;

    static SoftmaxHead zeros(std::size_t dim, std::size_t hidden, std::size_t classes);
    /// He-normal W1, Glorot-normal W2, zero biases.
    static SoftmaxHead initialized(std::size_t dim, std::size_t hidden, std::size_t classes, std::uint64_t seed);

    std::vector<std::span<double>> parameters();

    bool operator==(const SoftmaxHead&) const = default;
};

struct HeadGradients {
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    std::vector<double> b2;

    std::vector<std::span<const double>> tensors() const;
};

std::vector<double> head_logits(const SoftmaxHead& h, std::span<const float> x);

/// Max-subtracted softmax.
Distribution softmax(std::span<const double> logits);

Distribution head_forward(const SoftmaxHead& h, std::span<const float> x);

/// Mean cross-entropy over the selected rows.
double head_loss(const SoftmaxHead& h, const FeatureMatrix& x, std::span<const int> y,
                 std::span<const std::size_t> rows);
double head_loss(const SoftmaxHead& h, const FeatureMatrix& x, std::span<const int> y);

/// Gradients of the mean cross-entropy over the selected rows.
HeadGradients head_gradients(const SoftmaxHead& h, const FeatureMatrix& x, std::span<const int> y,
                             std::span<const std::size_t> rows);
HeadGradients head_gradients(const SoftmaxHead& h, const FeatureMatrix& x, std::span<const int> y);

struct AdamState {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t t = 0;
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
};

/// Bias-corrected Adam update in place. Moment buffers are shaped on the first call; later calls
/// with different shapes throw std::invalid_argument.
void adam_step(AdamState& state, std::span<const std::span<double>> params,
               std::span<const std::span<const double>> grads);

struct HeadTrainConfig {
    std::size_t hidden = 256;
    std::size_t epochs = 7;       // stage 1, whole-image embeddings
    std::size_t crop_epochs = 7;  // stage 2, salient-crop embeddings
    std::size_t batch = 32;
    double lr = 1e-4;
    std::uint64_t seed = 42;
    int num_regions = 5;
};

/// Mini-batch Adam over shuffled rows; the shuffle for each epoch comes from (seed, stage, epoch).
void train_epochs(SoftmaxHead& h, AdamState& adam, const FeatureMatrix& x, std::span<const int> y,
                  std::size_t epochs, std::size_t batch, std::uint64_t seed, std::string_view stage);

/// Stage 1 trains on the train split's whole-image embeddings, stage 2 continues (same optimizer
/// state) on their crop embeddings `id#1..id#num_regions`.
SoftmaxHead train_head(const EmbeddingStore& store, const DatasetManifest& manifest, const HeadTrainConfig& cfg);

/// Unweighted mean of head_forward over the crops; exactly `expected` crops are required.
Distribution predict_crop_batch(const SoftmaxHead& h, std::span<const std::span<const float>> crops,
                                std::size_t expected);

}  // namespace landmark
