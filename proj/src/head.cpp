#include "landmark/head.hpp"

#include "landmark/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace landmark {

SoftmaxHead SoftmaxHead::zeros(std::size_t dim, std::size_t hidden, std::size_t classes) {
    if (dim == 0 || hidden == 0 || classes == 0) {
        throw std::invalid_argument("SoftmaxHead: dim, hidden and classes must be >= 1");
    }
    SoftmaxHead h;
    h.dim = dim;
    h.hidden = hidden;
    h.classes = classes;
    h.w1.assign(dim * hidden, 0.0);
    h.b1.assign(hidden, 0.0);
    h.w2.assign(hidden * classes, 0.0);
    h.b2.assign(classes, 0.0);
    return h;
}

SoftmaxHead SoftmaxHead::initialized(std::size_t dim, std::size_t hidden, std::size_t classes, std::uint64_t seed) {
    auto h = zeros(dim, hidden, classes);
    auto rng = make_stream(seed, "head-init");
    std::normal_distribution<double> he(0.0, std::sqrt(2.0 / static_cast<double>(dim)));
    for (double& w : h.w1) w = he(rng);
    std::normal_distribution<double> glorot(0.0, std::sqrt(2.0 / static_cast<double>(hidden + classes)));
    for (double& w : h.w2) w = glorot(rng);
    return h;
}

std::vector<std::span<double>> SoftmaxHead::parameters() { return {w1, b1, w2, b2}; }

std::vector<std::span<const double>> HeadGradients::tensors() const { return {w1, b1, w2, b2}; }

namespace {

void check_dim(const SoftmaxHead& h, std::size_t got) {
    if (got != h.dim) {
        throw std::invalid_argument("head: input dim " + std::to_string(got) + " != head dim " +
                                    std::to_string(h.dim));
    }
}

// Pre-activation of the hidden layer.
std::vector<double> hidden_pre(const SoftmaxHead& h, std::span<const float> x) {
    std::vector<double> z = h.b1;
    for (std::size_t i = 0; i < h.dim; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* row = &h.w1[i * h.hidden];
        for (std::size_t j = 0; j < h.hidden; ++j) z[j] += xi * row[j];
    }
    return z;
}

std::vector<double> output_logits(const SoftmaxHead& h, std::span<const double> a) {
    std::vector<double> logits = h.b2;
    for (std::size_t j = 0; j < h.hidden; ++j) {
        if (a[j] == 0.0) continue;
        const double* row = &h.w2[j * h.classes];
        for (std::size_t c = 0; c < h.classes; ++c) logits[c] += a[j] * row[c];
    }
    return logits;
}

std::vector<double> relu(std::vector<double> z) {
    for (double& v : z) v = std::max(v, 0.0);
    return z;
}

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

}  // namespace

std::vector<double> head_logits(const SoftmaxHead& h, std::span<const float> x) {
    check_dim(h, x.size());
    return output_logits(h, relu(hidden_pre(h, x)));
}

Distribution softmax(std::span<const double> logits) {
    const double max = *std::max_element(logits.begin(), logits.end());
    Distribution p(logits.size());
    double sum = 0.0;
    for (std::size_t c = 0; c < logits.size(); ++c) {
        p[c] = std::exp(logits[c] - max);
        sum += p[c];
    }
    for (double& v : p) v /= sum;
    return p;
}

Distribution head_forward(const SoftmaxHead& h, std::span<const float> x) { return softmax(head_logits(h, x)); }

double head_loss(const SoftmaxHead& h, const FeatureMatrix& x, std::span<const int> y,
                 std::span<const std::size_t> rows) {
    double total = 0.0;
    for (auto r : rows) {
        const auto logits = head_logits(h, x.row(r));
        const double max = *std::max_element(logits.begin(), logits.end());
        double sum = 0.0;
        for (double l : logits) sum += std::exp(l - max);
        total += max + std::log(sum) - logits[static_cast<std::size_t>(y[r])];
    }
    return total / static_cast<double>(rows.size());
}

double head_loss(const SoftmaxHead& h, const FeatureMatrix& x, std::span<const int> y) {
    return head_loss(h, x, y, all_rows(x.rows));
}

HeadGradients head_gradients(const SoftmaxHead& h, const FeatureMatrix& x, std::span<const int> y,
                             std::span<const std::size_t> rows) {
    if (rows.empty()) throw std::invalid_argument("head_gradients: empty batch");
    check_dim(h, x.cols);
    HeadGradients g{std::vector<double>(h.w1.size(), 0.0), std::vector<double>(h.hidden, 0.0),
                    std::vector<double>(h.w2.size(), 0.0), std::vector<double>(h.classes, 0.0)};
    const double scale = 1.0 / static_cast<double>(rows.size());
    std::vector<double> dz(h.hidden);
    for (auto r : rows) {
        const auto xr = x.row(r);
        const auto z = hidden_pre(h, xr);
        const auto a = relu(z);
        auto dlogits = softmax(output_logits(h, a));
        dlogits[static_cast<std::size_t>(y[r])] -= 1.0;
        for (double& d : dlogits) d *= scale;

        for (std::size_t c = 0; c < h.classes; ++c) g.b2[c] += dlogits[c];
        for (std::size_t j = 0; j < h.hidden; ++j) {
            const double* w2row = &h.w2[j * h.classes];
            double* g2row = &g.w2[j * h.classes];
            double da = 0.0;
            for (std::size_t c = 0; c < h.classes; ++c) {
                g2row[c] += a[j] * dlogits[c];
                da += w2row[c] * dlogits[c];
            }
            dz[j] = z[j] > 0.0 ? da : 0.0;
            g.b1[j] += dz[j];
        }
        for (std::size_t i = 0; i < h.dim; ++i) {
            const double xi = xr[i];
            if (xi == 0.0) continue;
            double* g1row = &g.w1[i * h.hidden];
            for (std::size_t j = 0; j < h.hidden; ++j) g1row[j] += xi * dz[j];
        }
    }
    return g;
}

HeadGradients head_gradients(const SoftmaxHead& h, const FeatureMatrix& x, std::span<const int> y) {
    return head_gradients(h, x, y, all_rows(x.rows));
}

void adam_step(AdamState& s, std::span<const std::span<double>> params,
               std::span<const std::span<const double>> grads) {
    if (params.size() != grads.size()) {
        throw std::invalid_argument("adam_step: parameter/gradient tensor count mismatch");
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (params[k].size() != grads[k].size()) {
            throw std::invalid_argument("adam_step: tensor " + std::to_string(k) + " shape mismatch");
        }
    }
    if (s.m.empty() && s.t == 0) {
        for (const auto& p : params) {
            s.m.emplace_back(p.size(), 0.0);
            s.v.emplace_back(p.size(), 0.0);
        }
    }
    if (s.m.size() != params.size()) {
        throw std::invalid_argument("adam_step: optimizer state holds a different tensor count");
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (s.m[k].size() != params[k].size()) {
            throw std::invalid_argument("adam_step: optimizer state shape mismatch for tensor " + std::to_string(k));
        }
    }
    ++s.t;
    const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.t));
    const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.t));
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto& m = s.m[k];
        auto& v = s.v[k];
        auto p = params[k];
        auto g = grads[k];
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
            v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            p[i] -= s.lr * m_hat / (std::sqrt(v_hat) + s.epsilon);
        }
    }
}

void train_epochs(SoftmaxHead& h, AdamState& adam, const FeatureMatrix& x, std::span<const int> y,
                  std::size_t epochs, std::size_t batch, std::uint64_t seed, std::string_view stage) {
    if (batch == 0) throw std::invalid_argument("train_epochs: batch size must be >= 1");
    if (y.size() != x.rows) throw std::invalid_argument("train_epochs: label count mismatch");
    if (epochs > 0 && x.rows == 0) throw std::invalid_argument("train_epochs: no training rows");
    for (int label : y) {
        if (label < 0 || static_cast<std::size_t>(label) >= h.classes) {
            throw std::invalid_argument("train_epochs: label out of range");
        }
    }
    auto order = all_rows(x.rows);
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        auto rng = make_stream(seed, stage, epoch);
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t len = std::min(batch, order.size() - start);
            const auto grads = head_gradients(h, x, y, std::span<const std::size_t>(order).subspan(start, len));
            const auto params = h.parameters();
            const auto tensors = grads.tensors();
            adam_step(adam, params, tensors);
        }
    }
}

SoftmaxHead train_head(const EmbeddingStore& store, const DatasetManifest& manifest, const HeadTrainConfig& cfg) {
    const auto whole = join_embeddings(store, manifest, Split::train);
    if (whole.ids.empty()) throw std::invalid_argument("train_head: train split is empty");
    // Resolve crops before any training so missing ids fail fast.
    LabeledData crops;
    if (cfg.crop_epochs > 0) {
        crops = join_crop_embeddings(store, manifest, Split::train, cfg.num_regions);
    }
    auto head = SoftmaxHead::initialized(store.dim, cfg.hidden, whole.class_names.size(), cfg.seed);
    head.class_names = whole.class_names;
    AdamState adam;
    adam.lr = cfg.lr;
    train_epochs(head, adam, whole.features, whole.labels, cfg.epochs, cfg.batch, cfg.seed, "head-stage1");
    if (cfg.crop_epochs > 0) {
        train_epochs(head, adam, crops.features, crops.labels, cfg.crop_epochs, cfg.batch, cfg.seed, "head-stage2");
    }
    return head;
}

Distribution predict_crop_batch(const SoftmaxHead& h, std::span<const std::span<const float>> crops,
                                std::size_t expected) {
    if (crops.size() != expected) {
        throw std::invalid_argument("predict_crop_batch: expected " + std::to_string(expected) + " crops, got " +
                                    std::to_string(crops.size()));
    }
    Distribution mean(h.classes, 0.0);
    for (const auto& c : crops) {
        const auto p = head_forward(h, c);
        for (std::size_t k = 0; k < h.classes; ++k) mean[k] += p[k];
    }
    for (double& v : mean) v /= static_cast<double>(crops.size());
    return mean;
}

}  // namespace landmark
