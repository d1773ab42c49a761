#include "landmark/errors.hpp"
#include "landmark/forest.hpp"
#include "landmark/head.hpp"
#include "landmark/knn.hpp"
#include "landmark/model_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

using namespace landmark;

namespace {

FeatureMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<float> n(0.0f, static_cast<float>(scale));
    FeatureMatrix m(rows, cols);
    for (float& v : m.data) v = n(rng);
    return m;
}

std::vector<int> random_labels(std::size_t n, int classes, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> u(0, classes - 1);
    std::vector<int> y(n);
    for (int& v : y) v = u(rng);
    return y;
}

std::vector<std::string> names(std::size_t c) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < c; ++i) out.push_back("c" + std::to_string(i));
    return out;
}

// Full stable sort of every training row by distance.
Distribution knn_oracle(const FeatureMatrix& x, const std::vector<int>& y, std::size_t classes, std::size_t k,
                        std::span<const float> q) {
    std::vector<double> d(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < x.cols; ++j) s += (double(q[j]) - double(x.row(i)[j])) * (double(q[j]) - double(x.row(i)[j]));
        d[i] = s;
    }
    std::vector<std::size_t> idx(x.rows);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    Distribution p(classes, 0.0);
    for (std::size_t i = 0; i < k; ++i) p[y[idx[i]]] += 1.0;
    for (double& v : p) v /= static_cast<double>(k);
    return p;
}

double accuracy(const RandomForestModel& m, const FeatureMatrix& x, const std::vector<int>& y) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < x.rows; ++i) ok += argmax(rf_predict_proba(m, x.row(i))) == static_cast<std::size_t>(y[i]);
    return static_cast<double>(ok) / x.rows;
}

SoftmaxHead random_head(std::size_t dim, std::size_t hidden, std::size_t classes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 0.7);
    auto h = SoftmaxHead::zeros(dim, hidden, classes);
    for (auto t : h.parameters())
        for (double& v : t) v = n(rng);
    return h;
}

// Straight-line forward pass.
Distribution forward_oracle(const SoftmaxHead& h, std::span<const float> x) {
    std::vector<double> a(h.hidden);
    for (std::size_t j = 0; j < h.hidden; ++j) {
        double z = h.b1[j];
        for (std::size_t i = 0; i < h.dim; ++i) z += h.w1[i * h.hidden + j] * x[i];
        a[j] = z > 0 ? z : 0;
    }
    std::vector<double> logits(h.classes);
    for (std::size_t c = 0; c < h.classes; ++c) {
        logits[c] = h.b2[c];
        for (std::size_t j = 0; j < h.hidden; ++j) logits[c] += h.w2[j * h.classes + c] * a[j];
    }
    double sum = 0;
    Distribution p(h.classes);
    for (std::size_t c = 0; c < h.classes; ++c) sum += p[c] = std::exp(logits[c]);
    for (double& v : p) v /= sum;
    return p;
}

}  // namespace

TEST_CASE("distribution helpers") {
    CHECK(is_distribution(std::vector<double>{0.25, 0.75}));
    CHECK_FALSE(is_distribution(std::vector<double>{0.5, 0.6}));
    CHECK_FALSE(is_distribution(std::vector<double>{-0.1, 1.1}));
    CHECK(argmax(std::vector<double>{0.3, 0.3, 0.2, 0.2}) == 0);
    CHECK(argmax(std::vector<double>{0.1, 0.4, 0.4, 0.1}) == 1);
}

TEST_CASE("kNN") {
    std::mt19937_64 rng(1);
    SUBCASE("k=1 on a training row is one-hot at its label") {
        const auto x = random_matrix(30, 5, rng);
        const auto y = random_labels(30, 3, rng);
        const auto m = knn_fit(x, y, names(3), 1);
        for (std::size_t i = 0; i < 30; ++i) {
            Distribution expect(3, 0.0);
            expect[y[i]] = 1.0;
            CHECK(knn_predict_proba(m, x.row(i)) == expect);
        }
    }
    SUBCASE("k=n gives the class prior") {
        const auto x = random_matrix(12, 3, rng);
        const std::vector<int> y{0, 0, 0, 1, 1, 2, 2, 2, 2, 2, 2, 0};
        const auto m = knn_fit(x, y, names(3), 12);
        const std::vector<float> q{5.0f, -1.0f, 0.0f};
        const auto p = knn_predict_proba(m, q);
        CHECK(p[0] == doctest::Approx(4.0 / 12));
        CHECK(p[1] == doctest::Approx(2.0 / 12));
        CHECK(p[2] == doctest::Approx(6.0 / 12));
    }
    SUBCASE("matches a full-sort oracle") {
        const auto x = random_matrix(200, 8, rng);
        const auto y = random_labels(200, 4, rng);
        const auto m = knn_fit(x, y, names(4), 5);
        const auto q = random_matrix(50, 8, rng);
        for (std::size_t i = 0; i < q.rows; ++i) {
            const auto p = knn_predict_proba(m, q.row(i));
            CHECK(p == knn_oracle(x, y, 4, 5, q.row(i)));
            CHECK(is_distribution(p));
        }
    }
    SUBCASE("distance ties go to the lower row index") {
        FeatureMatrix x(4, 1);
        x.data = {1.0f, -1.0f, 1.0f, -1.0f};
        const auto m = knn_fit(x, {0, 1, 2, 3}, names(4), 2);
        const std::vector<float> q{0.0f};
        CHECK(knn_neighbors(m, q) == std::vector<std::size_t>{0, 1});
    }
    SUBCASE("uniform scaling keeps neighbour sets") {
        auto x = random_matrix(60, 4, rng);
        const auto y = random_labels(60, 2, rng);
        const auto q = random_matrix(10, 4, rng);
        const auto m = knn_fit(x, y, names(2), 5);
        auto xs = x;
        for (float& v : xs.data) v *= 4.0f;
        const auto ms = knn_fit(xs, y, names(2), 5);
        for (std::size_t i = 0; i < q.rows; ++i) {
            std::vector<float> qs(q.row(i).begin(), q.row(i).end());
            for (float& v : qs) v *= 4.0f;
            CHECK(knn_neighbors(m, q.row(i)) == knn_neighbors(ms, qs));
        }
    }
    SUBCASE("errors") {
        const auto x = random_matrix(5, 3, rng);
        CHECK_THROWS_AS(knn_fit(x, {0, 0, 0, 0, 0}, names(1), 6), std::invalid_argument);
        CHECK_THROWS_AS(knn_fit(x, {0, 0, 0, 0, 0}, names(1), 0), std::invalid_argument);
        CHECK_THROWS_AS(knn_fit(x, {0, 0, 0, 0, 1}, names(1), 1), std::invalid_argument);
        const auto m = knn_fit(x, {0, 0, 0, 0, 0}, names(1), 1);
        const std::vector<float> q{1.0f, 2.0f};
        CHECK_THROWS_AS(knn_predict_proba(m, q), std::invalid_argument);
    }
}

TEST_CASE("gini impurity") {
    CHECK(gini_impurity(std::vector<std::size_t>{5, 0}) == 0.0);
    CHECK(gini_impurity(std::vector<std::size_t>{5, 5}) == doctest::Approx(0.5));
    CHECK(gini_impurity(std::vector<std::size_t>{1, 1, 2}) == doctest::Approx(1 - (0.0625 + 0.0625 + 0.25)));
}

TEST_CASE("random forest") {
    std::mt19937_64 rng(2);
    SUBCASE("one full tree without bootstrap shatters distinct samples") {
        const auto x = random_matrix(20, 3, rng);
        const auto y = random_labels(20, 4, rng);
        ForestConfig cfg;
        cfg.n_trees = 1;
        cfg.bootstrap = false;
        cfg.features_per_split = 3;
        const auto m = rf_fit(x, y, names(4), cfg);
        CHECK(accuracy(m, x, y) == 1.0);
    }
    SUBCASE("single-class data gives one-hot predictions") {
        const auto x = random_matrix(15, 4, rng);
        const std::vector<int> y(15, 1);
        ForestConfig cfg;
        cfg.n_trees = 5;
        const auto m = rf_fit(x, y, names(3), cfg);
        for (const auto& t : m.trees) CHECK(t.nodes.size() == 1);
        const auto q = random_matrix(5, 4, rng);
        for (std::size_t i = 0; i < q.rows; ++i) CHECK(rf_predict_proba(m, q.row(i)) == Distribution{0.0, 1.0, 0.0});
    }
    SUBCASE("XOR clusters") {
        FeatureMatrix x(100, 2);
        std::vector<int> y(100);
        std::normal_distribution<float> jitter(0.0f, 0.15f);
        for (std::size_t i = 0; i < 100; ++i) {
            const int qx = static_cast<int>(i % 2), qy = static_cast<int>((i / 2) % 2);
            x.row(i)[0] = static_cast<float>(qx) + jitter(rng);
            x.row(i)[1] = static_cast<float>(qy) + jitter(rng);
            y[i] = qx ^ qy;
        }
        ForestConfig cfg;
        cfg.n_trees = 50;
        const auto m = rf_fit(x, y, names(2), cfg);
        // Recorded with seed 42: every training point is classified correctly.
        CHECK(accuracy(m, x, y) >= 0.95);
        CHECK(accuracy(m, x, y) == 1.0);
    }
    SUBCASE("prediction is the mean of leaf distributions") {
        RandomForestModel m;
        m.dim = 1;
        m.class_names = names(3);
        const Distribution leaves[3] = {{1.0, 0.0, 0.0}, {0.5, 0.5, 0.0}, {0.2, 0.2, 0.6}};
        for (const auto& l : leaves) m.trees.push_back(DecisionTree{{TreeNode{-1, 0.0, -1, -1, l}}});
        const std::vector<float> q{0.0f};
        const auto p = rf_predict_proba(m, q);
        CHECK(p[0] == doctest::Approx((1.0 + 0.5 + 0.2) / 3));
        CHECK(p[1] == doctest::Approx((0.0 + 0.5 + 0.2) / 3));
        CHECK(p[2] == doctest::Approx(0.6 / 3));

        RandomForestModel single = m;
        single.trees.resize(1);
        CHECK(rf_predict_proba(single, q) == leaves[0]);
    }
    SUBCASE("tree order does not change predictions") {
        const auto x = random_matrix(80, 6, rng);
        const auto y = random_labels(80, 3, rng);
        ForestConfig cfg;
        cfg.n_trees = 25;
        auto m = rf_fit(x, y, names(3), cfg);
        const auto q = random_matrix(30, 6, rng);
        std::vector<Distribution> before;
        for (std::size_t i = 0; i < q.rows; ++i) {
            before.push_back(rf_predict_proba(m, q.row(i)));
            CHECK(is_distribution(before.back()));
        }
        std::shuffle(m.trees.begin(), m.trees.end(), rng);
        std::reverse(m.trees.begin(), m.trees.end());
        for (std::size_t i = 0; i < q.rows; ++i) CHECK(rf_predict_proba(m, q.row(i)) == before[i]);
    }
    SUBCASE("fixed seed is deterministic and depth is honoured") {
        const auto x = random_matrix(60, 5, rng);
        const auto y = random_labels(60, 2, rng);
        ForestConfig cfg;
        cfg.n_trees = 10;
        CHECK(rf_fit(x, y, names(2), cfg) == rf_fit(x, y, names(2), cfg));
        auto other = cfg;
        other.seed = 7;
        CHECK_FALSE(rf_fit(x, y, names(2), other) == rf_fit(x, y, names(2), cfg));
        // Trees fitted alone equal the same trees inside the forest.
        CHECK(fit_tree(x, y, 2, cfg, 4) == rf_fit(x, y, names(2), cfg).trees[4]);

        cfg.max_depth = 1;
        for (const auto& t : rf_fit(x, y, names(2), cfg).trees) CHECK(t.nodes.size() <= 3);
    }
    SUBCASE("errors") {
        const auto x = random_matrix(5, 2, rng);
        CHECK_THROWS_AS(rf_fit(random_matrix(1, 2, rng), std::vector<int>{0}, names(1), {}), std::invalid_argument);
        CHECK_THROWS_AS(rf_fit(x, std::vector<int>{0, 1, 2, 0, 1}, names(2), {}), std::invalid_argument);
        const auto m = rf_fit(x, std::vector<int>{0, 1, 1, 0, 1}, names(2), {});
        CHECK_THROWS_AS(rf_predict_proba(m, std::vector<float>{1.0f}), std::invalid_argument);
    }
}

TEST_CASE("head forward") {
    SUBCASE("zero parameters give a uniform distribution") {
        const auto h = SoftmaxHead::zeros(6, 4, 3);
        for (double v : head_forward(h, std::vector<float>{1, 2, 3, 4, 5, 6})) CHECK(v == doctest::Approx(1.0 / 3));
    }
    SUBCASE("softmax is shift invariant and stable") {
        const std::vector<double> logits{1.0, 2.5, -0.5};
        std::vector<double> shifted = logits;
        for (double& v : shifted) v += 1000.0;
        const auto a = softmax(logits), b = softmax(shifted);
        for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
        CHECK(argmax(a) == argmax(b));
        CHECK(is_distribution(b));
    }
    SUBCASE("matches the straight-line forward pass") {
        const auto h = random_head(6, 4, 3, 3);
        std::mt19937_64 rng(4);
        const auto x = random_matrix(20, 6, rng);
        for (std::size_t i = 0; i < x.rows; ++i) {
            const auto p = head_forward(h, x.row(i));
            const auto q = forward_oracle(h, x.row(i));
            for (std::size_t c = 0; c < 3; ++c) CHECK(p[c] == doctest::Approx(q[c]).epsilon(1e-12));
        }
        CHECK_THROWS_AS(head_forward(h, std::vector<float>(5, 0.0f)), std::invalid_argument);
    }
    SUBCASE("initialization is seeded") {
        const auto a = SoftmaxHead::initialized(10, 8, 3, 42);
        CHECK(a == SoftmaxHead::initialized(10, 8, 3, 42));
        CHECK_FALSE(a == SoftmaxHead::initialized(10, 8, 3, 43));
        CHECK(std::all_of(a.b1.begin(), a.b1.end(), [](double v) { return v == 0.0; }));
        CHECK_THROWS_AS(SoftmaxHead::zeros(0, 1, 1), std::invalid_argument);
    }
}

TEST_CASE("head gradients") {
    std::mt19937_64 rng(5);
    SUBCASE("central differences") {
        auto h = random_head(6, 4, 3, 6);
        const auto x = random_matrix(7, 6, rng);
        const auto y = random_labels(7, 3, rng);
        const auto g = head_gradients(h, x, y);
        const auto analytic = g.tensors();
        auto params = h.parameters();
        const double eps = 1e-5;
        double worst = 0;
        for (std::size_t t = 0; t < params.size(); ++t) {
            for (std::size_t i = 0; i < params[t].size(); ++i) {
                const double saved = params[t][i];
                params[t][i] = saved + eps;
                const double up = head_loss(h, x, y);
                params[t][i] = saved - eps;
                const double down = head_loss(h, x, y);
                params[t][i] = saved;
                const double numeric = (up - down) / (2 * eps);
                const double a = analytic[t][i];
                const double scale = std::max(std::abs(a), std::abs(numeric));
                if (scale < 1e-8) continue;
                worst = std::max(worst, std::abs(a - numeric) / scale);
            }
        }
        CHECK(worst < 1e-4);
    }
    SUBCASE("confident correct prediction has near-zero gradient") {
        auto h = SoftmaxHead::zeros(2, 2, 2);
        h.b2 = {40.0, 0.0};
        FeatureMatrix x(1, 2);
        x.data = {0.3f, -0.2f};
        const auto g = head_gradients(h, x, std::vector<int>{0});
        for (auto t : g.tensors())
            for (double v : t) CHECK(std::abs(v) < 1e-15);
    }
    SUBCASE("duplicated rows give the single-row gradient") {
        const auto h = random_head(6, 4, 3, 7);
        const auto one = random_matrix(1, 6, rng);
        FeatureMatrix three;
        for (int i = 0; i < 3; ++i) three.append_row(one.row(0));
        const auto a = head_gradients(h, one, std::vector<int>{2});
        const auto b = head_gradients(h, three, std::vector<int>{2, 2, 2});
        const auto ta = a.tensors(), tb = b.tensors();
        for (std::size_t t = 0; t < ta.size(); ++t)
            for (std::size_t i = 0; i < ta[t].size(); ++i) CHECK(tb[t][i] == doctest::Approx(ta[t][i]).epsilon(1e-12));
    }
    SUBCASE("empty batch is rejected") {
        const auto h = random_head(6, 4, 3, 8);
        const auto x = random_matrix(2, 6, rng);
        CHECK_THROWS_AS(head_gradients(h, x, std::vector<int>{0, 1}, std::vector<std::size_t>{}), std::invalid_argument);
    }
}

TEST_CASE("adam") {
    SUBCASE("zero gradient leaves parameters unchanged") {
        std::vector<double> p{0.5, -1.5, 2.0};
        const auto before = p;
        const std::vector<double> g(3, 0.0);
        AdamState s;
        std::vector<std::span<double>> params{p};
        std::vector<std::span<const double>> grads{g};
        adam_step(s, params, grads);
        CHECK(p == before);
        CHECK(s.t == 1);
    }
    SUBCASE("first step moves each coordinate by lr against the gradient sign") {
        std::vector<double> p{0.5, -1.5, 2.0, 0.0};
        const auto before = p;
        const std::vector<double> g{3.0, -0.01, 250.0, -7.0};
        AdamState s;
        std::vector<std::span<double>> params{p};
        std::vector<std::span<const double>> grads{g};
        adam_step(s, params, grads);
        for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs((p[i] - before[i]) + 1e-4 * (g[i] > 0 ? 1 : -1)) < 1e-6);
    }
    SUBCASE("five steps on a quadratic bowl match a scalar reference") {
        const std::vector<double> curvature{1.0, 4.0, 0.25};
        std::vector<double> p{1.0, -2.0, 3.0};
        std::vector<double> ref = p, m(3, 0.0), v(3, 0.0);
        AdamState s;
        s.lr = 0.1;
        for (int step = 1; step <= 5; ++step) {
            std::vector<double> g(3);
            for (int i = 0; i < 3; ++i) g[i] = curvature[i] * p[i];
            std::vector<std::span<double>> params{p};
            std::vector<std::span<const double>> grads{g};
            adam_step(s, params, grads);
            for (int i = 0; i < 3; ++i) {
                const double gi = curvature[i] * ref[i];
                m[i] = 0.9 * m[i] + 0.1 * gi;
                v[i] = 0.999 * v[i] + 0.001 * gi * gi;
                const double mh = m[i] / (1 - std::pow(0.9, step));
                const double vh = v[i] / (1 - std::pow(0.999, step));
                ref[i] -= 0.1 * mh / (std::sqrt(vh) + 1e-8);
            }
        }
        for (int i = 0; i < 3; ++i) CHECK(std::abs(p[i] - ref[i]) < 1e-12);
    }
    SUBCASE("shape mismatches are rejected") {
        std::vector<double> p(3, 0.0), g(2, 0.0), p2(2, 0.0);
        AdamState s;
        std::vector<std::span<double>> params{p};
        std::vector<std::span<const double>> grads{g};
        CHECK_THROWS_AS(adam_step(s, params, grads), std::invalid_argument);
        std::vector<std::span<const double>> ok{std::span<const double>(p)};
        adam_step(s, params, ok);
        std::vector<std::span<double>> other{p2};
        std::vector<std::span<const double>> other_g{std::span<const double>(g)};
        CHECK_THROWS_AS(adam_step(s, other, other_g), std::invalid_argument);
    }
}

TEST_CASE("head training") {
    // Two classes separated along a fixed direction in 4 dims.
    std::mt19937_64 rng(9);
    std::normal_distribution<float> n(0.0f, 1.0f);
    DatasetManifest manifest;
    EmbeddingStore store;
    for (int i = 0; i < 100; ++i) {
        const int label = i % 2;
        const float shift = label ? 4.0f : -4.0f;
        std::vector<float> v{shift + n(rng), shift + n(rng), n(rng), -shift + n(rng)};
        const auto id = "toy" + std::to_string(i);
        manifest.entries.push_back({id, label ? "pos" : "neg", Split::train});
        store.insert(id, v);
    }
    HeadTrainConfig cfg;
    cfg.crop_epochs = 0;

    SUBCASE("separable toy data is learned") {
        const auto h = train_head(store, manifest, cfg);
        const auto data = join_embeddings(store, manifest, Split::train);
        std::size_t ok = 0;
        for (std::size_t i = 0; i < data.features.rows; ++i)
            ok += argmax(head_forward(h, data.features.row(i))) == static_cast<std::size_t>(data.labels[i]);
        // Recorded with seed 42.
        CHECK(static_cast<double>(ok) / data.features.rows >= 0.99);
        CHECK(ok == 100);  // pinned
        CHECK(h.class_names == std::vector<std::string>{"neg", "pos"});
    }
    SUBCASE("zero epochs returns the initialized head") {
        auto zero = cfg;
        zero.epochs = 0;
        auto init = SoftmaxHead::initialized(4, cfg.hidden, 2, cfg.seed);
        init.class_names = {"neg", "pos"};
        CHECK(train_head(store, manifest, zero) == init);
    }
    SUBCASE("same seed gives bit-identical weights") {
        CHECK(train_head(store, manifest, cfg) == train_head(store, manifest, cfg));
    }
    SUBCASE("the crop stage needs crop embeddings") {
        auto staged = cfg;
        staged.crop_epochs = 2;
        staged.num_regions = 2;
        CHECK_THROWS_AS(train_head(store, manifest, staged), MissingIdsError);
        auto with_crops = store;
        for (const auto& e : manifest.entries)
            for (int r = 1; r <= 2; ++r) with_crops.insert(crop_id(e.image_path, r), *store.find(e.image_path));
        const auto h = train_head(with_crops, manifest, staged);
        CHECK_FALSE(h == train_head(store, manifest, cfg));
    }
}

TEST_CASE("crop batch prediction") {
    const auto h = random_head(6, 4, 3, 10);
    std::mt19937_64 rng(11);
    const auto x = random_matrix(5, 6, rng);
    SUBCASE("identical crops equal one forward pass") {
        std::vector<std::span<const float>> crops(5, x.row(0));
        const auto p = predict_crop_batch(h, crops, 5);
        const auto q = head_forward(h, x.row(0));
        for (std::size_t c = 0; c < 3; ++c) CHECK(p[c] == doctest::Approx(q[c]).epsilon(1e-14));
    }
    SUBCASE("p,p,p,p,q averages to (4p+q)/5") {
        std::vector<std::span<const float>> crops{x.row(0), x.row(0), x.row(0), x.row(0), x.row(1)};
        const auto p = head_forward(h, x.row(0)), q = head_forward(h, x.row(1));
        const auto out = predict_crop_batch(h, crops, 5);
        for (std::size_t c = 0; c < 3; ++c) CHECK(out[c] == doctest::Approx((4 * p[c] + q[c]) / 5).epsilon(1e-12));
    }
    SUBCASE("random crops match a scalar mean") {
        std::vector<std::span<const float>> crops;
        for (std::size_t i = 0; i < 5; ++i) crops.push_back(x.row(i));
        Distribution mean(3, 0.0);
        for (const auto& c : crops) {
            const auto p = forward_oracle(h, c);
            for (std::size_t k = 0; k < 3; ++k) mean[k] += p[k] / 5;
        }
        const auto out = predict_crop_batch(h, crops, 5);
        for (std::size_t k = 0; k < 3; ++k) CHECK(out[k] == doctest::Approx(mean[k]).epsilon(1e-12));
        CHECK(is_distribution(out));
        crops.pop_back();
        CHECK_THROWS_AS(predict_crop_batch(h, crops, 5), std::invalid_argument);
    }
}

TEST_CASE("model files") {
    std::mt19937_64 rng(12);
    const auto x = random_matrix(40, 5, rng);
    const auto y = random_labels(40, 3, rng);
    const auto knn = knn_fit(x, y, {"alpha", "beta", "gamma"}, 3);
    ForestConfig fc;
    fc.n_trees = 4;
    const auto forest = rf_fit(x, y, {"alpha", "beta", "gamma"}, fc);
    auto head = random_head(5, 4, 3, 13);
    head.class_names = {"alpha", "beta", "gamma"};

    CHECK(peek_model_kind(encode_model(knn)) == ModelKind::knn);
    CHECK(peek_model_kind(encode_model(forest)) == ModelKind::random_forest);
    CHECK(peek_model_kind(encode_model(head)) == ModelKind::softmax_head);
    CHECK(decode_knn(encode_model(knn)) == knn);
    CHECK(decode_forest(encode_model(forest)) == forest);
    CHECK(decode_head(encode_model(head)) == head);

    const auto dir = std::filesystem::temp_directory_path() / "landmark_model_files";
    std::filesystem::create_directories(dir);
    save_model(knn, dir / "knn.sle");
    save_model(forest, dir / "rf.sle");
    save_model(head, dir / "head.sle");
    CHECK(load_knn(dir / "knn.sle") == knn);
    CHECK(load_forest(dir / "rf.sle") == forest);
    CHECK(load_head(dir / "head.sle") == head);
    CHECK_THROWS_AS(load_knn(dir / "rf.sle"), FormatError);
    std::filesystem::remove_all(dir);

    auto bytes = encode_model(head);
    bytes[0] = 'X';
    CHECK_THROWS_AS(decode_head(bytes), FormatError);
    CHECK_THROWS_AS(decode_forest(encode_model(forest).substr(0, 60)), FormatError);
    CHECK_THROWS_AS(decode_knn(encode_model(knn) + "extra"), FormatError);
}
