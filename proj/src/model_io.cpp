#include "landmark/model_io.hpp"

#include "landmark/binary_io.hpp"
#include "landmark/fileio.hpp"

#include <limits>

namespace landmark {

namespace {

constexpr std::string_view kModelMagic = "SLE1";

ByteWriter start(ModelKind kind) {
    ByteWriter w;
    w.put_bytes(kModelMagic);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(kind));
    return w;
}

void put_names(ByteWriter& w, const std::vector<std::string>& names) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(names.size()));
    for (const auto& n : names) {
        w.put<std::uint16_t>(static_cast<std::uint16_t>(n.size()));
        w.put_bytes(n);
    }
}

void put_doubles(ByteWriter& w, const std::vector<double>& v) {
    for (double x : v) w.put<double>(x);
}

ByteReader open(std::string_view bytes, ModelKind expected) {
    ByteReader r(bytes);
    if (r.get_bytes(4, "magic") != kModelMagic) throw FormatError("bad model magic, expected SLE1", 0);
    const auto kind = r.get<std::uint8_t>("model kind");
    if (kind != static_cast<std::uint8_t>(expected)) {
        throw FormatError("model kind " + std::to_string(kind) + ", expected " +
                              std::to_string(static_cast<int>(expected)),
                          4);
    }
    return r;
}

std::vector<std::string> get_names(ByteReader& r) {
    const auto count = r.get<std::uint32_t>("class count");
    std::vector<std::string> names;
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto len = r.get<std::uint16_t>("class name length");
        names.emplace_back(r.get_bytes(len, "class name"));
    }
    return names;
}

std::vector<double> get_doubles(ByteReader& r, std::size_t n, const char* what) {
    std::vector<double> v(n);
    for (double& x : v) x = r.get<double>(what);
    return v;
}

std::size_t get_size(ByteReader& r, const char* what, std::size_t limit) {
    const auto offset = r.offset();
    const auto v = r.get<std::uint64_t>(what);
    if (v > limit) throw FormatError(std::string("implausible ") + what, offset);
    return static_cast<std::size_t>(v);
}

void finish(const ByteReader& r) {
    if (!r.at_end()) throw FormatError("trailing bytes in model file", r.offset());
}

constexpr std::size_t kMaxCount = std::size_t{1} << 40;

}  // namespace

ModelKind peek_model_kind(std::string_view bytes) {
    ByteReader r(bytes);
    if (r.get_bytes(4, "magic") != kModelMagic) throw FormatError("bad model magic, expected SLE1", 0);
    const auto kind = r.get<std::uint8_t>("model kind");
    if (kind < 1 || kind > 3) throw FormatError("unknown model kind " + std::to_string(kind), 4);
    return static_cast<ModelKind>(kind);
}

std::string encode_model(const KnnModel& m) {
    auto w = start(ModelKind::knn);
    put_names(w, m.class_names);
    w.put<std::uint64_t>(m.k);
    w.put<std::uint64_t>(m.vectors.rows);
    w.put<std::uint64_t>(m.vectors.cols);
    for (float v : m.vectors.data) w.put<float>(v);
    for (int y : m.labels) w.put<std::int32_t>(y);
    return w.take();
}

KnnModel decode_knn(std::string_view bytes) {
    auto r = open(bytes, ModelKind::knn);
    KnnModel m;
    m.class_names = get_names(r);
    m.k = get_size(r, "k", kMaxCount);
    const auto rows = get_size(r, "row count", kMaxCount);
    const auto cols = get_size(r, "column count", kMaxCount);
    if (rows != 0 && cols > bytes.size() / rows) throw FormatError("matrix larger than file", r.offset());
    m.vectors = FeatureMatrix(rows, cols);
    for (float& v : m.vectors.data) v = r.get<float>("training vectors");
    m.labels.resize(rows);
    for (int& y : m.labels) y = r.get<std::int32_t>("labels");
    finish(r);
    return m;
}

std::string encode_model(const RandomForestModel& m) {
    auto w = start(ModelKind::random_forest);
    put_names(w, m.class_names);
    w.put<std::uint64_t>(m.config.n_trees);
    w.put<std::uint64_t>(m.config.max_depth);
    w.put<std::uint64_t>(m.config.features_per_split);
    w.put<std::uint8_t>(m.config.bootstrap ? 1 : 0);
    w.put<std::uint64_t>(m.config.seed);
    w.put<std::uint64_t>(m.dim);
    w.put<std::uint64_t>(m.trees.size());
    for (const auto& tree : m.trees) {
        w.put<std::uint32_t>(static_cast<std::uint32_t>(tree.nodes.size()));
        for (const auto& n : tree.nodes) {
            w.put<std::int32_t>(n.feature);
            w.put<double>(n.threshold);
            w.put<std::int32_t>(n.left);
            w.put<std::int32_t>(n.right);
            if (n.is_leaf()) put_doubles(w, n.leaf);
        }
    }
    return w.take();
}

RandomForestModel decode_forest(std::string_view bytes) {
    auto r = open(bytes, ModelKind::random_forest);
    RandomForestModel m;
    m.class_names = get_names(r);
    m.config.n_trees = get_size(r, "tree count", kMaxCount);
    m.config.max_depth = get_size(r, "max depth", std::numeric_limits<std::size_t>::max());
    m.config.features_per_split = get_size(r, "features per split", kMaxCount);
    m.config.bootstrap = r.get<std::uint8_t>("bootstrap flag") != 0;
    m.config.seed = r.get<std::uint64_t>("seed");
    m.dim = get_size(r, "dim", kMaxCount);
    const auto trees = get_size(r, "stored tree count", bytes.size());
    for (std::size_t t = 0; t < trees; ++t) {
        DecisionTree tree;
        const auto count = r.get<std::uint32_t>("node count");
        for (std::uint32_t k = 0; k < count; ++k) {
            const auto offset = r.offset();
            TreeNode n;
            n.feature = r.get<std::int32_t>("node feature");
            n.threshold = r.get<double>("node threshold");
            n.left = r.get<std::int32_t>("node left");
            n.right = r.get<std::int32_t>("node right");
            if (n.is_leaf()) {
                n.leaf = get_doubles(r, m.class_names.size(), "leaf distribution");
            } else if (static_cast<std::size_t>(n.feature) >= m.dim || n.left <= static_cast<int>(k) ||
                       n.right <= static_cast<int>(k) || n.left >= static_cast<int>(count) ||
                       n.right >= static_cast<int>(count)) {
                throw FormatError("invalid tree node", offset);
            }
            tree.nodes.push_back(std::move(n));
        }
        if (tree.nodes.empty()) throw FormatError("empty tree", r.offset());
        m.trees.push_back(std::move(tree));
    }
    finish(r);
    return m;
}

std::string encode_model(const SoftmaxHead& m) {
    auto w = start(ModelKind::softmax_head);
    put_names(w, m.class_names);
    w.put<std::uint64_t>(m.dim);
    w.put<std::uint64_t>(m.hidden);
    w.put<std::uint64_t>(m.classes);
    put_doubles(w, m.w1);
    put_doubles(w, m.b1);
    put_doubles(w, m.w2);
    put_doubles(w, m.b2);
    return w.take();
}

SoftmaxHead decode_head(std::string_view bytes) {
    auto r = open(bytes, ModelKind::softmax_head);
    SoftmaxHead m;
    m.class_names = get_names(r);
    m.dim = get_size(r, "dim", kMaxCount);
    m.hidden = get_size(r, "hidden width", kMaxCount);
    m.classes = get_size(r, "class count", kMaxCount);
    if (m.hidden != 0 && m.dim > bytes.size() / m.hidden) throw FormatError("weights larger than file", r.offset());
    m.w1 = get_doubles(r, m.dim * m.hidden, "W1");
    m.b1 = get_doubles(r, m.hidden, "b1");
    m.w2 = get_doubles(r, m.hidden * m.classes, "W2");
    m.b2 = get_doubles(r, m.classes, "b2");
    finish(r);
    return m;
}

template <typename Model>
void save_model(const Model& m, const std::filesystem::path& path) {
    write_file_atomic(path, encode_model(m));
}

template void save_model<KnnModel>(const KnnModel&, const std::filesystem::path&);
template void save_model<RandomForestModel>(const RandomForestModel&, const std::filesystem::path&);
template void save_model<SoftmaxHead>(const SoftmaxHead&, const std::filesystem::path&);

KnnModel load_knn(const std::filesystem::path& path) { return decode_knn(read_file(path)); }
RandomForestModel load_forest(const std::filesystem::path& path) { return decode_forest(read_file(path)); }
SoftmaxHead load_head(const std::filesystem::path& path) { return decode_head(read_file(path)); }

}  // namespace landmark
