#pragma once

#include "landmark/forest.hpp"
#include "landmark/head.hpp"
#include "landmark/knn.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace landmark {

// Container: "SLE1", u8 kind, then the kind's little-endian payload. Layout in docs/model_format.md.
enum class ModelKind : std::uint8_t { knn = 1, random_forest = 2, softmax_head = 3 };

ModelKind peek_model_kind(std::string_view bytes);

std::string encode_model(const KnnModel& m);
std::string encode_model(const RandomForestModel& m);
std::string encode_model(const SoftmaxHead& m);

KnnModel decode_knn(std::string_view bytes);
RandomForestModel decode_forest(std::string_view bytes);
SoftmaxHead decode_head(std::string_view bytes);

template <typename Model>
void save_model(const Model& m, const std::filesystem::path& path);

KnnModel load_knn(const std::filesystem::path& path);
RandomForestModel load_forest(const std::filesystem::path& path);
SoftmaxHead load_head(const std::filesystem::path& path);

}  // namespace landmark
