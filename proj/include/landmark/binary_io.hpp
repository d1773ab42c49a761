#pragma once

#include "landmark/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace landmark {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

class ByteWriter {
public:
    template <typename T>
    void put(T value) {
        char buf[sizeof(T)];
        std::memcpy(buf, &value, sizeof(T));
        out_.append(buf, sizeof(T));
    }

    void put_bytes(std::string_view bytes) { out_.append(bytes); }

    const std::string& bytes() const { return out_; }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class ByteReader {
public:
    explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

    template <typename T>
    T get(const char* what) {
        require(sizeof(T), what);
        T value;
        std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return value;
    }

    std::string_view get_bytes(std::size_t n, const char* what) {
        require(n, what);
        auto view = bytes_.substr(pos_, n);
        pos_ += n;
        return view;
    }

    std::size_t offset() const { return pos_; }
    bool at_end() const { return pos_ == bytes_.size(); }

private:
    void require(std::size_t n, const char* what) const {
        if (bytes_.size() - pos_ < n) {
            throw FormatError(std::string("truncated input while reading ") + what, pos_);
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace landmark
