#include "landmark/imaging.hpp"

#include "landmark/fileio.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace landmark {

RasterImage::RasterImage(int w, int h, float fill)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {}

ScalarMap::ScalarMap(int w, int h, double fill)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

std::vector<GaborParams> default_gabor_bank() {
    std::vector<GaborParams> bank;
    for (int i = 0; i < 4; ++i) {
        GaborParams p;
        p.orientation = i * std::numbers::pi / 4.0;
        bank.push_back(p);
    }
    return bank;
}

namespace {

// Source sample positions for one output axis, half-pixel aligned and clamped.
struct AxisTap {
    int lo;
    int hi;
    double frac;
};

std::vector<AxisTap> axis_taps(int in_size, int out_size) {
    std::vector<AxisTap> taps(static_cast<std::size_t>(out_size));
    const double scale = static_cast<double>(in_size) / out_size;
    for (int i = 0; i < out_size; ++i) {
        double s = (i + 0.5) * scale - 0.5;
        s = std::clamp(s, 0.0, static_cast<double>(in_size - 1));
        int lo = static_cast<int>(std::floor(s));
        int hi = std::min(lo + 1, in_size - 1);
        taps[static_cast<std::size_t>(i)] = {lo, hi, s - lo};
    }
    return taps;
}

void check_resize_request(int in_w, int in_h, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) {
        throw std::invalid_argument("resize_bilinear: output dimensions must be >= 1, got " +
                                    std::to_string(out_w) + "x" + std::to_string(out_h));
    }
    if (in_w < 1 || in_h < 1) {
        throw std::invalid_argument("resize_bilinear: empty input");
    }
}

}  // namespace

RasterImage resize_bilinear(const RasterImage& img, int out_w, int out_h) {
    check_resize_request(img.width, img.height, out_w, out_h);
    if (out_w == img.width && out_h == img.height) {
        return img;
    }
    const auto xs = axis_taps(img.width, out_w);
    const auto ys = axis_taps(img.height, out_h);
    RasterImage out(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        const auto& ty = ys[static_cast<std::size_t>(y)];
        for (int x = 0; x < out_w; ++x) {
            const auto& tx = xs[static_cast<std::size_t>(x)];
            for (int c = 0; c < 3; ++c) {
                double top = std::lerp(static_cast<double>(img.at(tx.lo, ty.lo, c)),
                                       static_cast<double>(img.at(tx.hi, ty.lo, c)), tx.frac);
                double bottom = std::lerp(static_cast<double>(img.at(tx.lo, ty.hi, c)),
                                          static_cast<double>(img.at(tx.hi, ty.hi, c)), tx.frac);
                double v = std::lerp(top, bottom, ty.frac);
                out.at(x, y, c) = std::clamp(static_cast<float>(v), 0.0f, 1.0f);
            }
        }
    }
    return out;
}

ScalarMap resize_bilinear(const ScalarMap& map, int out_w, int out_h) {
    check_resize_request(map.width, map.height, out_w, out_h);
    if (out_w == map.width && out_h == map.height) {
        return map;
    }
    const auto xs = axis_taps(map.width, out_w);
    const auto ys = axis_taps(map.height, out_h);
    ScalarMap out(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        const auto& ty = ys[static_cast<std::size_t>(y)];
        for (int x = 0; x < out_w; ++x) {
            const auto& tx = xs[static_cast<std::size_t>(x)];
            double top = std::lerp(map.at(tx.lo, ty.lo), map.at(tx.hi, ty.lo), tx.frac);
            double bottom = std::lerp(map.at(tx.lo, ty.hi), map.at(tx.hi, ty.hi), tx.frac);
            out.at(x, y) = std::lerp(top, bottom, ty.frac);
        }
    }
    return out;
}

ScalarMap to_luminance(const RasterImage& img) {
    ScalarMap out(img.width, img.height);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        const double r = img.data[i * 3];
        const double g = img.data[i * 3 + 1];
        const double b = img.data[i * 3 + 2];
        out.data[i] = std::clamp(0.299 * r + 0.587 * g + 0.114 * b, 0.0, 1.0);
    }
    return out;
}

OpponencyMaps color_opponency(const RasterImage& img) {
    OpponencyMaps out{ScalarMap(img.width, img.height), ScalarMap(img.width, img.height)};
    for (std::size_t i = 0; i < out.rg.data.size(); ++i) {
        const double r = img.data[i * 3];
        const double g = img.data[i * 3 + 1];
        const double b = img.data[i * 3 + 2];
        out.rg.data[i] = r - g;
        out.by.data[i] = b - (r + g) / 2.0;
    }
    return out;
}

ScalarMap gabor_kernel(const GaborParams& p) {
    if (!(p.wavelength > 0.0) || !(p.sigma > 0.0) || p.kernel_radius < 1) {
        throw std::invalid_argument("gabor_kernel: wavelength and sigma must be > 0, radius >= 1");
    }
    const int r = p.kernel_radius;
    const int side = 2 * r + 1;
    ScalarMap k(side, side);
    const double ct = std::cos(p.orientation);
    const double st = std::sin(p.orientation);
    const double two_sigma2 = 2.0 * p.sigma * p.sigma;
    const double gamma2 = p.aspect_ratio * p.aspect_ratio;
    for (int j = -r; j <= r; ++j) {
        for (int i = -r; i <= r; ++i) {
            const double xr = i * ct + j * st;
            const double yr = -i * st + j * ct;
            const double env = std::exp(-(xr * xr + gamma2 * yr * yr) / two_sigma2);
            k.at(i + r, j + r) = env * std::cos(2.0 * std::numbers::pi * xr / p.wavelength);
        }
    }
    double mean = 0.0;
    for (double v : k.data) mean += v;
    mean /= static_cast<double>(k.size());
    double norm2 = 0.0;
    for (double& v : k.data) {
        v -= mean;
        norm2 += v * v;
    }
    const double norm = std::sqrt(norm2);
    for (double& v : k.data) v /= norm;
    return k;
}

namespace {

int reflect101(int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * (n - 1) - i;
    return i;
}

}  // namespace

ScalarMap convolve_reflect(const ScalarMap& map, const ScalarMap& kernel) {
    if (kernel.width % 2 == 0 || kernel.height % 2 == 0) {
        throw std::invalid_argument("convolve_reflect: kernel sides must be odd");
    }
    const int rx = kernel.width / 2;
    const int ry = kernel.height / 2;
    if (map.width <= 2 * rx || map.height <= 2 * ry) {
        throw std::invalid_argument("convolve_reflect: map " + std::to_string(map.width) + "x" +
                                    std::to_string(map.height) + " smaller than kernel " +
                                    std::to_string(kernel.width) + "x" + std::to_string(kernel.height));
    }
    // Padded copy so the inner loop is branch-free.
    const int pw = map.width + 2 * rx;
    const int ph = map.height + 2 * ry;
    std::vector<double> padded(static_cast<std::size_t>(pw) * ph);
    for (int y = 0; y < ph; ++y) {
        const int sy = reflect101(y - ry, map.height);
        for (int x = 0; x < pw; ++x) {
            padded[static_cast<std::size_t>(y) * pw + x] = map.at(reflect101(x - rx, map.width), sy);
        }
    }
    // Flipped kernel turns the convolution into a correlation over the padded buffer.
    std::vector<double> flipped(kernel.data.rbegin(), kernel.data.rend());
    ScalarMap out(map.width, map.height);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            double acc = 0.0;
            for (int j = 0; j < kernel.height; ++j) {
                const double* row = &padded[static_cast<std::size_t>(y + j) * pw + x];
                const double* krow = &flipped[static_cast<std::size_t>(j) * kernel.width];
                for (int i = 0; i < kernel.width; ++i) {
                    acc += krow[i] * row[i];
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

ScalarMap gabor_response(const ScalarMap& map, const GaborParams& params) {
    return convolve_reflect(map, gabor_kernel(params));
}

std::vector<ScalarMap> build_pyramid(const ScalarMap& map, int levels) {
    if (levels < 1) {
        throw std::invalid_argument("build_pyramid: levels must be >= 1");
    }
    const int need = 1 << (levels - 1);
    if (map.width < need || map.height < need) {
        throw std::invalid_argument("build_pyramid: " + std::to_string(map.width) + "x" +
                                    std::to_string(map.height) + " map too small for " +
                                    std::to_string(levels) + " levels");
    }
    std::vector<ScalarMap> pyr;
    pyr.reserve(static_cast<std::size_t>(levels));
    pyr.push_back(map);
    for (int i = 1; i < levels; ++i) {
        const auto& prev = pyr.back();
        pyr.push_back(resize_bilinear(prev, prev.width / 2, prev.height / 2));
    }
    return pyr;
}

RasterImage crop(const RasterImage& img, int x0, int y0, int x1, int y1) {
    if (x0 < 0 || y0 < 0 || x1 > img.width || y1 > img.height || x0 >= x1 || y0 >= y1) {
        throw std::invalid_argument("crop: box outside image");
    }
    RasterImage out(x1 - x0, y1 - y0);
    for (int y = y0; y < y1; ++y) {
        auto src = img.data.begin() + (static_cast<std::ptrdiff_t>(y) * img.width + x0) * 3;
        std::copy(src, src + static_cast<std::ptrdiff_t>(x1 - x0) * 3,
                  out.data.begin() + static_cast<std::ptrdiff_t>(y - y0) * out.width * 3);
    }
    return out;
}

RasterImage mirror_horizontal(const RasterImage& img) {
    RasterImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                out.at(img.width - 1 - x, y, c) = img.at(x, y, c);
            }
        }
    }
    return out;
}

ScalarMap mirror_horizontal(const ScalarMap& map) {
    ScalarMap out(map.width, map.height);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            out.at(map.width - 1 - x, y) = map.at(x, y);
        }
    }
    return out;
}

RasterImage load_image(const std::filesystem::path& path) {
    cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (bgr.empty()) {
        throw std::runtime_error("cannot decode image " + path.string());
    }
    RasterImage img(bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            img.at(x, y, 0) = row[x][2] / 255.0f;
            img.at(x, y, 1) = row[x][1] / 255.0f;
            img.at(x, y, 2) = row[x][0] / 255.0f;
        }
    }
    return img;
}

namespace {

void write_png(const cv::Mat& mat, const std::filesystem::path& path) {
    std::vector<uchar> buf;
    if (!cv::imencode(".png", mat, buf)) {
        throw std::runtime_error("PNG encoding failed for " + path.string());
    }
    write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(buf.data()), buf.size()));
}

std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

void save_image_png(const RasterImage& img, const std::filesystem::path& path) {
    cv::Mat bgr(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.width; ++x) {
            row[x] = cv::Vec3b(to_byte(img.at(x, y, 2)), to_byte(img.at(x, y, 1)), to_byte(img.at(x, y, 0)));
        }
    }
    write_png(bgr, path);
}

void save_map_png(const ScalarMap& map, const std::filesystem::path& path) {
    const auto [lo, hi] = std::minmax_element(map.data.begin(), map.data.end());
    const double range = (lo == map.data.end()) ? 0.0 : *hi - *lo;
    cv::Mat gray(map.height, map.width, CV_8UC1, cv::Scalar(0));
    if (range > 0.0) {
        for (int y = 0; y < map.height; ++y) {
            auto* row = gray.ptr<std::uint8_t>(y);
            for (int x = 0; x < map.width; ++x) {
                row[x] = to_byte((map.at(x, y) - *lo) / range);
            }
        }
    }
    write_png(gray, path);
}

}  // namespace landmark
