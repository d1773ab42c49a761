#include "synthetic.hpp"

#include "landmark/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace landmark::testing {

namespace {

struct Color {
    float r, g, b;
};

Color random_color(std::mt19937_64& rng) {
    std::uniform_real_distribution<float> u(0.1f, 0.9f);
    return {u(rng), u(rng), u(rng)};
}

void put(RasterImage& img, int x, int y, Color c) {
    img.at(x, y, 0) = c.r;
    img.at(x, y, 1) = c.g;
    img.at(x, y, 2) = c.b;
}

Color contrasting(std::mt19937_64& rng, Color base) {
    for (;;) {
        Color c = random_color(rng);
        const float d = std::abs(c.r - base.r) + std::abs(c.g - base.g) + std::abs(c.b - base.b);
        if (d > 0.6f) return c;
    }
}

void add_noise(RasterImage& img, std::mt19937_64& rng) {
    std::normal_distribution<float> n(0.0f, 0.02f);
    for (float& v : img.data) v = std::clamp(v + n(rng), 0.02f, 0.98f);
}

}  // namespace

RasterImage make_synthetic_image(int cls, int size, std::mt19937_64& rng) {
    RasterImage img(size, size);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Color a = random_color(rng);
    const Color b = contrasting(rng, a);
    switch (cls) {
        case 0: {  // arches: wall with round-topped openings
            const int openings = 2 + static_cast<int>(u(rng) * 2);
            const int top = static_cast<int>(size * (0.2 + 0.15 * u(rng)));
            const double pitch = static_cast<double>(size) / openings;
            const double radius = pitch * (0.28 + 0.1 * u(rng));
            const double spring = top + radius + size * 0.1;
            for (int y = 0; y < size; ++y) {
                for (int x = 0; x < size; ++x) {
                    bool sky = y < top;
                    if (!sky) {
                        const int k = static_cast<int>(x / pitch);
                        const double cx = (k + 0.5) * pitch;
                        const double dx = x - cx;
                        if (std::abs(dx) < radius && y >= spring) sky = true;
                        if (y < spring && dx * dx + (y - spring) * (y - spring) < radius * radius) sky = true;
                    }
                    put(img, x, y, sky ? a : b);
                }
            }
            break;
        }
        case 1: {  // blobs: smooth Gaussian spots
            for (int y = 0; y < size; ++y)
                for (int x = 0; x < size; ++x) put(img, x, y, a);
            const int n = 3 + static_cast<int>(u(rng) * 4);
            for (int k = 0; k < n; ++k) {
                const Color c = random_color(rng);
                const double cx = u(rng) * size, cy = u(rng) * size;
                const double s = size * (0.08 + 0.1 * u(rng));
                for (int y = 0; y < size; ++y) {
                    for (int x = 0; x < size; ++x) {
                        const double w = std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (2 * s * s));
                        img.at(x, y, 0) = static_cast<float>(img.at(x, y, 0) * (1 - w) + c.r * w);
                        img.at(x, y, 1) = static_cast<float>(img.at(x, y, 1) * (1 - w) + c.g * w);
                        img.at(x, y, 2) = static_cast<float>(img.at(x, y, 2) * (1 - w) + c.b * w);
                    }
                }
            }
            break;
        }
        case 2: {  // checker
            const int cell = 3 + static_cast<int>(u(rng) * 4);
            const int ox = static_cast<int>(u(rng) * cell), oy = static_cast<int>(u(rng) * cell);
            for (int y = 0; y < size; ++y)
                for (int x = 0; x < size; ++x) put(img, x, y, (((x + ox) / cell + (y + oy) / cell) % 2) ? a : b);
            break;
        }
        default: {  // stripes, near-horizontal or near-vertical
            const double period = 6.0 + u(rng) * 6.0;
            const double theta = (u(rng) < 0.5 ? 0.0 : std::numbers::pi / 2) + (u(rng) - 0.5) * 0.3;
            const double phase = u(rng) * period;
            for (int y = 0; y < size; ++y) {
                for (int x = 0; x < size; ++x) {
                    const double t = x * std::cos(theta) + y * std::sin(theta) + phase;
                    put(img, x, y, std::fmod(t + 100 * period, period) < period / 2 ? a : b);
                }
            }
            break;
        }
    }
    add_noise(img, rng);
    return img;
}

std::vector<double> channel_statistics(const RasterImage& full) {
    const RasterImage img = full.width > 64 || full.height > 64 ? resize_bilinear(full, 64, 64) : full;
    const int w = img.width, h = img.height;
    std::vector<double> lum(static_cast<std::size_t>(w) * h);
    double mean[3] = {0, 0, 0};
    double sat = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double r = img.at(x, y, 0), g = img.at(x, y, 1), b = img.at(x, y, 2);
            lum[static_cast<std::size_t>(y) * w + x] = 0.299 * r + 0.587 * g + 0.114 * b;
            mean[0] += r;
            mean[1] += g;
            mean[2] += b;
            sat += std::max({r, g, b}) - std::min({r, g, b});
        }
    }
    const double n = static_cast<double>(w) * h;
    auto L = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return lum[static_cast<std::size_t>(y) * w + x];
    };
    double lmean = 0, lvar = 0;
    for (double v : lum) lmean += v;
    lmean /= n;
    for (double v : lum) lvar += (v - lmean) * (v - lmean);
    double gx = 0, gy = 0, gd1 = 0, gd2 = 0, lap = 0, strong = 0, hmin = 0, hmax = 0;
    double ac[4] = {0, 0, 0, 0};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double dx = std::abs(L(x + 1, y) - L(x, y));
            const double dy = std::abs(L(x, y + 1) - L(x, y));
            gx += dx;
            gy += dy;
            gd1 += std::abs(L(x + 1, y + 1) - L(x, y));
            gd2 += std::abs(L(x - 1, y + 1) - L(x, y));
            lap += std::abs(4 * L(x, y) - L(x + 1, y) - L(x - 1, y) - L(x, y + 1) - L(x, y - 1));
            strong += std::hypot(dx, dy) > 0.1 ? 1 : 0;
            hmin += std::min(dx, dy);
            hmax += std::max(dx, dy);
            const double c = L(x, y) - lmean;
            ac[0] += c * (L(x + 2, y) - lmean);
            ac[1] += c * (L(x, y + 2) - lmean);
            ac[2] += c * (L(x + 5, y) - lmean);
            ac[3] += c * (L(x, y + 5) - lmean);
        }
    }
    const double var = std::max(lvar, 1e-9);
    const double grad = gx + gy + 1e-9;
    std::vector<double> s = {
        mean[0] / n,
        mean[1] / n,
        mean[2] / n,
        sat / n,
        std::sqrt(lvar / n),
        (gx + gy) / n,
        (gd1 + gd2) / n,
        std::abs(gx - gy) / grad,
        hmin / (hmax + 1e-9),
        lap / (n * 2),
        strong / n,
        lap / (2 * grad + 1e-9),
        ac[0] / var,
        ac[1] / var,
        ac[2] / var,
        ac[3] / var,
        std::max(ac[0], ac[1]) / var - std::min(ac[0], ac[1]) / var,
        (gd1 + gd2) / (grad * 1.4142),
    };
    return s;
}

std::vector<float> fake_embedding(const std::string& id, const RasterImage& img, std::uint32_t dim) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : id) h = (h ^ c) * 0x100000001b3ULL;
    auto rng = make_stream(h, "fake-embedding");
    std::normal_distribution<float> noise(0.0f, 0.02f);
    std::vector<float> v(dim);
    for (float& x : v) x = noise(rng);
    const auto stats = channel_statistics(img);
    const std::size_t informative = std::min<std::size_t>(dim, 512);
    for (std::size_t i = 0; i < informative; ++i) {
        v[i] += static_cast<float>(2.0 * stats[i % stats.size()]);
    }
    return v;
}

}  // namespace landmark::testing
