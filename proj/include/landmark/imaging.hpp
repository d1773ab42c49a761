#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace landmark {

/// RGB image, row-major, channel-interleaved, values in [0,1].
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    RasterImage() = default;
    RasterImage(int w, int h, float fill = 0.0f);

    static constexpr int channels = 3;

    float& at(int x, int y, int c) { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
    float at(int x, int y, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }

    bool operator==(const RasterImage&) const = default;
};

/// Single-channel map of doubles, row-major.
struct ScalarMap {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    ScalarMap() = default;
    ScalarMap(int w, int h, double fill = 0.0);

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t size() const { return data.size(); }

    bool operator==(const ScalarMap&) const = default;
};

struct GaborParams {
    double wavelength = 8.0;
    double orientation = 0.0;
    double sigma = 4.0;
    double aspect_ratio = 1.0;
    int kernel_radius = 12;
};

/// The orientation bank used by the saliency stage: 0, pi/4, pi/2, 3pi/4.
std::vector<GaborParams> default_gabor_bank();

RasterImage resize_bilinear(const RasterImage& img, int out_w, int out_h);
ScalarMap resize_bilinear(const ScalarMap& map, int out_w, int out_h);

/// Rec.601 luma.
ScalarMap to_luminance(const RasterImage& img);

struct OpponencyMaps {
    ScalarMap rg;
    ScalarMap by;
};

/// RG = R - G, BY = B - (R + G) / 2.
OpponencyMaps color_opponency(const RasterImage& img);

/// Even-phase Gabor kernel of side 2r+1, mean-subtracted then L2-normalized.
ScalarMap gabor_kernel(const GaborParams& params);

/// out(x,y) = sum_ij k(i,j) in(x-i, y-j), with reflect-101 borders. Output has the input's dims.
ScalarMap convolve_reflect(const ScalarMap& map, const ScalarMap& kernel);

ScalarMap gabor_response(const ScalarMap& map, const GaborParams& params);

/// Level 0 is the input; each further level halves both dimensions.
std::vector<ScalarMap> build_pyramid(const ScalarMap& map, int levels);

/// Copies the half-open box [x0,x1) x [y0,y1).
RasterImage crop(const RasterImage& img, int x0, int y0, int x1, int y1);

RasterImage mirror_horizontal(const RasterImage& img);
ScalarMap mirror_horizontal(const ScalarMap& map);

/// Decodes PNG or JPEG as 8-bit sRGB; channels map to [0,1] by v/255.
RasterImage load_image(const std::filesystem::path& path);
void save_image_png(const RasterImage& img, const std::filesystem::path& path);

/// Writes the map as 8-bit grayscale, [min,max] mapped linearly to [0,255]. Flat maps write zeros.
void save_map_png(const ScalarMap& map, const std::filesystem::path& path);

}  // namespace landmark
