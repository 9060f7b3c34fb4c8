#pragma once

#include <string>
#include <vector>

namespace trajalign::enc {

// Planar-interleaved image: px[(y*width + x)*channels + c], values in [0,1].
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> px;

    Image() = default;
    Image(int w, int h, int c)
        : width(w), height(h), channels(c),
          px(static_cast<size_t>(w) * h * c, 0.0) {}

    double& at(int y, int x, int c) {
        return px[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    double at(int y, int x, int c) const {
        return px[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    bool same_shape(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

// Binary PPM (P6, 8 bit). Values are quantized on write.
Image read_ppm(const std::string& path);
void write_ppm(const Image& img, const std::string& path);

// Bilinear resample of a sub-window [x0, x0+w) x [y0, y0+h) to out_w x out_h.
Image resize_bilinear(const Image& src, double x0, double y0, double w, double h,
                      int out_w, int out_h);

}  // namespace trajalign::enc
