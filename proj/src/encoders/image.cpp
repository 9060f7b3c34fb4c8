#include "encoders/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "core/error.hpp"

namespace trajalign::enc {

Image read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "FileNotFound", path);
    std::string magic;
    in >> magic;
    require(magic == "P6", "ParseError", path + ": not a binary PPM");
    auto next_int = [&in, &path]() {
        // Skip whitespace and '#' comments between header fields.
        for (;;) {
            int ch = in.peek();
            if (ch == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(ch)) {
                in.get();
            } else {
                break;
            }
        }
        long v = -1;
        in >> v;
        require(in.good() && v >= 0, "ParseError", path + ": bad PPM header");
        return static_cast<int>(v);
    };
    const int w = next_int();
    const int h = next_int();
    const int maxval = next_int();
    require(maxval == 255, "ParseError", path + ": only maxval 255 supported");
    in.get();  // single whitespace after header
    Image img(w, h, 3);
    std::vector<unsigned char> buf(static_cast<size_t>(w) * h * 3);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    require(in.gcount() == static_cast<std::streamsize>(buf.size()), "ParseError",
            path + ": truncated pixel data");
    for (size_t i = 0; i < buf.size(); ++i) img.px[i] = buf[i] / 255.0;
    return img;
}

void write_ppm(const Image& img, const std::string& path) {
    require(img.channels == 3, "ShapeMismatch", "PPM writer expects 3 channels");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(out.good(), "IoError", "cannot open " + path + " for writing");
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> buf(img.px.size());
    for (size_t i = 0; i < img.px.size(); ++i) {
        const double v = std::clamp(img.px[i], 0.0, 1.0);
        buf[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    require(out.good(), "IoError", "write failed: " + path);
}

Image resize_bilinear(const Image& src, double x0, double y0, double w, double h,
                      int out_w, int out_h) {
    Image out(out_w, out_h, src.channels);
    for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
            // Sample at pixel centers of the source window.
            const double sx = x0 + (ox + 0.5) * w / out_w - 0.5;
            const double sy = y0 + (oy + 0.5) * h / out_h - 0.5;
            const int ix = static_cast<int>(std::floor(sx));
            const int iy = static_cast<int>(std::floor(sy));
            const double fx = sx - ix;
            const double fy = sy - iy;
            for (int c = 0; c < src.channels; ++c) {
                auto sample = [&src, c](int y, int x) {
                    x = std::clamp(x, 0, src.width - 1);
                    y = std::clamp(y, 0, src.height - 1);
                    return src.at(y, x, c);
                };
                const double v00 = sample(iy, ix), v01 = sample(iy, ix + 1);
                const double v10 = sample(iy + 1, ix), v11 = sample(iy + 1, ix + 1);
                out.at(oy, ox, c) = (1 - fy) * ((1 - fx) * v00 + fx * v01) +
                                    fy * ((1 - fx) * v10 + fx * v11);
            }
        }
    }
    return out;
}

}  // namespace trajalign::enc
