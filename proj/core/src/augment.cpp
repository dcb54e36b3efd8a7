// Copyright 2026 The Occlusynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "occlusynth/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "occlusynth/error.hpp"

namespace occlusynth {

AugmentParams sample_params(Rng& rng, const AugmentRanges& r) {
  AugmentParams p;
  p.hsv_s_scale = rng.uniform(r.hsv_s_scale.lo, r.hsv_s_scale.hi);
  p.hsv_v_scale = rng.uniform(r.hsv_v_scale.lo, r.hsv_v_scale.hi);
  p.affine_scale = rng.uniform(r.affine_scale.lo, r.affine_scale.hi);
  p.translate_x = rng.uniform(r.translate.lo, r.translate.hi);
  p.translate_y = rng.uniform(r.translate.lo, r.translate.hi);
  p.rotate_deg = rng.uniform(r.rotate_deg.lo, r.rotate_deg.hi);
  p.shear_deg = rng.uniform(r.shear_deg.lo, r.shear_deg.hi);
  p.blend_sigma = rng.uniform(r.blend_sigma.lo, r.blend_sigma.hi);
  return p;
}

namespace {

struct Hsv {
  double h;  // degrees in [0, 360)
  double s;  // [0, 255]
  double v;  // [0, 255]
};

Hsv rgb_to_hsv(double r, double g, double b) {
  const double v = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double c = v - mn;
  double h = 0.0;
  if (c > 0.0) {
    if (v == r) {
      h = 60.0 * std::fmod((g - b) / c + 6.0, 6.0);
    } else if (v == g) {
      h = 60.0 * ((b - r) / c + 2.0);
    } else {
      h = 60.0 * ((r - g) / c + 4.0);
    }
  }
  const double s = v > 0.0 ? 255.0 * c / v : 0.0;
  return {h, s, v};
}

std::array<double, 3> hsv_to_rgb(const Hsv& hsv) {
  const double c = hsv.v * hsv.s / 255.0;
  const double hp = hsv.h / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0.0, g = 0.0, b = 0.0;
  if (hp < 1.0) {
    r = c;
    g = x;
  } else if (hp < 2.0) {
    r = x;
    g = c;
  } else if (hp < 3.0) {
    g = c;
    b = x;
  } else if (hp < 4.0) {
    g = x;
    b = c;
  } else if (hp < 5.0) {
    r = x;
    b = c;
  } else {
    r = c;
    b = x;
  }
  const double m = hsv.v - c;
  return {r + m, g + m, b + m};
}

std::uint8_t to_u8(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

}  // namespace

Image apply_hsv(const Image& pixels, double s_scale, double v_scale) {
  Image out = pixels;
  const std::size_t n = static_cast<std::size_t>(pixels.width) * pixels.height;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = pixels.data.data() + 3 * i;
    Hsv hsv = rgb_to_hsv(p[0], p[1], p[2]);
    hsv.s = std::clamp(hsv.s * s_scale, 0.0, 255.0);
    hsv.v = std::clamp(hsv.v * v_scale, 0.0, 255.0);
    const std::array<double, 3> rgb = hsv_to_rgb(hsv);
    std::uint8_t* q = out.data.data() + 3 * i;
    q[0] = to_u8(rgb[0]);
    q[1] = to_u8(rgb[1]);
    q[2] = to_u8(rgb[2]);
  }
  return out;
}

namespace {

// Row-major 2x2 matrix with translation column.
struct Affine {
  double a, b, c, d;  // [a b; c d]
  double tx, ty;

  Affine inverse() const {
    const double det = a * d - b * c;
    Affine inv{};
    inv.a = d / det;
    inv.b = -b / det;
    inv.c = -c / det;
    inv.d = a / det;
    inv.tx = -(inv.a * tx + inv.b * ty);
    inv.ty = -(inv.c * tx + inv.d * ty);
    return inv;
  }
};

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

// scale -> shear -> rotate, applied in that order about the origin.
Affine linear_part(const AugmentParams& p) {
  const double s = p.affine_scale;
  const double sh = std::tan(p.shear_deg * kDegToRad);
  const double cr = std::cos(p.rotate_deg * kDegToRad);
  const double sr = std::sin(p.rotate_deg * kDegToRad);
  // R * Sh * S with Sh = [1 sh; 0 1], S = s*I.
  Affine m{};
  m.a = s * cr;
  m.b = s * (cr * sh - sr);
  m.c = s * sr;
  m.d = s * (sr * sh + cr);
  return m;
}

}  // namespace

InstanceImage apply_affine(const InstanceImage& img,
                           const AugmentParams& params, int out_width,
                           int out_height) {
  if (out_width <= 0 || out_height <= 0) {
    throw ValidationError("apply_affine: non-positive output size");
  }
  const int sw = img.pixels.width;
  const int sh = img.pixels.height;

  Affine fwd = linear_part(params);
  const double scx = 0.5 * sw;
  const double scy = 0.5 * sh;
  const double dcx = 0.5 * out_width + params.translate_x;
  const double dcy = 0.5 * out_height + params.translate_y;
  fwd.tx = dcx - (fwd.a * scx + fwd.b * scy);
  fwd.ty = dcy - (fwd.c * scx + fwd.d * scy);
  const Affine inv = fwd.inverse();

  InstanceImage out;
  out.object_class = img.object_class;
  out.view_id = img.view_id;
  out.pixels = Image(out_width, out_height);
  out.foreground = BitMask(out_width, out_height);

  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      const double dx = x + 0.5;
      const double dy = y + 0.5;
      const double sx = inv.a * dx + inv.b * dy + inv.tx;
      const double sy = inv.c * dx + inv.d * dy + inv.ty;

      // Mask: nearest source pixel.
      const int mx = static_cast<int>(std::floor(sx));
      const int my = static_cast<int>(std::floor(sy));
      if (mx >= 0 && my >= 0 && mx < sw && my < sh &&
          img.foreground.test(mx, my)) {
        out.foreground.set(x, y);
      }

      // Pixels: bilinear over pixel centers, black outside the source.
      const double u = sx - 0.5;
      const double v = sy - 0.5;
      const int x0 = static_cast<int>(std::floor(u));
      const int y0 = static_cast<int>(std::floor(v));
      if (x0 < -1 || y0 < -1 || x0 >= sw || y0 >= sh) continue;
      const double fx = u - x0;
      const double fy = v - y0;
      std::uint8_t* dst = out.pixels.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        auto sample = [&](int px, int py) -> double {
          if (px < 0 || py < 0 || px >= sw || py >= sh) return 0.0;
          return img.pixels.pixel(px, py)[c];
        };
        const double top =
            sample(x0, y0) * (1.0 - fx) + sample(x0 + 1, y0) * fx;
        const double bot =
            sample(x0, y0 + 1) * (1.0 - fx) + sample(x0 + 1, y0 + 1) * fx;
        dst[c] = to_u8(top * (1.0 - fy) + bot * fy);
      }
    }
  }
  return out;
}

std::vector<float> gaussian_matte(const BitMask& foreground, double sigma) {
  const int w = foreground.width();
  const int h = foreground.height();
  std::vector<float> matte(static_cast<std::size_t>(w) * h, 0.0f);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (foreground.test(x, y)) {
        matte[static_cast<std::size_t>(y) * w + x] = 1.0f;
      }
    }
  }
  if (sigma <= 0.0) return matte;

  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<float> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double k = std::exp(-0.5 * (i * i) / (sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = static_cast<float>(k);
    sum += k;
  }
  for (float& k : kernel) k = static_cast<float>(k / sum);

  // Separable blur with zero padding outside the instance frame.
  std::vector<float> tmp(matte.size(), 0.0f);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int i = -radius; i <= radius; ++i) {
        const int nx = x + i;
        if (nx < 0 || nx >= w) continue;
        acc += kernel[static_cast<std::size_t>(i + radius)] *
               matte[static_cast<std::size_t>(y) * w + nx];
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int i = -radius; i <= radius; ++i) {
        const int ny = y + i;
        if (ny < 0 || ny >= h) continue;
        acc += kernel[static_cast<std::size_t>(i + radius)] *
               tmp[static_cast<std::size_t>(ny) * w + x];
      }
      matte[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return matte;
}

void blend_paste(Image& canvas, const InstanceImage& instance, int offset_x,
                 int offset_y, double sigma) {
  const int iw = instance.pixels.width;
  const int ih = instance.pixels.height;
  const int x0 = std::max(0, -offset_x);
  const int y0 = std::max(0, -offset_y);
  const int x1 = std::min(iw, canvas.width - offset_x);
  const int y1 = std::min(ih, canvas.height - offset_y);
  if (x0 >= x1 || y0 >= y1 || !instance.foreground.any()) return;

  const std::vector<float> matte = gaussian_matte(instance.foreground, sigma);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const float alpha = matte[static_cast<std::size_t>(y) * iw + x];
      if (alpha <= 0.0f) continue;
      const std::uint8_t* src = instance.pixels.pixel(x, y);
      std::uint8_t* dst = canvas.pixel(x + offset_x, y + offset_y);
      if (alpha >= 1.0f) {
        dst[0] = src[0];
        dst[1] = src[1];
        dst[2] = src[2];
      } else {
        for (int c = 0; c < 3; ++c) {
          dst[c] = to_u8(alpha * src[c] + (1.0f - alpha) * dst[c]);
        }
      }
    }
  }
}

}  // namespace occlusynth
