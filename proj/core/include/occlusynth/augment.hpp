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

#ifndef OCCLUSYNTH_AUGMENT_HPP_
#define OCCLUSYNTH_AUGMENT_HPP_

#include "occlusynth/image.hpp"
#include "occlusynth/ingest.hpp"
#include "occlusynth/mask.hpp"
#include "occlusynth/rng.hpp"

namespace occlusynth {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

/// Sampling intervals for the augmentation parameters. The defaults are
/// the ranges the synthesis pipeline was tuned with: saturation/value
/// gain 0.5-2.0, scale 0.5-1.0, translation +-16 px, rotation +-180 deg,
/// shear +-16 deg, blend sigma 0-1.
struct AugmentRanges {
  Interval hsv_s_scale{0.5, 2.0};
  Interval hsv_v_scale{0.5, 2.0};
  Interval affine_scale{0.5, 1.0};
  Interval translate{-16.0, 16.0};  // applied to x and y independently
  Interval rotate_deg{-180.0, 180.0};
  Interval shear_deg{-16.0, 16.0};
  Interval blend_sigma{0.0, 1.0};
};

/// One concrete draw of augmentation parameters.
struct AugmentParams {
  double hsv_s_scale = 1.0;
  double hsv_v_scale = 1.0;
  double affine_scale = 1.0;
  double translate_x = 0.0;
  double translate_y = 0.0;
  double rotate_deg = 0.0;
  double shear_deg = 0.0;
  double blend_sigma = 0.0;
};

/// Draws each field independently and uniformly from its interval. The
/// draw order is fixed (s, v, scale, tx, ty, rotate, shear, sigma); it is
/// part of the reproducibility contract for seeded generation.
AugmentParams sample_params(Rng& rng, const AugmentRanges& ranges = {});

/// Multiplies the S and V channels in HSV space (hexcone model, S and V
/// on a 0-255 scale) by the given gains, clamping to the valid range.
/// Hue is unchanged; gray pixels stay gray.
Image apply_hsv(const Image& pixels, double s_scale, double v_scale);

/// Warps pixels and foreground with the affine map scale -> shear ->
/// rotate -> translate about the image center. Pixels are sampled
/// bilinearly (outside the source reads as black), the mask with nearest
/// neighbor so it stays binary.
InstanceImage apply_affine(const InstanceImage& img,
                           const AugmentParams& params, int out_width,
                           int out_height);

/// Pastes `instance` onto `canvas` with its origin at (offset_x,
/// offset_y). The alpha matte is the binary foreground blurred by a
/// normalized sampled Gaussian of the given sigma (kernel radius
/// ceil(3*sigma)); sigma 0 pastes hard. Pixels farther than the kernel
/// radius from the foreground are untouched. An instance entirely
/// outside the canvas is a no-op.
void blend_paste(Image& canvas, const InstanceImage& instance, int offset_x,
                 int offset_y, double sigma);

/// The blurred matte used by blend_paste, exposed for tests: one float in
/// [0, 1] per instance pixel.
std::vector<float> gaussian_matte(const BitMask& foreground, double sigma);

}  // namespace occlusynth

#endif  // OCCLUSYNTH_AUGMENT_HPP_
