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

#ifndef OCCLUSYNTH_MASK_HPP_
#define OCCLUSYNTH_MASK_HPP_

#include <cstdint>
#include <vector>

namespace occlusynth {

/// Half-open pixel rectangle [x_min, x_max) x [y_min, y_max).
/// The empty box is {0, 0, 0, 0}.
struct BoundingBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  bool empty() const { return x_min >= x_max || y_min >= y_max; }
  int width() const { return empty() ? 0 : x_max - x_min; }
  int height() const { return empty() ? 0 : y_max - y_min; }

  /// Grows the box by `px` on every side and clips it to [0,w) x [0,h).
  /// An empty box stays empty.
  BoundingBox dilated(int px, int clip_width, int clip_height) const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Dense binary mask stored as a row-major bit grid packed into 64-bit
/// words. Bit index of pixel (x, y) is y*width + x. All set-algebra
/// operations require operands of identical dimensions and preserve them.
///
/// Masks are plain values: cheap to copy at typical image sizes, safe to
/// share across threads once built.
class BitMask {
 public:
  BitMask() = default;
  BitMask(int width, int height);

  static BitMask filled(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t size() const {
    return static_cast<std::int64_t>(width_) * height_;
  }

  bool test(int x, int y) const {
    const std::int64_t i = static_cast<std::int64_t>(y) * width_ + x;
    return (words_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u;
  }
  void set(int x, int y, bool value = true);

  /// Number of set pixels.
  std::int64_t area() const;
  bool any() const;

  /// Set pixels inside the clipped rectangle [x0,x1) x [y0,y1).
  std::int64_t area_in_rect(int x0, int y0, int x1, int y1) const;

  friend bool operator==(const BitMask&, const BitMask&) = default;

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  friend BitMask mask_and(const BitMask&, const BitMask&);
  friend BitMask mask_or(const BitMask&, const BitMask&);
  friend BitMask mask_diff(const BitMask&, const BitMask&);
  friend std::int64_t intersection_area(const BitMask&, const BitMask&);
  friend void blit(BitMask&, const BitMask&, int, int);

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint64_t> words_;  // trailing bits beyond size() stay 0
};

/// Run-length encoded binary mask. Runs alternate pixel value 0,1,0,1,...
/// in row-major scan order, starting with a run of zeros; only counts[0]
/// may be zero and the counts sum to width*height.
struct RleMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> counts;

  friend bool operator==(const RleMask&, const RleMask&) = default;
};

/// Element-wise set algebra. Throws ValidationError on dimension mismatch.
BitMask mask_and(const BitMask& a, const BitMask& b);
BitMask mask_or(const BitMask& a, const BitMask& b);
BitMask mask_diff(const BitMask& a, const BitMask& b);  // a AND NOT b

std::int64_t intersection_area(const BitMask& a, const BitMask& b);

/// Intersection over union of two pixel sets. Both masks empty yields 1.0
/// so that a correctly predicted empty mask scores perfect rather than
/// dividing 0/0. Throws ValidationError on dimension mismatch.
double iou(const BitMask& a, const BitMask& b);

RleMask rle_encode(const BitMask& m);

/// Inverse of rle_encode. Throws ValidationError when the run list
/// violates the RleMask invariants.
BitMask rle_decode(const RleMask& r);

enum class Connectivity { four = 4, eight = 8 };

/// Maximal connected regions of the set pixels, ordered by their first
/// pixel in row-major scan order. The returned masks are pairwise
/// disjoint and their union equals the input.
std::vector<BitMask> connected_components(
    const BitMask& m, Connectivity connectivity = Connectivity::eight);

/// Smallest box containing every set pixel; the empty box for an empty
/// mask.
BoundingBox tight_bbox(const BitMask& m);

/// ORs `src` into `dst` with its origin at (offset_x, offset_y), clipping
/// to the bounds of `dst`.
void blit(BitMask& dst, const BitMask& src, int offset_x, int offset_y);

}  // namespace occlusynth

#endif  // OCCLUSYNTH_MASK_HPP_
