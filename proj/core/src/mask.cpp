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

#include "occlusynth/mask.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "occlusynth/error.hpp"

namespace occlusynth {

namespace {

std::size_t word_count(std::int64_t bits) {
  return static_cast<std::size_t>((bits + 63) >> 6);
}

void require_same_dims(const BitMask& a, const BitMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw ValidationError("mask dimension mismatch: " +
                          std::to_string(a.width()) + "x" +
                          std::to_string(a.height()) + " vs " +
                          std::to_string(b.width()) + "x" +
                          std::to_string(b.height()));
  }
}

// First flat index >= from whose bit differs from `value`, or n if none.
std::int64_t find_next_diff(const std::vector<std::uint64_t>& words,
                            std::int64_t from, std::int64_t n, bool value) {
  std::int64_t i = from;
  while (i < n) {
    std::uint64_t w = words[static_cast<std::size_t>(i >> 6)];
    if (value) w = ~w;
    w >>= (i & 63);
    if (w != 0) {
      const std::int64_t hit = i + std::countr_zero(w);
      return std::min(hit, n);
    }
    i = (i | 63) + 1;
  }
  return n;
}

}  // namespace

BoundingBox BoundingBox::dilated(int px, int clip_width,
                                 int clip_height) const {
  if (empty()) return {};
  BoundingBox out;
  out.x_min = std::max(0, x_min - px);
  out.y_min = std::max(0, y_min - px);
  out.x_max = std::min(clip_width, x_max + px);
  out.y_max = std::min(clip_height, y_max + px);
  if (out.empty()) return {};
  return out;
}

BitMask::BitMask(int width, int height) : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw ValidationError("negative mask dimensions");
  }
  words_.assign(word_count(size()), 0);
}

BitMask BitMask::filled(int width, int height) {
  BitMask m(width, height);
  if (m.size() == 0) return m;
  std::fill(m.words_.begin(), m.words_.end(), ~std::uint64_t{0});
  const int tail = static_cast<int>(m.size() & 63);
  if (tail != 0) m.words_.back() &= (std::uint64_t{1} << tail) - 1;
  return m;
}

void BitMask::set(int x, int y, bool value) {
  const std::int64_t i = static_cast<std::int64_t>(y) * width_ + x;
  std::uint64_t& w = words_[static_cast<std::size_t>(i >> 6)];
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (value) {
    w |= bit;
  } else {
    w &= ~bit;
  }
}

std::int64_t BitMask::area() const {
  std::int64_t n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

bool BitMask::any() const {
  for (std::uint64_t w : words_) {
    if (w != 0) return true;
  }
  return false;
}

std::int64_t BitMask::area_in_rect(int x0, int y0, int x1, int y1) const {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, width_);
  y1 = std::min(y1, height_);
  if (x0 >= x1 || y0 >= y1) return 0;
  std::int64_t n = 0;
  for (int y = y0; y < y1; ++y) {
    std::int64_t lo = static_cast<std::int64_t>(y) * width_ + x0;
    const std::int64_t hi = static_cast<std::int64_t>(y) * width_ + x1;
    while (lo < hi) {
      const std::int64_t word_end = std::min(hi, (lo | 63) + 1);
      std::uint64_t w = words_[static_cast<std::size_t>(lo >> 6)];
      w >>= (lo & 63);
      const int span = static_cast<int>(word_end - lo);
      if (span < 64) w &= (std::uint64_t{1} << span) - 1;
      n += std::popcount(w);
      lo = word_end;
    }
  }
  return n;
}

BitMask mask_and(const BitMask& a, const BitMask& b) {
  require_same_dims(a, b);
  BitMask out = a;
  for (std::size_t i = 0; i < out.words_.size(); ++i) {
    out.words_[i] &= b.words_[i];
  }
  return out;
}

BitMask mask_or(const BitMask& a, const BitMask& b) {
  require_same_dims(a, b);
  BitMask out = a;
  for (std::size_t i = 0; i < out.words_.size(); ++i) {
    out.words_[i] |= b.words_[i];
  }
  return out;
}

BitMask mask_diff(const BitMask& a, const BitMask& b) {
  require_same_dims(a, b);
  BitMask out = a;
  for (std::size_t i = 0; i < out.words_.size(); ++i) {
    out.words_[i] &= ~b.words_[i];
  }
  return out;
}

std::int64_t intersection_area(const BitMask& a, const BitMask& b) {
  require_same_dims(a, b);
  std::int64_t n = 0;
  for (std::size_t i = 0; i < a.words_.size(); ++i) {
    n += std::popcount(a.words_[i] & b.words_[i]);
  }
  return n;
}

double iou(const BitMask& a, const BitMask& b) {
  const std::int64_t inter = intersection_area(a, b);
  const std::int64_t uni = a.area() + b.area() - inter;
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

RleMask rle_encode(const BitMask& m) {
  RleMask r;
  r.width = m.width();
  r.height = m.height();
  const std::int64_t n = m.size();
  if (n == 0) return r;
  // The first scan looks for 0s, so a mask starting with a set pixel
  // yields the leading zero-length run the format requires.
  std::int64_t pos = 0;
  bool value = false;
  while (pos < n) {
    const std::int64_t next = find_next_diff(m.words(), pos, n, value);
    r.counts.push_back(static_cast<std::uint32_t>(next - pos));
    value = !value;
    pos = next;
  }
  return r;
}

BitMask rle_decode(const RleMask& r) {
  const std::int64_t n = static_cast<std::int64_t>(r.width) * r.height;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < r.counts.size(); ++i) {
    if (i > 0 && r.counts[i] == 0) {
      throw ValidationError("rle: interior zero-length run at index " +
                            std::to_string(i));
    }
    total += r.counts[i];
  }
  if (total != n) {
    throw ValidationError("rle: counts sum to " + std::to_string(total) +
                          ", expected " + std::to_string(n));
  }
  BitMask m(r.width, r.height);
  std::int64_t pos = 0;
  bool value = false;
  for (std::uint32_t count : r.counts) {
    if (value) {
      for (std::int64_t i = pos; i < pos + count; ++i) {
        m.set(static_cast<int>(i % r.width), static_cast<int>(i / r.width));
      }
    }
    pos += count;
    value = !value;
  }
  return m;
}

std::vector<BitMask> connected_components(const BitMask& m,
                                          Connectivity connectivity) {
  std::vector<BitMask> components;
  const int w = m.width();
  const int h = m.height();
  if (m.size() == 0) return components;

  BitMask remaining = m;
  std::vector<std::int64_t> stack;
  const bool diag = connectivity == Connectivity::eight;

  std::int64_t start = find_next_diff(remaining.words(), 0, m.size(), false);
  while (start < m.size()) {
    BitMask component(w, h);
    stack.push_back(start);
    remaining.set(static_cast<int>(start % w), static_cast<int>(start / w),
                  false);
    while (!stack.empty()) {
      const std::int64_t i = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(i % w);
      const int y = static_cast<int>(i / w);
      component.set(x, y);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (!diag && dx != 0 && dy != 0) continue;
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          if (remaining.test(nx, ny)) {
            remaining.set(nx, ny, false);
            stack.push_back(static_cast<std::int64_t>(ny) * w + nx);
          }
        }
      }
    }
    components.push_back(std::move(component));
    start = find_next_diff(remaining.words(), start, m.size(), false);
  }
  return components;
}

BoundingBox tight_bbox(const BitMask& m) {
  const int w = m.width();
  BoundingBox box;
  bool found = false;
  std::int64_t pos = find_next_diff(m.words(), 0, m.size(), false);
  while (pos < m.size()) {
    const std::int64_t run_end = find_next_diff(m.words(), pos, m.size(), true);
    for (std::int64_t i = pos; i < run_end;) {
      const int y = static_cast<int>(i / w);
      const int x0 = static_cast<int>(i % w);
      const std::int64_t row_end =
          std::min(run_end, static_cast<std::int64_t>(y + 1) * w);
      const int x1 = static_cast<int>((row_end - 1) % w);
      if (!found) {
        box = {x0, y, x1 + 1, y + 1};
        found = true;
      } else {
        box.x_min = std::min(box.x_min, x0);
        box.x_max = std::max(box.x_max, x1 + 1);
        box.y_min = std::min(box.y_min, y);
        box.y_max = std::max(box.y_max, y + 1);
      }
      i = row_end;
    }
    pos = find_next_diff(m.words(), run_end, m.size(), false);
  }
  return found ? box : BoundingBox{};
}

void blit(BitMask& dst, const BitMask& src, int offset_x, int offset_y) {
  const int x0 = std::max(0, -offset_x);
  const int y0 = std::max(0, -offset_y);
  const int x1 = std::min(src.width(), dst.width() - offset_x);
  const int y1 = std::min(src.height(), dst.height() - offset_y);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (src.test(x, y)) dst.set(x + offset_x, y + offset_y);
    }
  }
}

}  // namespace occlusynth
