#pragma once

#include <memory>
#include <utility>

#include "ordfree/map.hpp"

namespace ordfree {

// On each group of four consecutive frame blocks, stretch the first block
// over the first three and squash the remaining three into the last:
// [a_i, a_{i+1}] -> [a_i, a_{i+3}] and [a_{i+1}, a_{i+4}] -> [a_{i+3}, a_{i+4}]
// for i congruent to `offset` mod 4. Confined to the coarse block spanning the
// group, so it serves as a lazy rule over the subsampled frame.
class StretchSquashRule final : public BlockRule {
 public:
  StretchSquashRule(Frame fine, std::int64_t offset)
      : fine_(std::move(fine)), offset_(offset) {}

  const char* rule_name() const override { return "stretch_squash"; }

  MapDescriptor at(std::int64_t coarse_block) const override {
    const std::int64_t base = offset_ + 4 * coarse_block;
    Rational a0 = fine_.point(base);
    Rational a1 = fine_.point(base + 1);
    Rational a3 = fine_.point(base + 3);
    Rational a4 = fine_.point(base + 4);
    return MapDescriptor::finite(PiecewiseLinear({a0, a1, a4}, {a0, a3, a4}));
  }

  const Frame& fine_frame() const { return fine_; }
  std::int64_t offset() const { return offset_; }

 private:
  Frame fine_;
  std::int64_t offset_;
};

/// A pair generating a free group inside the convex hull of the frame,
/// identity outside; the two maps are the same construction anchored two
/// blocks apart. Over a uniform frame the result is periodic (certifiable);
/// otherwise it is a lazy blockwise descriptor.
inline std::pair<MapDescriptor, MapDescriptor> rank2_basis(const Frame& frame) {
  if (frame.kind() != Frame::IndexKind::integers)
    throw DomainError("rank2 basis: frame is not coterminal in its hull");
  if (auto s = frame.uniform_step()) {
    const Rational step = *s;
    PiecewiseLinear pattern({Rational(0), step, 4 * step}, {Rational(0), 3 * step, 4 * step});
    MapDescriptor cell = MapDescriptor::periodic(4 * step, pattern);
    MapDescriptor f = MapDescriptor::conjugate_by_shift(cell, frame.point(0));
    MapDescriptor g = MapDescriptor::conjugate_by_shift(cell, frame.point(2));
    return {std::move(f), std::move(g)};
  }
  MapDescriptor f = MapDescriptor::lazy(frame.subsample(4, 0),
                                        std::make_shared<StretchSquashRule>(frame, 0));
  MapDescriptor g = MapDescriptor::lazy(frame.subsample(4, 2),
                                        std::make_shared<StretchSquashRule>(frame, 2));
  return {std::move(f), std::move(g)};
}

}  // namespace ordfree
