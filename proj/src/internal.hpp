#pragma once

#include "nanoseg/morphology.hpp"
#include "nanoseg/preprocess.hpp"
#include "nanoseg/threshold.hpp"

// Argument checks shared by the parallel kernels and the serial references.
namespace nanoseg::detail {

void validate_smoothing(const GrayImage& img, SmoothingKind kind);
void validate_adaptive(const AdaptiveParams& params);
void validate_morphology(StructuringElement se, int iterations);

}  // namespace nanoseg::detail
