#include "../internal.hpp"
#include "../kernel_util.hpp"

namespace nanoseg::reference {

BinaryMask binary_threshold(const GrayImage& img, int t) {
  BinaryMask out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) out.set(x, y, img(x, y) > t);
  }
  return out;
}

BinaryMask adaptive_threshold(const GrayImage& img, const AdaptiveParams& params) {
  detail::validate_adaptive(params);
  const int w = img.width();
  const int h = img.height();
  const int r = params.block / 2;
  const auto row = detail::binomial_row(params.block);

  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::int64_t weighted = 0;
      std::int64_t total = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const std::int64_t wt =
              params.weighting == Weighting::Gaussian ? row[dx + r] * row[dy + r] : 1;
          weighted += wt * img(detail::clamp_index(x + dx, w), detail::clamp_index(y + dy, h));
          total += wt;
        }
      }
      out.set(x, y, img(x, y) * total > weighted - params.offset_d * total);
    }
  }
  return out;
}

}  // namespace nanoseg::reference
