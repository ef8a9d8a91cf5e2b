#pragma once

#include <array>
#include <cstdint>

namespace quadclip {

/* Philox4x32-10 counter-based generator (Salmon et al., SC'11). */
class Philox4x32 {
 public:
  using Counter = std::array<uint32_t, 4>;
  using Key = std::array<uint32_t, 2>;

  static Counter block(Counter c, Key k) {
    for (int r = 0; r < 10; ++r) {
      if (r) {
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
      }
      const uint64_t p0 = uint64_t(0xD2511F53u) * c[0];
      const uint64_t p1 = uint64_t(0xCD9E8D57u) * c[2];
      c = {uint32_t(p1 >> 32) ^ c[1] ^ k[0], uint32_t(p1), uint32_t(p0 >> 32) ^ c[3] ^ k[1], uint32_t(p0)};
    }
    return c;
  }

  /* Uniform [0, 1) doubles with 53 random bits from two words. */
  static double to_unit(uint32_t hi, uint32_t lo) {
    return double((uint64_t(hi) << 21) ^ (uint64_t(lo) >> 11)) * 0x1.0p-53;
  }
};

/* Sequential uniform doubles for one stream: counter {n_lo, n_hi, stream_lo, stream_hi}. */
class PhiloxStream {
 public:
  PhiloxStream(uint64_t seed, uint64_t stream) : key_{uint32_t(seed), uint32_t(seed >> 32)}, stream_(stream) {}

  double uniform() {
    if (used_ == 2) refill();
    const double r = Philox4x32::to_unit(buf_[2 * used_], buf_[2 * used_ + 1]);
    ++used_;
    return r;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  void refill() {
    buf_ = Philox4x32::block({uint32_t(n_), uint32_t(n_ >> 32), uint32_t(stream_), uint32_t(stream_ >> 32)}, key_);
    ++n_;
    used_ = 0;
  }

  Philox4x32::Key key_;
  uint64_t stream_;
  uint64_t n_ = 0;
  Philox4x32::Counter buf_{};
  int used_ = 2;
};

}  // namespace quadclip
