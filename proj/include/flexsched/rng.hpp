#pragma once

#include <cstdint>
#include <string_view>

namespace flexsched {

// Counter-based deterministic random stream. A stream is identified by a key
// (root seed mixed with fork labels); draws hash (key, counter) so forked
// streams never perturb each other and draw order within a stream is the only
// state. Output is identical across platforms.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : key_(finalize(seed)) {}

  RngStream fork(uint64_t label) const { return RngStream(mix(key_, label), 0); }
  RngStream fork(std::string_view label) const { return fork(fnv1a(label)); }

  uint64_t next_u64() { return mix(key_, ++counter_); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // inclusive bounds, unbiased via rejection
  int uniform_int(int lo, int hi);

  // inverse-CDF draw, deterministic given the stream state
  double normal(double mean, double stddev) {
    double u = uniform();
    if (u < 1e-300) u = 1e-300;
    return mean + stddev * normal_icdf(u);
  }

  uint64_t key() const { return key_; }

  // standard normal helpers
  static double normal_cdf(double z);
  static double normal_pdf(double z);
  static double normal_icdf(double p);

 private:
  RngStream(uint64_t key, uint64_t counter) : key_(key), counter_(counter) {}

  static uint64_t finalize(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static uint64_t mix(uint64_t a, uint64_t b) {
    return finalize(a + 0x9E3779B97F4A7C15ull * (b + 0x632BE59BD9B4E019ull));
  }

  static uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001B3ull;
    }
    return h;
  }

  uint64_t key_ = 0;
  uint64_t counter_ = 0;
};

}  // namespace flexsched
