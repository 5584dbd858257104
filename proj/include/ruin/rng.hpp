#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ruin {

// Replay-exact random stream: (seed, stream_id, draw index) fully determines
// every variate.  Distinct stream_ids are decorrelated through a SplitMix64
// hash before seeding the engine, so per-path streams can be assigned by
// index and used from any worker.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : eng_(mix(seed, stream_id)) {}

  // uniform in (0, 1)
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  // Exponential-interarrival count; exact for the moderate means used here.
  long poisson(double mean) {
    long n = 0;
    double t = exponential(1.0);
    while (t <= mean) {
      ++n;
      t += exponential(1.0);
    }
    return n;
  }

 private:
  static std::uint64_t splitmix(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t x = seed;
    std::uint64_t a = splitmix(x);
    x ^= 0xD1B54A32D192ED03ull * (stream_id + 1);
    std::uint64_t b = splitmix(x);
    return a ^ (b * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull);
  }

  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ruin
