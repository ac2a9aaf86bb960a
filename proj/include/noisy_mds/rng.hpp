#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace noisy_mds {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// A reproducible random stream keyed by (master_seed, stream_id).
// Identical keys produce identical streams; nested streams are obtained with
// child(), so replicate b of trial t never shares state with any other.
class SeededRng {
 public:
  using engine_type = std::mt19937_64;

  SeededRng(std::uint64_t master_seed, std::uint64_t stream_id = 0)
      : master_seed_(master_seed), stream_id_(stream_id) {
    const std::uint64_t a = detail::splitmix64(master_seed);
    const std::uint64_t b = detail::splitmix64(a ^ detail::splitmix64(stream_id + 1));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Independent sub-stream; depends only on (master_seed, stream_id, sub).
  SeededRng child(std::uint64_t sub) const {
    const std::uint64_t derived =
        detail::splitmix64(detail::splitmix64(master_seed_) ^ (stream_id_ * 0xd1b54a32d192ed03ULL + 17));
    return SeededRng(derived, sub);
  }

  engine_type& engine() { return engine_; }

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return boost::random::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::size_t index(std::size_t n) { return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  engine_type engine_;
  // Ziggurat sampler. Boost distributions give the same stream on every
  // standard library.
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

// Seed drawn from the OS entropy source, for commands run without --seed.
inline std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace noisy_mds
