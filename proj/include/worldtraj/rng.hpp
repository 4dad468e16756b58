#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace worldtraj {

/// Derives independent, reproducible generator streams from one seed.
/// Streams are keyed by name so adding a consumer never perturbs others.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t derive(std::string_view key) const;
  std::uint64_t derive(std::string_view key, std::uint64_t index) const;
  std::mt19937_64 stream(std::string_view key) const { return std::mt19937_64(derive(key)); }
  std::mt19937_64 stream(std::string_view key, std::uint64_t index) const {
    return std::mt19937_64(derive(key, index));
  }
  SplitRng child(std::string_view key) const { return SplitRng(derive(key)); }

 private:
  std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace worldtraj
