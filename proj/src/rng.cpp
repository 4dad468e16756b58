#include "worldtraj/rng.hpp"

namespace worldtraj {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t SplitRng::derive(std::string_view key) const {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : key) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 1099511628211ull;
  }
  return splitmix64(seed_ ^ splitmix64(h));
}

std::uint64_t SplitRng::derive(std::string_view key, std::uint64_t index) const {
  return splitmix64(derive(key) ^ splitmix64(index + 0x632be59bd9b4e019ull));
}

}  // namespace worldtraj
