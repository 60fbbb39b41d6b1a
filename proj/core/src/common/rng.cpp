#include "ugnn/common/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ugnn/common/error.hpp"

namespace ugnn {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= tag * 0xD6E8FEB86659FD93ULL;
  std::uint64_t b = splitmix64(s);
  return a ^ (b + 0x9E3779B97F4A7C15ULL);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(derive_seed(seed, stream)) {}

double RngStream::uniform() {
  // 53-bit mantissa draw mapped into (0, 1); never returns 0 so log() is safe.
  const std::uint64_t r = engine_() >> 11;
  return (static_cast<double>(r) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw ArgumentError("uniform_int: bound must be positive");
  // Rejection sampling for an unbiased draw.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % bound;
}

Mat RngStream::normal_mat(int rows, int cols) {
  Mat m(rows, cols);
  fill_normal(m);
  return m;
}

void RngStream::fill_normal(Mat& m) {
  for (auto& x : m.d) x = normal();
}

std::string RngStream::state() const {
  std::ostringstream os;
  os << engine_;
  return os.str();
}

void RngStream::restore(const std::string& state) {
  std::istringstream is(state);
  is >> engine_;
  if (is.fail()) throw DataError("RngStream: malformed engine state");
}

}  // namespace ugnn
