#include "dcbo/rng.hpp"

#include <cmath>
#include <numbers>

namespace dcbo {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

CounterStream::CounterStream(Philox4x32::Key key, Philox4x32::Counter base)
    : key_(key), base_(base) {}

void CounterStream::refill() {
  Philox4x32::Counter ctr = base_;
  ctr[0] = block_++;
  words_ = Philox4x32::block(ctr, key_);
  word_pos_ = 0;
}

std::uint64_t CounterStream::next_u64() {
  if (word_pos_ > 2) refill();
  const std::uint64_t hi = words_[word_pos_];
  const std::uint64_t lo = words_[word_pos_ + 1];
  word_pos_ += 2;
  return (hi << 32) | lo;
}

double CounterStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

CounterStream RngPolicy::stream(StreamPurpose purpose, std::uint64_t agent,
                                std::uint64_t iteration) const {
  const std::uint64_t k = splitmix64(seed ^ splitmix64(trial_id + 0x632BE59BD9B4E019ull));
  const Philox4x32::Key key{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  const Philox4x32::Counter base{
      0u, static_cast<std::uint32_t>(iteration), static_cast<std::uint32_t>(agent),
      (static_cast<std::uint32_t>(purpose) << 24) | (round & 0xFFFFFFu)};
  return CounterStream(key, base);
}

std::uint64_t RngPolicy::trial_seed() const {
  return splitmix64(seed ^ splitmix64(trial_id + 0x632BE59BD9B4E019ull));
}

}  // namespace dcbo
