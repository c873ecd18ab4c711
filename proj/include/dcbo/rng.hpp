#pragma once

#include <array>
#include <cstdint>

namespace dcbo {

/// Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

std::uint64_t splitmix64(std::uint64_t x);

/// What a stream is used for. Different purposes never share counters.
enum class StreamPurpose : std::uint32_t {
  Init = 1,
  Noise = 2,
  SharedNoise = 3,
  PsoCognitive = 4,
  PsoSocial = 5,
  PsoPerturb = 6,
  MonteCarlo = 7,
  SensingMatrix = 8,
  Instance = 9,
};

/// A sequential view over one counter-based substream.
///
/// The n-th variate of a stream is a pure function of the stream coordinates
/// (key, purpose, round, agent, iteration) and n, so agents can be advanced
/// in any order without changing results.
class CounterStream {
 public:
  CounterStream(Philox4x32::Key key, Philox4x32::Counter base);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; consecutive calls consume pairs.
  double normal();

 private:
  void refill();

  Philox4x32::Key key_;
  Philox4x32::Counter base_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> words_{};
  int word_pos_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Seed plus trial id; all randomness in a trial is derived from these.
struct RngPolicy {
  std::uint64_t seed = 0;
  std::uint64_t trial_id = 0;
  /// Restart round. Round 0 coincides with a plain single run.
  std::uint32_t round = 0;

  RngPolicy for_trial(std::uint64_t trial) const { return {seed, trial, 0}; }
  RngPolicy with_round(std::uint32_t r) const { return {seed, trial_id, r}; }

  /// Agent and iteration are truncated to 32 bits; round to 24 bits.
  CounterStream stream(StreamPurpose purpose, std::uint64_t agent,
                       std::uint64_t iteration) const;

  /// Seed reported for a trial in output files.
  std::uint64_t trial_seed() const;
};

}  // namespace dcbo
