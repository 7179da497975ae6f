#pragma once

#include <cstdint>

namespace agf {

// Deterministic, splittable random stream (xoshiro256** seeded through
// splitmix64). A given (master_seed, stream_id) pair always reproduces the
// same sequence; derived streams fold a sub-id into stream_id so that
// independent tasks draw independent randomness without coordination.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t master_seed, std::uint64_t stream_id = 0);

  // Child stream for task `sub_id`; the child sequence is unrelated to the
  // parent's and does not advance the parent.
  SeedStream derive(std::uint64_t sub_id) const;

  std::uint64_t next_u64();
  std::uint64_t next_below(std::uint64_t bound);  // uniform in [0, bound)
  double next_double();                           // uniform in [0, 1)
  double next_gaussian();                         // standard normal

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t master_seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t state_[4] = {};
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

// 64-bit mixing hash used for stream derivation and per-trial seeds.
std::uint64_t mix_hash(std::uint64_t a, std::uint64_t b);

}  // namespace agf
