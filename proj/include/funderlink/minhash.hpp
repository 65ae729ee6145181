#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace funderlink {

inline constexpr std::size_t kDefaultNumPerms = 128;
inline constexpr std::uint64_t kDefaultMinHashSeed = 0x9e3779b97f4a7c15ULL;

struct MinHashSignature {
  std::vector<std::uint64_t> values;
  std::uint64_t seed = 0;

  std::size_t num_perms() const { return values.size(); }
  bool operator==(const MinHashSignature&) const = default;
};

// Stable 64-bit hash of one shingle (FNV-1a followed by a 64-bit finalizer).
std::uint64_t hash_shingle(std::string_view shingle);

// Component i is the minimum over shingles of a salted hash keyed by (seed, i).
// Throws std::invalid_argument for an empty set or num_perms == 0.
MinHashSignature minhash(std::span<const std::string> shingles, std::size_t num_perms,
                         std::uint64_t seed = kDefaultMinHashSeed);
MinHashSignature minhash_hashes(std::span<const std::uint64_t> shingle_hashes,
                                std::size_t num_perms, std::uint64_t seed = kDefaultMinHashSeed);

// Fraction of agreeing components. Throws std::invalid_argument when the two
// signatures were built with different num_perms or seed.
double estimate_similarity(const MinHashSignature& a, const MinHashSignature& b);

// |A ∩ B| / |A ∪ B| over distinct elements. Both sets must be non-empty.
double exact_jaccard(std::span<const std::string> a, std::span<const std::string> b);

struct Banding {
  std::size_t bands = 0;
  std::size_t rows = 0;
  double characteristic_threshold = 0.0;  // (1/b)^(1/r)
};

// (b, r) with b * r == num_perms minimizing |(1/b)^(1/r) - target|. Throws
// std::invalid_argument when the best factorization is more than 0.05 away.
Banding choose_banding(std::size_t num_perms, double target_threshold);

// Probability that a pair with Jaccard similarity s collides in at least one
// band: 1 - (1 - s^r)^b.
double collision_probability(double similarity, const Banding& banding);

// Banded LSH over MinHash signatures. Bucket contents are kept sorted so the
// index is independent of insertion order.
class LshIndex {
 public:
  LshIndex(std::size_t num_perms, std::uint64_t seed, double target_threshold);

  // Signature ids are their positions in `signatures`.
  static LshIndex build(std::span<const MinHashSignature> signatures, double target_threshold,
                        std::size_t num_perms = kDefaultNumPerms,
                        std::uint64_t seed = kDefaultMinHashSeed);

  void insert(std::uint32_t id, const MinHashSignature& signature);
  // Restores sorted bucket order after concurrent or out-of-order inserts.
  void finalize();

  // Ids sharing at least one band bucket with the probe, ascending.
  std::vector<std::uint32_t> query(const MinHashSignature& probe,
                                   std::optional<std::uint32_t> exclude = std::nullopt) const;

  const Banding& banding() const { return banding_; }
  std::size_t num_perms() const { return num_perms_; }
  std::uint64_t seed() const { return seed_; }
  double target_threshold() const { return target_; }
  std::size_t size() const { return size_; }

 private:
  std::uint64_t band_key(const MinHashSignature& s, std::size_t band) const;
  void check_params(const MinHashSignature& s) const;

  std::size_t num_perms_;
  std::uint64_t seed_;
  double target_;
  Banding banding_;
  std::size_t size_ = 0;
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> buckets_;
};

}  // namespace funderlink
