#include "funderlink/minhash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace funderlink {

namespace {

constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::vector<std::uint64_t> salts(std::size_t num_perms, std::uint64_t seed) {
  std::vector<std::uint64_t> out(num_perms);
  for (std::size_t i = 0; i < num_perms; ++i) {
    out[i] = mix64(seed + (i + 1) * 0x9e3779b97f4a7c15ULL);
  }
  return out;
}

}  // namespace

std::uint64_t hash_shingle(std::string_view shingle) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : shingle) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

MinHashSignature minhash_hashes(std::span<const std::uint64_t> shingle_hashes,
                                std::size_t num_perms, std::uint64_t seed) {
  if (shingle_hashes.empty()) throw std::invalid_argument("minhash: empty shingle set");
  if (num_perms == 0) throw std::invalid_argument("minhash: num_perms must be positive");
  MinHashSignature sig;
  sig.seed = seed;
  sig.values.assign(num_perms, std::numeric_limits<std::uint64_t>::max());
  const auto salt = salts(num_perms, seed);
  for (const std::uint64_t h : shingle_hashes) {
    for (std::size_t i = 0; i < num_perms; ++i) {
      sig.values[i] = std::min(sig.values[i], mix64(h ^ salt[i]));
    }
  }
  return sig;
}

MinHashSignature minhash(std::span<const std::string> shingles, std::size_t num_perms,
                         std::uint64_t seed) {
  std::vector<std::uint64_t> hashes;
  hashes.reserve(shingles.size());
  for (const auto& s : shingles) hashes.push_back(hash_shingle(s));
  return minhash_hashes(hashes, num_perms, seed);
}

double estimate_similarity(const MinHashSignature& a, const MinHashSignature& b) {
  if (a.num_perms() != b.num_perms() || a.seed != b.seed) {
    throw std::invalid_argument("estimate_similarity: signatures use different parameters");
  }
  if (a.values.empty()) throw std::invalid_argument("estimate_similarity: empty signature");
  std::size_t equal = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) equal += a.values[i] == b.values[i];
  return static_cast<double>(equal) / static_cast<double>(a.values.size());
}

double exact_jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("exact_jaccard: empty set");
  std::vector<std::string> sa(a.begin(), a.end());
  std::vector<std::string> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  std::sort(sb.begin(), sb.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  std::vector<std::string> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  const std::size_t uni = sa.size() + sb.size() - common.size();
  return static_cast<double>(common.size()) / static_cast<double>(uni);
}

Banding choose_banding(std::size_t num_perms, double target_threshold) {
  if (num_perms == 0) throw std::invalid_argument("choose_banding: num_perms must be positive");
  if (!(target_threshold > 0.0 && target_threshold < 1.0)) {
    throw std::invalid_argument("choose_banding: threshold must lie in (0, 1)");
  }
  Banding best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t b = 1; b <= num_perms; ++b) {
    if (num_perms % b != 0) continue;
    const std::size_t r = num_perms / b;
    const double t = std::pow(1.0 / static_cast<double>(b), 1.0 / static_cast<double>(r));
    const double gap = std::abs(t - target_threshold);
    if (gap < best_gap) {
      best_gap = gap;
      best = {b, r, t};
    }
  }
  if (best_gap > 0.05 + 1e-12) {
    throw std::invalid_argument("choose_banding: no factorization of " + std::to_string(num_perms) +
                                " within 0.05 of threshold " + std::to_string(target_threshold));
  }
  return best;
}

double collision_probability(double similarity, const Banding& banding) {
  return 1.0 - std::pow(1.0 - std::pow(similarity, static_cast<double>(banding.rows)),
                        static_cast<double>(banding.bands));
}

LshIndex::LshIndex(std::size_t num_perms, std::uint64_t seed, double target_threshold)
    : num_perms_(num_perms),
      seed_(seed),
      target_(target_threshold),
      banding_(choose_banding(num_perms, target_threshold)),
      buckets_(banding_.bands) {}

LshIndex LshIndex::build(std::span<const MinHashSignature> signatures, double target_threshold,
                         std::size_t num_perms, std::uint64_t seed) {
  if (!signatures.empty()) {
    num_perms = signatures.front().num_perms();
    seed = signatures.front().seed;
  }
  LshIndex index(num_perms, seed, target_threshold);
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    index.insert(static_cast<std::uint32_t>(i), signatures[i]);
  }
  return index;
}

void LshIndex::check_params(const MinHashSignature& s) const {
  if (s.num_perms() != num_perms_ || s.seed != seed_) {
    throw std::invalid_argument("LshIndex: signature parameters do not match the index");
  }
}

std::uint64_t LshIndex::band_key(const MinHashSignature& s, std::size_t band) const {
  std::uint64_t h = mix64(band + 1);
  const std::size_t begin = band * banding_.rows;
  for (std::size_t i = begin; i < begin + banding_.rows; ++i) h = mix64(h ^ s.values[i]);
  return h;
}

void LshIndex::insert(std::uint32_t id, const MinHashSignature& signature) {
  check_params(signature);
  for (std::size_t band = 0; band < banding_.bands; ++band) {
    auto& bucket = buckets_[band][band_key(signature, band)];
    if (!bucket.empty() && bucket.back() > id) {
      bucket.insert(std::upper_bound(bucket.begin(), bucket.end(), id), id);
    } else {
      bucket.push_back(id);
    }
  }
  ++size_;
}

void LshIndex::finalize() {
  for (auto& band : buckets_) {
    for (auto& [key, ids] : band) std::sort(ids.begin(), ids.end());
  }
}

std::vector<std::uint32_t> LshIndex::query(const MinHashSignature& probe,
                                           std::optional<std::uint32_t> exclude) const {
  check_params(probe);
  std::vector<std::uint32_t> out;
  for (std::size_t band = 0; band < banding_.bands; ++band) {
    const auto it = buckets_[band].find(band_key(probe, band));
    if (it == buckets_[band].end()) continue;
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (exclude) std::erase(out, *exclude);
  return out;
}

}  // namespace funderlink
