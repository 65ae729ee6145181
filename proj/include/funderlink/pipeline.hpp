#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "funderlink/audit_log.hpp"
#include "funderlink/clustering.hpp"
#include "funderlink/config.hpp"
#include "funderlink/matcher.hpp"
#include "funderlink/ner.hpp"

namespace funderlink {

struct ManualAnnotation {
  std::string raw_string;
  std::string canonical_id;
};

// MinHash signature of a normalized string's character shingles.
MinHashSignature string_signature(std::string_view normalized, std::size_t shingle_width,
                                  std::size_t num_perms, std::uint64_t seed);

struct FallbackParams {
  double threshold = 0.9;
  std::size_t shingle_width = kDefaultShingleWidth;
  std::size_t num_perms = kDefaultNumPerms;
  std::uint64_t seed = kDefaultMinHashSeed;
};

// Indexes `unmatched` in an LSH index tuned to `threshold`, probes it with every
// reference name (display and alternate) and keeps hits whose estimated
// similarity reaches the threshold. Result i lists the organizations bound to
// unmatched[i] (empty when none), ascending, scored by estimated similarity.
std::vector<std::vector<OrgHit>> jaccard_fallback(std::span<const FunderString> strings,
                                                  const ReferenceIndex& index,
                                                  const FallbackParams& params,
                                                  unsigned workers = 1);

// Extracts organization spans with `provider` and runs each normalized span
// through the rule cascade; the first span that matches decides. A provider
// exception leaves that string unmatched and is logged.
std::vector<CascadeOutcome> ner_assist(std::span<const FunderString> strings,
                                       const NerProvider& provider, const NameMatcher& matcher,
                                       AuditLog& log, unsigned workers = 1);

// Stateful driver for the full matching procedure. Steps are exposed
// individually for testing; run() executes them in order.
class MatchPipeline {
 public:
  MatchPipeline(const ReferenceIndex& index, PipelineConfig config, unsigned workers,
                AuditLog& log);

  // Normalization. Duplicate raw strings are merged with summed counts; strings that
  // normalize to nothing are dropped and logged. string_id is the rank of the
  // raw string in byte order, so ids do not depend on input order.
  void load_corpus(std::vector<std::pair<std::string, std::uint64_t>> corpus);
  // Shingling, MinHash signatures, LSH candidate pairs and union-find clusters.
  void cluster_strings();
  // Rule cascade per cluster and propagation to members. Clusters holding manually annotated strings are bound to the
  // annotation instead of running the cascade.
  void match_clusters();
  // Records annotations, then re-runs the cluster matching.
  void apply_manual_annotations(std::span<const ManualAnnotation> annotations);
  // Entity-extraction assist over unmatched strings inside the medium-frequency band.
  void ner_assist(const NerProvider& provider);
  // Similarity fallback over all strings still unmatched.
  void jaccard_fallback();

  void run(std::span<const ManualAnnotation> annotations, const NerProvider* provider);

  std::span<const FunderString> strings() const { return strings_; }
  std::span<const Cluster> clusters() const { return clusters_; }
  std::span<const CascadeOutcome> outcomes() const { return outcomes_; }
  std::span<const MinHashSignature> signatures() const { return signatures_; }
  const NameMatcher& matcher() const { return matcher_; }
  const PipelineConfig& config() const { return config_; }

  // One result per string, ascending string_id.
  std::vector<MatchResult> results() const;
  // Unmatched strings above the high-frequency cutoff, for manual review.
  std::vector<std::uint32_t> review_candidates() const;

 private:
  void propagate_new_matches(const std::vector<std::uint32_t>& newly_matched);

  const ReferenceIndex& index_;
  PipelineConfig config_;
  unsigned workers_;
  AuditLog& log_;
  NameMatcher matcher_;
  std::vector<FunderString> strings_;
  std::vector<MinHashSignature> signatures_;
  std::vector<Cluster> clusters_;
  std::vector<std::uint32_t> cluster_of_;
  std::vector<CascadeOutcome> outcomes_;
  std::vector<std::vector<OrgHit>> annotated_;  // per string_id
};

}  // namespace funderlink
