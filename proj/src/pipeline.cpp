#include "funderlink/pipeline.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "funderlink/error.hpp"
#include "funderlink/parallel.hpp"

namespace funderlink {

namespace {

std::vector<OrgHit> best_per_org(std::vector<OrgHit> hits) {
  std::sort(hits.begin(), hits.end(), [](const OrgHit& a, const OrgHit& b) {
    return a.org != b.org ? a.org < b.org : a.score > b.score;
  });
  hits.erase(std::unique(hits.begin(), hits.end(),
                         [](const OrgHit& a, const OrgHit& b) { return a.org == b.org; }),
             hits.end());
  return hits;
}

std::string describe(const FunderString& s) {
  return "#" + std::to_string(s.string_id) + " \"" + s.raw + "\"";
}

}  // namespace

MinHashSignature string_signature(std::string_view normalized, std::size_t shingle_width,
                                  std::size_t num_perms, std::uint64_t seed) {
  std::vector<std::uint64_t> hashes;
  if (normalized.size() < shingle_width) {
    hashes.push_back(hash_shingle(normalized));
  } else {
    hashes.reserve(normalized.size() - shingle_width + 1);
    for (std::size_t i = 0; i + shingle_width <= normalized.size(); ++i) {
      hashes.push_back(hash_shingle(normalized.substr(i, shingle_width)));
    }
  }
  return minhash_hashes(hashes, num_perms, seed);
}

std::vector<std::vector<OrgHit>> jaccard_fallback(std::span<const FunderString> strings,
                                                  const ReferenceIndex& index,
                                                  const FallbackParams& params,
                                                  unsigned workers) {
  std::vector<std::vector<OrgHit>> out(strings.size());
  if (strings.empty()) return out;

  std::vector<MinHashSignature> sigs(strings.size());
  parallel_for(strings.size(), workers, [&](std::size_t i) {
    sigs[i] = string_signature(strings[i].normalized, params.shingle_width, params.num_perms,
                               params.seed);
  });
  LshIndex lsh(params.num_perms, params.seed, params.threshold);
  for (std::size_t i = 0; i < sigs.size(); ++i) lsh.insert(static_cast<std::uint32_t>(i), sigs[i]);

  // Distinct reference names with their owners; all_names() is sorted by name.
  struct Probe {
    std::string_view name;
    std::vector<OrgIndex> orgs;
  };
  std::vector<Probe> probes;
  for (const auto& entry : index.all_names()) {
    if (probes.empty() || probes.back().name != entry.name) probes.push_back({entry.name, {}});
    probes.back().orgs.push_back(entry.org);
  }

  struct ProbeHit {
    std::uint32_t string;
    double similarity;
  };
  std::vector<std::vector<ProbeHit>> per_probe(probes.size());
  parallel_for(probes.size(), workers, [&](std::size_t p) {
    const auto sig = string_signature(probes[p].name, params.shingle_width, params.num_perms,
                                      params.seed);
    for (const std::uint32_t id : lsh.query(sig)) {
      const double s = estimate_similarity(sig, sigs[id]);
      if (s >= params.threshold) per_probe[p].push_back({id, s});
    }
  });
  for (std::size_t p = 0; p < probes.size(); ++p) {
    for (const auto& hit : per_probe[p]) {
      for (const OrgIndex o : probes[p].orgs) out[hit.string].push_back({o, hit.similarity});
    }
  }
  for (auto& hits : out) hits = best_per_org(std::move(hits));
  return out;
}

std::vector<CascadeOutcome> ner_assist(std::span<const FunderString> strings,
                                       const NerProvider& provider, const NameMatcher& matcher,
                                       AuditLog& log, unsigned workers) {
  std::vector<CascadeOutcome> out(strings.size());
  std::vector<std::string> errors(strings.size());
  parallel_for(strings.size(), workers, [&](std::size_t i) {
    std::vector<std::string> spans;
    try {
      spans = provider.extract_organizations(strings[i].raw);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      return;
    }
    for (const auto& span : spans) {
      const std::string normalized = normalize_or_empty(span);
      if (normalized.empty()) continue;
      FunderString probe;
      probe.raw = span;
      probe.normalized = normalized;
      probe.extracted_acronym = extract_acronym(span);
      probe.string_id = strings[i].string_id;
      CascadeOutcome outcome = matcher.run_cascade(probe);
      if (outcome.matched()) {
        out[i] = std::move(outcome);
        return;
      }
    }
  });
  for (std::size_t i = 0; i < strings.size(); ++i) {
    if (!errors[i].empty()) {
      log.warn("ner", "provider failed on " + describe(strings[i]) + ": " + errors[i]);
    }
  }
  return out;
}

MatchPipeline::MatchPipeline(const ReferenceIndex& index, PipelineConfig config, unsigned workers,
                             AuditLog& log)
    : index_(index),
      config_(std::move(config)),
      workers_(std::max(1u, workers)),
      log_(log),
      matcher_(index, MatcherOptions{config_.coverage_ratio, config_.bare_acronyms}) {
  config_.validate();
}

void MatchPipeline::load_corpus(std::vector<std::pair<std::string, std::uint64_t>> corpus) {
  std::map<std::string, std::uint64_t> merged;
  for (auto& [raw, count] : corpus) {
    if (normalize_or_empty(raw).empty()) {
      log_.warn("corpus", "dropped string that normalizes to nothing: \"" + raw + "\"");
      continue;
    }
    if (count == 0) {
      log_.warn("corpus", "dropped string with zero count: \"" + raw + "\"");
      continue;
    }
    merged[std::move(raw)] += count;
  }
  strings_.clear();
  strings_.reserve(merged.size());
  for (auto& [raw, count] : merged) {
    strings_.push_back(make_funder_string(raw, count, static_cast<std::uint32_t>(strings_.size())));
  }
  outcomes_.assign(strings_.size(), CascadeOutcome{});
  annotated_.assign(strings_.size(), {});
  clusters_.clear();
  cluster_of_.clear();
  signatures_.clear();
  log_.info("corpus", std::to_string(strings_.size()) + " distinct funder strings loaded");
}

void MatchPipeline::cluster_strings() {
  signatures_.assign(strings_.size(), MinHashSignature{});
  parallel_for(strings_.size(), workers_, [&](std::size_t i) {
    signatures_[i] = string_signature(strings_[i].normalized, config_.shingle_width,
                                      config_.num_perms, config_.seed);
  });
  LshIndex lsh(config_.num_perms, config_.seed, config_.cluster_threshold);
  for (std::size_t i = 0; i < signatures_.size(); ++i) {
    lsh.insert(static_cast<std::uint32_t>(i), signatures_[i]);
  }
  const auto& b = lsh.banding();
  log_.info("lsh", "cluster index num_perms=" + std::to_string(config_.num_perms) +
                       " seed=" + std::to_string(config_.seed) + " bands=" + std::to_string(b.bands) +
                       " rows=" + std::to_string(b.rows) +
                       " characteristic_threshold=" + std::to_string(b.characteristic_threshold));

  const auto edges = build_similarity_graph(signatures_, lsh, config_.cluster_threshold, workers_);
  std::vector<std::uint64_t> counts(strings_.size());
  for (std::size_t i = 0; i < strings_.size(); ++i) counts[i] = strings_[i].count;
  clusters_ = connected_components(edges, strings_.size(), counts);
  cluster_of_.assign(strings_.size(), 0);
  for (const auto& c : clusters_) {
    for (const std::uint32_t m : c.member_ids) cluster_of_[m] = c.cluster_id;
  }
  log_.info("clustering", std::to_string(edges.size()) + " edges, " +
                              std::to_string(clusters_.size()) + " clusters");
  audit_cluster_diameter(clusters_, signatures_, log_, config_.diameter_warning);
}

void MatchPipeline::match_clusters() {
  std::vector<ClusterMatch> matches(clusters_.size());
  parallel_for(clusters_.size(), workers_, [&](std::size_t c) {
    const Cluster& cluster = clusters_[c];
    for (const std::uint32_t member : trial_order(cluster, strings_)) {
      if (annotated_[member].empty()) continue;
      matches[c].outcome = {MatchType::kManualAnnotation, annotated_[member]};
      matches[c].matched_member = member;
      return;
    }
    matches[c] = match_cluster(cluster, strings_, matcher_);
  });

  std::size_t matched = 0;
  for (std::size_t c = 0; c < clusters_.size(); ++c) {
    for (auto& [member, outcome] : propagate(clusters_[c], matches[c])) {
      if (!annotated_[member].empty()) {
        outcome = {MatchType::kManualAnnotation, annotated_[member]};
      }
      matched += outcome.matched();
      outcomes_[member] = std::move(outcome);
    }
    for (const std::uint32_t m : matches[c].conflicting_members) {
      log_.warn("cluster_conflict",
                "cluster " + std::to_string(c) + ": " + describe(strings_[m]) +
                    " would match different organizations than " +
                    describe(strings_[*matches[c].matched_member]) + "; first member wins");
    }
  }
  log_.info("rules", std::to_string(matched) + " of " + std::to_string(strings_.size()) +
                         " strings matched after rule cascade and propagation");
}

void MatchPipeline::apply_manual_annotations(std::span<const ManualAnnotation> annotations) {
  std::unordered_map<std::string, std::vector<std::uint32_t>> by_normalized;
  for (const auto& s : strings_) by_normalized[s.normalized].push_back(s.string_id);

  std::size_t applied = 0;
  for (const auto& a : annotations) {
    const auto org = index_.by_canonical_id(a.canonical_id);
    if (!org) {
      log_.warn("annotation", "rejected \"" + a.raw_string + "\": unknown canonical_id " +
                                  a.canonical_id);
      continue;
    }
    const auto it = by_normalized.find(normalize_or_empty(a.raw_string));
    if (it == by_normalized.end()) {
      log_.info("annotation", "no corpus string for \"" + a.raw_string + "\"; ignored");
      continue;
    }
    for (const std::uint32_t id : it->second) {
      annotated_[id].push_back({*org, 1.0});
      annotated_[id] = best_per_org(std::move(annotated_[id]));
    }
    ++applied;
  }
  log_.info("annotation", std::to_string(applied) + " of " + std::to_string(annotations.size()) +
                              " annotations applied");
  if (applied > 0) match_clusters();
}

void MatchPipeline::propagate_new_matches(const std::vector<std::uint32_t>& newly_matched) {
  std::map<std::uint32_t, std::vector<std::uint32_t>> by_cluster;
  for (const std::uint32_t id : newly_matched) by_cluster[cluster_of_[id]].push_back(id);
  for (const auto& [c, ids] : by_cluster) {
    const auto order = trial_order(clusters_[c], strings_);
    const auto source = std::find_if(order.begin(), order.end(), [&](std::uint32_t m) {
      return std::find(ids.begin(), ids.end(), m) != ids.end();
    });
    const auto hits = outcomes_[*source].hits;
    for (const std::uint32_t m : clusters_[c].member_ids) {
      if (!outcomes_[m].matched()) outcomes_[m] = {MatchType::kDocumentClustering, hits};
    }
  }
}

void MatchPipeline::ner_assist(const NerProvider& provider) {
  std::vector<std::uint32_t> ids;
  std::vector<FunderString> band;
  for (const auto& s : strings_) {
    if (!outcomes_[s.string_id].matched() && s.count >= config_.medium_band_low &&
        s.count <= config_.medium_band_high) {
      ids.push_back(s.string_id);
      band.push_back(s);
    }
  }
  auto outcomes = funderlink::ner_assist(band, provider, matcher_, log_, workers_);
  std::vector<std::uint32_t> newly;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!outcomes[i].matched()) continue;
    outcomes_[ids[i]] = std::move(outcomes[i]);
    newly.push_back(ids[i]);
  }
  propagate_new_matches(newly);
  log_.info("ner", std::to_string(newly.size()) + " of " + std::to_string(ids.size()) +
                       " medium-frequency strings matched via NER spans");
}

void MatchPipeline::jaccard_fallback() {
  std::vector<std::uint32_t> ids;
  std::vector<FunderString> remaining;
  for (const auto& s : strings_) {
    if (!outcomes_[s.string_id].matched()) {
      ids.push_back(s.string_id);
      remaining.push_back(s);
    }
  }
  const FallbackParams params{config_.fallback_threshold, config_.shingle_width, config_.num_perms,
                              config_.seed};
  const auto banding = choose_banding(config_.num_perms, config_.fallback_threshold);
  log_.info("lsh", "fallback index bands=" + std::to_string(banding.bands) +
                       " rows=" + std::to_string(banding.rows) +
                       " characteristic_threshold=" + std::to_string(banding.characteristic_threshold));
  auto hits = funderlink::jaccard_fallback(remaining, index_, params, workers_);
  std::vector<std::uint32_t> newly;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (hits[i].empty()) continue;
    outcomes_[ids[i]] = {MatchType::kJaccardFallback, std::move(hits[i])};
    newly.push_back(ids[i]);
  }
  propagate_new_matches(newly);
  log_.info("fallback", std::to_string(newly.size()) + " of " + std::to_string(ids.size()) +
                            " remaining strings matched by similarity fallback");
}

void MatchPipeline::run(std::span<const ManualAnnotation> annotations, const NerProvider* provider) {
  cluster_strings();
  match_clusters();
  if (!annotations.empty()) apply_manual_annotations(annotations);
  if (provider) ner_assist(*provider);
  jaccard_fallback();
}

std::vector<MatchResult> MatchPipeline::results() const {
  std::vector<MatchResult> out;
  out.reserve(strings_.size());
  for (const auto& s : strings_) {
    MatchResult r;
    r.string_id = s.string_id;
    r.grant_agency = s.raw;
    r.counts = s.count;
    const auto& outcome = outcomes_[s.string_id];
    r.match_type = outcome.matched() ? outcome.type : MatchType::kUnmatched;
    for (const auto& hit : outcome.hits) r.candidates.push_back(make_candidate(index_.org(hit.org)));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::uint32_t> MatchPipeline::review_candidates() const {
  std::vector<std::uint32_t> out;
  for (const auto& s : strings_) {
    if (!outcomes_[s.string_id].matched() && s.count > config_.high_freq_cutoff) {
      out.push_back(s.string_id);
    }
  }
  return out;
}

}  // namespace funderlink
