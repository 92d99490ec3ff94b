#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "cooccur/labels.hpp"

namespace cooccur::cohort {

struct ManifestEntry {
  std::string scan_id;
  std::string subject_id;
  LabelVector labels;
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }

  // Positive scans per class; keys are the four diseases plus "other" and
  // "no_apparent_disease".
  std::map<std::string, std::size_t> class_counts() const;

  std::size_t unique_subject_count() const;
};

enum class Split : uint8_t { train, validation, test };

std::string_view split_name(Split s);
Split parse_split(std::string_view name);

struct SplitAssignment {
  std::unordered_map<std::string, Split> by_subject;
  uint64_t seed = 0;

  Split at(const std::string& subject_id) const;
};

struct SplitFractions {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;
};

// One node per exact disease combination. The no-apparent node is keyed
// separately from the empty target combination (subjects whose scans carry
// only other-disease findings).
struct TreeNode {
  DiseaseSet combo;
  bool no_apparent = false;
  std::size_t n = 0;
  double percent = 0.0;

  // "no_apparent", '+'-joined sorted disease names, or "" (other-only).
  std::string key() const;
};

struct CooccurrenceTree {
  std::size_t total_subjects = 0;  // N
  std::vector<TreeNode> nodes;     // descending n, ties by key

  const TreeNode* find(const std::string& key) const;
};

// Pairs labels with their subjects, preserving input order. Throws
// MissingSubject when a scan has no subject mapping, DuplicateScanId on
// repeats.
Manifest build_manifest(
    const std::vector<LabelVector>& labels,
    const std::unordered_map<std::string, std::string>& subjects);

// Subject-level split preserving normal vs diseased prevalence. A subject
// is "normal" only if every one of its scans is no-apparent. Within each
// stratum, subjects (in order of first appearance) are permuted by a
// seeded Fisher-Yates shuffle (stream derived from the seed and the
// stratum name) and cut at floor(train*k) and floor((train+validation)*k);
// the remainder is test.
SplitAssignment split_subjects(const Manifest& manifest,
                               const SplitFractions& fractions, uint64_t seed);

// Exact-combination tally over unique subjects. A subject's combination is
// the union of its scans' positive target diseases; subjects with an empty
// union land in the no-apparent node when every scan is no-apparent and in
// the empty-combination node otherwise. Sum of node counts equals N.
CooccurrenceTree build_cooccurrence_tree(const Manifest& manifest);

}  // namespace cooccur::cohort
