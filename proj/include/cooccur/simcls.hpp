#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cooccur/cohort.hpp"
#include "cooccur/metrics.hpp"

namespace cooccur::simcls {

// Target population shape: one probability per exact disease combination.
// Keys follow the tree-node convention: "no_apparent" or '+'-joined sorted
// disease names. One scan per subject.
struct PopulationSpec {
  std::size_t n_subjects = 0;
  std::map<std::string, double> combo_weights;
  std::size_t scans_per_subject = 1;
  uint64_t seed = 0;

  // Probabilities non-negative, summing to 1 within 1e-9; keys parseable;
  // scans_per_subject == 1. Throws InvalidSpec.
  void validate() const;
};

// Score model standing in for a trained image classifier:
//   raw   = bias + sum_d weights[d] * [d positive] + Normal(0, noise_sd)
//   score = logistic(raw)
// Noise for scan i comes from the stream derived from (seed, i).
struct ClassifierSpec {
  std::map<std::string, double> weights;  // per-disease signal strength
  double bias = 0.0;
  double noise_sd = 1.0;
  uint64_t seed = 0;

  void validate() const;  // noise_sd > 0, weight keys are diseases
};

// Draws each subject's combination i.i.d. from combo_weights (stream per
// subject index; cumulative walk over keys in lexicographic order) and
// emits a manifest with synthetic ids S<index>/C<index>.
cohort::Manifest sample_population(const PopulationSpec& spec);

// Deterministic scores for every scan in the manifest, in manifest order.
std::vector<metrics::ScoreRecord> simulate_scores(
    const cohort::Manifest& manifest, const ClassifierSpec& clf);

}  // namespace cooccur::simcls
