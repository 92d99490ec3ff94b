#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cooccur/labels.hpp"

namespace cooccur::rba {

// Keyword dictionary driving the rule-based labeler. All terms are
// lowercase; a term may span several words ("volume loss", "free of").
// other_disease_terms lists findings that are screened only to decide the
// no-apparent-disease flag.
struct RuleDictionary {
  std::set<std::string> organ_terms;
  std::map<std::string, std::set<std::string>> disease_terms;
  std::set<std::string> negation_terms;
  std::map<std::string, std::set<std::string>> other_disease_terms;

  // Enforces: the four target diseases present, every declared term set
  // non-empty, no term shared between negation_terms and any synonym set,
  // all terms lowercase.
  void validate() const;
};

// Sentence boundaries at '.', '!', '?', '\n'. A period immediately after a
// single-letter token (an initial, "J.") does not split. Sentences are
// trimmed; empty segments are dropped.
std::vector<std::string> segment_sentences(const std::string& text);

// Core rule, applied per sentence: disease d is positive iff some organ
// term occurs AND some synonym of d occurs AND no negation term occurs
// anywhere in the sentence. Matching is case-insensitive on whole-word
// boundaries; every term t also matches t+"s" and t+"es".
// Target diseases map to their own names; other_disease_terms map to the
// single name "other".
std::set<std::string> match_sentence(const std::string& sentence,
                                     const RuleDictionary& dict);

// Each disease flag is the OR of match_sentence over all sentences;
// no_apparent_disease iff every target flag and other_disease are false.
LabelVector label_report(const Report& report, const RuleDictionary& dict);

// Order-preserving map of label_report over the corpus; reports are
// labeled in parallel. Throws DuplicateScanId on repeated scan ids.
std::vector<LabelVector> label_corpus(const std::vector<Report>& reports,
                                      const RuleDictionary& dict);

}  // namespace cooccur::rba
