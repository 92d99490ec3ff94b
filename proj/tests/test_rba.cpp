#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "cooccur/rba.hpp"
#include "cooccur/rng.hpp"

using namespace cooccur;

namespace {

rba::RuleDictionary test_dict() {
  rba::RuleDictionary d;
  d.organ_terms = {"lung", "lobe", "pleura"};
  d.disease_terms = {
      {"atelectasis", {"atelectasis", "collapse"}},
      {"nodule", {"nodule", "mass"}},
      {"emphysema", {"emphysema"}},
      {"effusion", {"effusion", "fluid"}},
  };
  d.negation_terms = {"no", "without", "not"};
  d.other_disease_terms = {
      {"pneumonia", {"pneumonia"}},
      {"cyst", {"cyst"}},
  };
  return d;
}

// Independent re-implementation of the three-clause rule: regex word
// extraction, then membership of generated term variants among the
// sentence's contiguous word n-grams.
std::vector<std::string> oracle_words(const std::string& sentence) {
  static const std::regex word_re("[A-Za-z0-9]+");
  std::vector<std::string> words;
  for (std::sregex_iterator it(sentence.begin(), sentence.end(), word_re), end;
       it != end; ++it) {
    std::string w = it->str();
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
    words.push_back(std::move(w));
  }
  return words;
}

std::set<std::string> oracle_ngrams(const std::vector<std::string>& words,
                                    std::size_t max_len) {
  std::set<std::string> grams;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string g;
    for (std::size_t k = 0; k < max_len && i + k < words.size(); ++k) {
      if (k > 0) g += ' ';
      g += words[i + k];
      grams.insert(g);
    }
  }
  return grams;
}

bool oracle_has_term(const std::set<std::string>& grams,
                     const std::string& term) {
  return grams.contains(term) || grams.contains(term + "s") ||
         grams.contains(term + "es");
}

std::set<std::string> oracle_match(const std::string& sentence,
                                   const rba::RuleDictionary& dict) {
  const auto grams = oracle_ngrams(oracle_words(sentence), 4);
  auto any = [&](const std::set<std::string>& terms) {
    return std::any_of(terms.begin(), terms.end(), [&](const std::string& t) {
      return oracle_has_term(grams, t);
    });
  };
  std::set<std::string> out;
  if (!any(dict.organ_terms)) return out;
  if (any(dict.negation_terms)) return out;
  for (const auto& [name, terms] : dict.disease_terms) {
    if (any(terms)) out.insert(name);
  }
  for (const auto& [name, terms] : dict.other_disease_terms) {
    if (any(terms)) out.insert("other");
  }
  return out;
}

std::string random_sentence(rng::SplitMix64& gen) {
  static const std::vector<std::string> pool = {
      // organ terms and near-misses
      "lung", "lobe", "pleura", "liver", "heart", "lunge",
      // disease terms, inflections, near-misses
      "nodule", "nodules", "mass", "masses", "collapse", "atelectasis",
      "emphysema", "effusion", "fluid", "internodule", "massive",
      "pneumonia", "cyst",
      // negations
      "no", "without", "not", "node",
      // filler
      "the", "right", "left", "is", "seen", "in", "with", "small"};
  const std::size_t len = 3 + gen.bounded(8);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) {
    if (!s.empty()) s += ' ';
    s += pool[gen.bounded(pool.size())];
  }
  return s;
}

}  // namespace

TEST_SUITE("rba") {

TEST_CASE("segment_sentences basic") {
  CHECK(rba::segment_sentences("") == std::vector<std::string>{});
  CHECK(rba::segment_sentences("No nodule. Mild emphysema.") ==
        std::vector<std::string>{"No nodule", "Mild emphysema"});
  CHECK(rba::segment_sentences("one!two?three\nfour") ==
        std::vector<std::string>{"one", "two", "three", "four"});
  CHECK(rba::segment_sentences("   \n  . ! ") == std::vector<std::string>{});
}

TEST_CASE("segment_sentences initials guard") {
  CHECK(rba::segment_sentences("Reviewed by J. Smith. No findings.") ==
        std::vector<std::string>{"Reviewed by J. Smith", "No findings"});
  // guard applies only to single-letter tokens
  CHECK(rba::segment_sentences("Seen in the lung. Stable.") ==
        std::vector<std::string>{"Seen in the lung", "Stable"});
  CHECK(rba::segment_sentences("A. Normal exam.") ==
        std::vector<std::string>{"A. Normal exam"});
}

TEST_CASE("segment_sentences 50-sentence report matches oracle count") {
  rng::SplitMix64 gen(2024);
  const std::vector<std::string> terminators = {". ", "! ", "? ", "\n"};
  std::string text;
  for (int i = 0; i < 50; ++i) {
    text += "clause number " + std::to_string(i);
    text += terminators[gen.bounded(terminators.size())];
  }
  const auto sentences = rba::segment_sentences(text);
  CHECK(sentences.size() == 50);

  // independent count of terminator-delimited non-empty segments
  std::size_t oracle_count = 0;
  std::string current;
  for (char c : text) {
    if (c == '.' || c == '!' || c == '?' || c == '\n') {
      if (current.find_first_not_of(" \t") != std::string::npos)
        ++oracle_count;
      current.clear();
    } else {
      current += c;
    }
  }
  if (current.find_first_not_of(" \t") != std::string::npos) ++oracle_count;
  CHECK(sentences.size() == oracle_count);
}

TEST_CASE("match_sentence three-clause rule") {
  const auto dict = test_dict();
  CHECK(rba::match_sentence("There is a nodule in the right lobe", dict) ==
        std::set<std::string>{"nodule"});
  CHECK(rba::match_sentence("No nodule in the lung", dict).empty());
  CHECK(rba::match_sentence("Nodule noted", dict).empty());
  CHECK(rba::match_sentence("Effusion and emphysema in the lung", dict) ==
        std::set<std::string>{"effusion", "emphysema"});
  CHECK(rba::match_sentence("Pneumonia in the left lung", dict) ==
        std::set<std::string>{"other"});
  CHECK(rba::match_sentence("Lung fields without fluid", dict).empty());
}

TEST_CASE("match_sentence case, plural, and word boundaries") {
  const auto dict = test_dict();
  CHECK(rba::match_sentence("NODULE IN THE LUNG", dict) ==
        std::set<std::string>{"nodule"});
  CHECK(rba::match_sentence("nodules in both lungs", dict) ==
        std::set<std::string>{"nodule"});
  CHECK(rba::match_sentence("masses in the lobe", dict) ==
        std::set<std::string>{"nodule"});
  CHECK(rba::match_sentence("internodule distance in the lung", dict).empty());
  CHECK(rba::match_sentence("massive cardiomegaly near the lung", dict)
            .empty());
}

TEST_CASE("match_sentence equals brute-force oracle on random sentences") {
  const auto dict = test_dict();
  rng::SplitMix64 gen(7);
  for (int i = 0; i < 1000; ++i) {
    const std::string s = random_sentence(gen);
    CAPTURE(s);
    CHECK(rba::match_sentence(s, dict) == oracle_match(s, dict));
  }
}

TEST_CASE("label_report composition") {
  const auto dict = test_dict();
  auto lv = rba::label_report(
      {"s1", "c1", "No nodule. Atelectasis in the left lung."}, dict);
  CHECK(lv.scan_id == "c1");
  CHECK(lv.atelectasis);
  CHECK_FALSE(lv.nodule);
  CHECK_FALSE(lv.emphysema);
  CHECK_FALSE(lv.effusion);
  CHECK_FALSE(lv.other_disease);
  CHECK_FALSE(lv.no_apparent_disease);

  lv = rba::label_report({"s2", "c2", "Normal study of the chest."}, dict);
  CHECK_FALSE(lv.any_target());
  CHECK_FALSE(lv.other_disease);
  CHECK(lv.no_apparent_disease);

  // other-disease terms are organ-gated too
  lv = rba::label_report({"s3", "c3", "Lung nodule. Hepatic cyst noted."},
                         dict);
  CHECK(lv.nodule);
  CHECK_FALSE(lv.other_disease);
  CHECK_FALSE(lv.no_apparent_disease);

  lv = rba::label_report({"s4", "c4", ""}, dict);
  CHECK(lv.no_apparent_disease);
}

TEST_CASE("label_corpus preserves order and rejects duplicates") {
  const auto dict = test_dict();
  CHECK(rba::label_corpus({}, dict).empty());

  std::vector<Report> corpus = {
      {"s1", "c1", "No nodule. Atelectasis in the left lung."},
      {"s2", "c2", "Normal study of the chest."},
  };
  auto labels = rba::label_corpus(corpus, dict);
  REQUIRE(labels.size() == 2);
  CHECK(labels[0].atelectasis);
  CHECK(labels[1].no_apparent_disease);

  corpus.push_back({"s3", "c1", "duplicate id"});
  CHECK_THROWS_AS(rba::label_corpus(corpus, dict), DuplicateScanId);
}

TEST_CASE("label_corpus equals element-wise label_report at any parallelism") {
  const auto dict = test_dict();
  rng::SplitMix64 gen(31);
  std::vector<Report> corpus;
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    const std::size_t n_sent = 1 + gen.bounded(5);
    for (std::size_t k = 0; k < n_sent; ++k) {
      text += random_sentence(gen);
      text += ". ";
    }
    corpus.push_back({"s" + std::to_string(i % 700), "c" + std::to_string(i),
                      std::move(text)});
  }

  std::vector<LabelVector> expected;
  expected.reserve(corpus.size());
  for (const auto& r : corpus) expected.push_back(rba::label_report(r, dict));

  auto same = [](const std::vector<LabelVector>& a,
                 const std::vector<LabelVector>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].scan_id != b[i].scan_id ||
          a[i].atelectasis != b[i].atelectasis ||
          a[i].nodule != b[i].nodule || a[i].emphysema != b[i].emphysema ||
          a[i].effusion != b[i].effusion ||
          a[i].other_disease != b[i].other_disease ||
          a[i].no_apparent_disease != b[i].no_apparent_disease)
        return false;
    }
    return true;
  };

  for (const char* threads : {"1", "3", "0"}) {
    setenv("COOCCUR_LAB_THREADS", threads, 1);
    CHECK(same(rba::label_corpus(corpus, dict), expected));
  }
  unsetenv("COOCCUR_LAB_THREADS");
  CHECK(same(rba::label_corpus(corpus, dict), expected));
}

TEST_CASE("property: negation dominance") {
  const auto dict = test_dict();
  rng::SplitMix64 gen(17);
  for (int i = 0; i < 300; ++i) {
    const std::string s = random_sentence(gen);
    CHECK(rba::match_sentence("No " + s, dict).empty());
  }
}

TEST_CASE("property: adding sentences never clears a flag") {
  const auto dict = test_dict();
  rng::SplitMix64 gen(23);
  for (int i = 0; i < 300; ++i) {
    const std::string base = random_sentence(gen) + ".";
    const std::string extended = base + " " + random_sentence(gen) + ".";
    const auto before = rba::label_report({"s", "c", base}, dict);
    const auto after = rba::label_report({"s", "c", extended}, dict);
    for (std::size_t k = 0; k < kNumDiseases; ++k) {
      Disease d = static_cast<Disease>(k);
      if (before.has(d)) CHECK(after.has(d));
    }
    if (before.other_disease) CHECK(after.other_disease);
  }
}

TEST_CASE("property: no_apparent_disease is the exact complement") {
  const auto dict = test_dict();
  rng::SplitMix64 gen(41);
  for (int i = 0; i < 300; ++i) {
    const auto lv =
        rba::label_report({"s", "c", random_sentence(gen) + "."}, dict);
    CHECK(lv.no_apparent_disease == (!lv.any_target() && !lv.other_disease));
    CHECK_NOTHROW(lv.check());
  }
}

TEST_CASE("dictionary validation") {
  auto dict = test_dict();
  CHECK_NOTHROW(dict.validate());

  auto missing = dict;
  missing.disease_terms.erase("nodule");
  CHECK_THROWS_AS(missing.validate(), ValidationError);

  auto overlap = dict;
  overlap.negation_terms.insert("mass");
  CHECK_THROWS_AS(overlap.validate(), ValidationError);

  auto upper = dict;
  upper.organ_terms.insert("Lung");
  CHECK_THROWS_AS(upper.validate(), ValidationError);

  auto empty_set = dict;
  empty_set.disease_terms["emphysema"].clear();
  CHECK_THROWS_AS(empty_set.validate(), ValidationError);
}

}  // TEST_SUITE
