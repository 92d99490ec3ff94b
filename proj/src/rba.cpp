#include "cooccur/rba.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "cooccur/parallel.hpp"

namespace cooccur::rba {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

bool is_lower_term(const std::string& term) {
  return std::none_of(term.begin(), term.end(), [](char c) {
    return std::isupper(static_cast<unsigned char>(c)) != 0;
  });
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> tokenize_lower(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (is_word_char(c)) {
      current += static_cast<char>(
          std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// A term pre-split into words; the last word also matches its +"s"/+"es"
// inflections.
struct CompiledTerm {
  std::vector<std::string> words;
};

std::vector<CompiledTerm> compile_terms(const std::set<std::string>& terms) {
  std::vector<CompiledTerm> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back({tokenize_lower(t)});
  return out;
}

bool last_word_matches(const std::string& word, const std::string& token) {
  if (token == word) return true;
  const std::size_t extra = token.size() - word.size();
  if (token.size() <= word.size() || extra > 2) return false;
  if (token.compare(0, word.size(), word) != 0) return false;
  return (extra == 1 && token[word.size()] == 's') ||
         (extra == 2 && token[word.size()] == 'e' &&
          token[word.size() + 1] == 's');
}

bool term_occurs(const CompiledTerm& term,
                 const std::vector<std::string>& tokens) {
  const auto& words = term.words;
  if (words.empty() || tokens.size() < words.size()) return false;
  const std::size_t m = words.size();
  for (std::size_t i = 0; i + m <= tokens.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j + 1 < m; ++j) {
      if (tokens[i + j] != words[j]) {
        ok = false;
        break;
      }
    }
    if (ok && last_word_matches(words[m - 1], tokens[i + m - 1])) return true;
  }
  return false;
}

bool any_term_occurs(const std::vector<CompiledTerm>& terms,
                     const std::vector<std::string>& tokens) {
  return std::any_of(terms.begin(), terms.end(), [&](const CompiledTerm& t) {
    return term_occurs(t, tokens);
  });
}

struct CompiledDictionary {
  std::vector<CompiledTerm> organs;
  std::vector<std::pair<std::string, std::vector<CompiledTerm>>> diseases;
  std::vector<CompiledTerm> negations;
  std::vector<std::vector<CompiledTerm>> others;

  explicit CompiledDictionary(const RuleDictionary& dict) {
    dict.validate();
    organs = compile_terms(dict.organ_terms);
    for (const auto& [name, terms] : dict.disease_terms)
      diseases.emplace_back(name, compile_terms(terms));
    negations = compile_terms(dict.negation_terms);
    for (const auto& [name, terms] : dict.other_disease_terms)
      others.push_back(compile_terms(terms));
  }
};

std::set<std::string> match_tokens(const std::vector<std::string>& tokens,
                                   const CompiledDictionary& dict) {
  std::set<std::string> positives;
  if (!any_term_occurs(dict.organs, tokens)) return positives;
  if (any_term_occurs(dict.negations, tokens)) return positives;
  for (const auto& [name, terms] : dict.diseases) {
    if (any_term_occurs(terms, tokens)) positives.insert(name);
  }
  for (const auto& terms : dict.others) {
    if (any_term_occurs(terms, tokens)) {
      positives.insert("other");
      break;
    }
  }
  return positives;
}

LabelVector label_compiled(const Report& report,
                           const CompiledDictionary& dict) {
  LabelVector out;
  out.scan_id = report.scan_id;
  for (const auto& sentence : segment_sentences(report.text)) {
    for (const auto& name : match_tokens(tokenize_lower(sentence), dict)) {
      if (name == "other") {
        out.other_disease = true;
      } else {
        out.set(parse_disease(name), true);
      }
    }
  }
  out.no_apparent_disease = !out.any_target() && !out.other_disease;
  return out;
}

}  // namespace

void RuleDictionary::validate() const {
  for (auto d : kDiseaseNames) {
    if (!disease_terms.contains(std::string(d)))
      throw ValidationError("dictionary missing target disease: " +
                            std::string(d));
  }
  auto check_set = [](const std::string& what,
                      const std::set<std::string>& terms) {
    if (terms.empty())
      throw ValidationError("dictionary term set is empty: " + what);
    for (const auto& t : terms) {
      if (t.empty() || !is_lower_term(t))
        throw ValidationError("dictionary term must be non-empty lowercase: '" +
                              t + "' in " + what);
    }
  };
  check_set("organ_terms", organ_terms);
  check_set("negation_terms", negation_terms);
  for (const auto& [name, terms] : disease_terms) check_set(name, terms);
  for (const auto& [name, terms] : other_disease_terms) check_set(name, terms);
  for (const auto& [name, terms] : disease_terms) {
    for (const auto& t : terms) {
      if (negation_terms.contains(t))
        throw ValidationError("term in both negations and synonyms of " +
                              name + ": " + t);
    }
  }
  for (const auto& [name, terms] : other_disease_terms) {
    for (const auto& t : terms) {
      if (negation_terms.contains(t))
        throw ValidationError("term in both negations and synonyms of " +
                              name + ": " + t);
    }
  }
}

std::vector<std::string> segment_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::string current;
  auto flush = [&] {
    std::string s = trim(current);
    if (!s.empty()) sentences.push_back(std::move(s));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '!' || c == '?' || c == '\n') {
      flush();
      continue;
    }
    if (c == '.') {
      // Initials guard: "J." does not end a sentence.
      const bool prev_is_letter =
          i >= 1 && std::isalpha(static_cast<unsigned char>(text[i - 1]));
      const bool prev2_is_word =
          i >= 2 && is_word_char(text[i - 2]);
      if (prev_is_letter && !prev2_is_word) {
        current += c;
        continue;
      }
      flush();
      continue;
    }
    current += c;
  }
  flush();
  return sentences;
}

std::set<std::string> match_sentence(const std::string& sentence,
                                     const RuleDictionary& dict) {
  return match_tokens(tokenize_lower(sentence), CompiledDictionary(dict));
}

LabelVector label_report(const Report& report, const RuleDictionary& dict) {
  return label_compiled(report, CompiledDictionary(dict));
}

std::vector<LabelVector> label_corpus(const std::vector<Report>& reports,
                                      const RuleDictionary& dict) {
  std::unordered_set<std::string> seen;
  seen.reserve(reports.size());
  for (const auto& r : reports) {
    if (!seen.insert(r.scan_id).second) throw DuplicateScanId(r.scan_id);
  }
  const CompiledDictionary compiled(dict);
  std::vector<LabelVector> out(reports.size());
  parallel_for(reports.size(), [&](std::size_t i) {
    out[i] = label_compiled(reports[i], compiled);
  });
  return out;
}

}  // namespace cooccur::rba
