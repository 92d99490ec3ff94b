#include "cooccur/labels.hpp"

#include <algorithm>

namespace cooccur {

Disease parse_disease(std::string_view name) {
  for (std::size_t i = 0; i < kNumDiseases; ++i) {
    if (kDiseaseNames[i] == name) return static_cast<Disease>(i);
  }
  throw UnknownClass(std::string(name));
}

std::vector<std::string> DiseaseSet::sorted_names() const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < kNumDiseases; ++i) {
    Disease d = static_cast<Disease>(i);
    if (contains(d)) names.emplace_back(disease_name(d));
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string DiseaseSet::joined() const {
  std::string out;
  for (const auto& name : sorted_names()) {
    if (!out.empty()) out += '+';
    out += name;
  }
  return out;
}

}  // namespace cooccur
