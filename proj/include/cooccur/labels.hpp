#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cooccur/errors.hpp"

namespace cooccur {

// The four target diseases, in the canonical column order used by every
// CSV this toolkit reads or writes.
enum class Disease : uint8_t {
  atelectasis = 0,
  nodule = 1,
  emphysema = 2,
  effusion = 3,
};

inline constexpr std::size_t kNumDiseases = 4;

inline constexpr std::array<std::string_view, kNumDiseases> kDiseaseNames = {
    "atelectasis", "nodule", "emphysema", "effusion"};

inline std::string_view disease_name(Disease d) {
  return kDiseaseNames[static_cast<std::size_t>(d)];
}

// Throws UnknownClass for anything but the four target disease names.
Disease parse_disease(std::string_view name);

// Subset of the four target diseases, stored as a 4-bit mask.
class DiseaseSet {
public:
  DiseaseSet() = default;
  explicit DiseaseSet(uint8_t mask) : mask_(mask & 0x0f) {}

  static DiseaseSet of(std::initializer_list<Disease> ds) {
    DiseaseSet s;
    for (Disease d : ds) s.set(d);
    return s;
  }

  bool contains(Disease d) const { return mask_ & bit(d); }
  void set(Disease d) { mask_ |= bit(d); }
  bool empty() const { return mask_ == 0; }
  int size() const { return __builtin_popcount(mask_); }
  uint8_t mask() const { return mask_; }

  DiseaseSet with(Disease d) const {
    DiseaseSet s = *this;
    s.set(d);
    return s;
  }

  bool operator==(const DiseaseSet&) const = default;
  auto operator<=>(const DiseaseSet&) const = default;

  // Member names sorted lexicographically, e.g. {effusion, nodule}.
  std::vector<std::string> sorted_names() const;

  // '+'-joined sorted names; "" for the empty set.
  std::string joined() const;

private:
  static uint8_t bit(Disease d) { return uint8_t{1} << static_cast<int>(d); }
  uint8_t mask_ = 0;
};

// One radiology report. scan_id is unique within a corpus; subject_id may
// repeat across scans. text may be empty.
struct Report {
  std::string subject_id;
  std::string scan_id;
  std::string text;
};

// Per-scan multi-label annotation produced by the rule-based labeler.
struct LabelVector {
  std::string scan_id;
  bool atelectasis = false;
  bool nodule = false;
  bool emphysema = false;
  bool effusion = false;
  bool other_disease = false;
  bool no_apparent_disease = false;

  bool has(Disease d) const {
    switch (d) {
      case Disease::atelectasis: return atelectasis;
      case Disease::nodule: return nodule;
      case Disease::emphysema: return emphysema;
      case Disease::effusion: return effusion;
    }
    return false;
  }

  void set(Disease d, bool v) {
    switch (d) {
      case Disease::atelectasis: atelectasis = v; return;
      case Disease::nodule: nodule = v; return;
      case Disease::emphysema: emphysema = v; return;
      case Disease::effusion: effusion = v; return;
    }
  }

  DiseaseSet positive_set() const {
    DiseaseSet s;
    for (std::size_t i = 0; i < kNumDiseases; ++i) {
      Disease d = static_cast<Disease>(i);
      if (has(d)) s.set(d);
    }
    return s;
  }

  bool any_target() const { return !positive_set().empty(); }

  // no_apparent_disease must be the exact complement of "any flag set".
  void check() const {
    if (no_apparent_disease && (any_target() || other_disease))
      throw ValidationError("label vector " + scan_id +
                            ": no_apparent_disease set alongside a disease flag");
    if (!no_apparent_disease && !any_target() && !other_disease)
      throw ValidationError("label vector " + scan_id +
                            ": all flags clear but no_apparent_disease unset");
  }
};

}  // namespace cooccur
