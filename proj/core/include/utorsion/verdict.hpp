#pragma once

#include <optional>
#include <string>
#include <vector>

namespace utorsion {

enum class Truth { Holds, Fails, Unknown };

inline const char* truth_name(Truth t) {
  switch (t) {
    case Truth::Holds:
      return "Holds";
    case Truth::Fails:
      return "Fails";
    case Truth::Unknown:
      return "Unknown";
  }
  return "?";
}

struct Evidence {
  std::string rule;                // analytic rule or certificate applied
  std::vector<std::string> notes;  // numeric trail, sub-verdicts, samples
  bool catalog_relative = false;   // Holds only relative to the witness catalog
  std::optional<std::string> witness;  // rendering of a refuting/confirming witness
};

// Three-valued verdict. Holds/Fails are only issued with an analytic rule or a
// certified bound; everything heuristic stays Unknown.
struct Verdict {
  Truth value = Truth::Unknown;
  Evidence evidence;

  static Verdict holds(std::string rule) { return {Truth::Holds, {std::move(rule), {}, false, {}}}; }
  static Verdict fails(std::string rule) { return {Truth::Fails, {std::move(rule), {}, false, {}}}; }
  static Verdict unknown(std::string rule) {
    return {Truth::Unknown, {std::move(rule), {}, false, {}}};
  }

  Verdict& note(std::string n) {
    evidence.notes.push_back(std::move(n));
    return *this;
  }
  Verdict& with_witness(std::string w) {
    evidence.witness = std::move(w);
    return *this;
  }
  Verdict& catalog_relative() {
    evidence.catalog_relative = true;
    return *this;
  }

  bool holds_val() const { return value == Truth::Holds; }
  bool fails_val() const { return value == Truth::Fails; }
  bool unknown_val() const { return value == Truth::Unknown; }
};

// Conjunction: any Fails wins, then any Unknown, else Holds.
inline Verdict conjoin(const std::vector<Verdict>& parts, const std::string& rule) {
  Verdict out = Verdict::holds(rule);
  bool any_unknown = false, any_catalog = false;
  for (const auto& p : parts) {
    if (p.value == Truth::Fails) {
      Verdict f = Verdict::fails(rule);
      f.evidence.notes.push_back("failing part: " + p.evidence.rule);
      if (p.evidence.witness) f.evidence.witness = p.evidence.witness;
      return f;
    }
    any_unknown |= p.value == Truth::Unknown;
    any_catalog |= p.evidence.catalog_relative;
  }
  if (any_unknown) return Verdict::unknown(rule);
  if (any_catalog) out.catalog_relative();
  return out;
}

}  // namespace utorsion
