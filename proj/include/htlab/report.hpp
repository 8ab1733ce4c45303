#pragma once

#include <optional>
#include <string>
#include <vector>

namespace htlab {

enum class Status { Pass, Fail, Undecided };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Undecided: return "undecided";
  }
  return "unknown";
}

// Summary of a residual: how many coefficients failed to vanish, and the
// smallest pi-adic valuation among them.
struct Residual {
  int nonzero_count = 0;
  std::optional<int> worst_valuation;
  std::string first_witness;

  bool zero() const { return nonzero_count == 0; }
  void record(int valuation, const std::string& witness) {
    if (nonzero_count == 0) first_witness = witness;
    ++nonzero_count;
    if (!worst_valuation || valuation < *worst_valuation) worst_valuation = valuation;
  }
  void merge(const Residual& other) {
    if (other.nonzero_count == 0) return;
    if (nonzero_count == 0) first_witness = other.first_witness;
    nonzero_count += other.nonzero_count;
    if (!worst_valuation || (other.worst_valuation && *other.worst_valuation < *worst_valuation))
      worst_valuation = other.worst_valuation;
  }
};

struct CheckResult {
  std::string name;
  Status status = Status::Pass;
  std::string detail;
};

}  // namespace htlab
