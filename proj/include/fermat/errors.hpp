#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fermat {

// Raised when a computed object contradicts a proven identity (a classification
// mismatch, a non-integral expansion, a failed group identity). The CLI maps it
// to exit code 3.
class VerificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A requested odd residue degree has det(D_{k,f}) = 0, so no distribution is known.
class DegenerateResidueDegree : public std::domain_error {
 public:
  DegenerateResidueDegree(unsigned ell, unsigned k, std::vector<unsigned> degrees)
      : std::domain_error(message(ell, k, degrees)), degrees_(std::move(degrees)) {}

  const std::vector<unsigned>& degrees() const noexcept { return degrees_; }

 private:
  static std::string message(unsigned ell, unsigned k, const std::vector<unsigned>& degrees) {
    std::string s = "degenerate residue degree(s) for (" + std::to_string(ell) + "," +
                    std::to_string(k) + "):";
    for (unsigned f : degrees) s += " " + std::to_string(f);
    return s;
  }

  std::vector<unsigned> degrees_;
};

// Floating evaluation could not separate a nonzero exact value from zero.
class PrecisionInsufficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fermat
