#ifndef POISTRI_VERIFY_HPP
#define POISTRI_VERIFY_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace poistri {

inline constexpr std::uint64_t kDefaultSeed = 20171221;
inline constexpr int kCriteria = 12;

struct VerifyConfig {
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
  double alpha = 0.001;
  double tol = 1e-10;
  std::size_t n_moments = 1000000;
  std::size_t n_ac = 10000000;
  std::size_t n_ks = 100000;
  // Criteria to run (1..11); empty means all of them.
  std::vector<int> criteria;
  // Name of a check whose expected constant is replaced by a wrong one.
  std::string inject_fault;
};

struct Check {
  std::string name;  // "c02.pinned/a/mean.quadrature"
  int criterion = 0;
  std::string family;
  std::variant<double, std::string> expected;
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<Check> checks;

  bool pass() const noexcept;
  std::vector<const Check*> failures() const;
};

// Runs the acceptance suite. Criterion 12 (run-to-run determinism) is a
// property of two reports and is left to the caller. Throws
// std::invalid_argument when inject_fault names no check.
VerifyReport run_verify(const VerifyConfig& config, const std::function<void(int)>& on_criterion = {});

}  // namespace poistri

#endif  // POISTRI_VERIFY_HPP
