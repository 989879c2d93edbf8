#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pcw {

// a^T z >= b over integer coefficients, variables z_1..z_n stored 0-based.
struct LinearInequality {
  std::vector<std::int64_t> coeffs;
  std::int64_t constant = 0;

  LinearInequality() = default;
  LinearInequality(std::vector<std::int64_t> a, std::int64_t b)
      : coeffs(std::move(a)), constant(b) {}

  int num_vars() const { return static_cast<int>(coeffs.size()); }

  // max(|a_i|, |b|)
  std::int64_t weight() const;

  bool all_zero_coeffs() const;

  // 0 >= b with b >= 1.
  bool is_contradiction() const { return all_zero_coeffs() && constant >= 1; }

  // `point` is indexed by variable - 1.
  bool satisfied_by(const std::vector<std::int64_t>& point) const;

  std::string to_string() const;

  friend bool operator==(const LinearInequality&, const LinearInequality&) = default;
};

}  // namespace pcw
