#pragma once

// Exponent sets shared by the solver and the multivariate projection.

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ratsos {

/// Strictly increasing nonnegative powers s_1 < ... < s_{l+1}; the last one is
/// the degree of the leading square.
class SupportSet {
 public:
  SupportSet() = default;
  explicit SupportSet(std::vector<std::uint32_t> powers) : s_(std::move(powers)) { check(); }
  SupportSet(std::initializer_list<std::uint32_t> powers) : s_(powers) { check(); }

  /// 0, 1, ..., half_degree.
  static SupportSet dense(std::uint32_t half_degree) {
    std::vector<std::uint32_t> s(half_degree + 1);
    for (std::uint32_t i = 0; i <= half_degree; ++i) s[i] = i;
    return SupportSet(std::move(s));
  }

  const std::vector<std::uint32_t>& powers() const { return s_; }
  std::size_t size() const { return s_.size(); }
  bool empty() const { return s_.empty(); }
  std::uint32_t top() const { return s_.back(); }
  std::uint32_t operator[](std::size_t i) const { return s_[i]; }
  bool contains(std::uint32_t e) const {
    for (auto v : s_)
      if (v == e) return true;
    return false;
  }

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < s_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(s_[i]);
    }
    return out + "}";
  }

 private:
  void check() const {
    for (std::size_t i = 1; i < s_.size(); ++i)
      if (s_[i] <= s_[i - 1]) throw std::invalid_argument("support powers must strictly increase");
  }

  std::vector<std::uint32_t> s_;
};

/// Substitution exponents k_1 < ... < k_n, one per variable, k_1 = 1.
class PowerMap {
 public:
  PowerMap() = default;
  explicit PowerMap(std::vector<std::uint64_t> k) : k_(std::move(k)) {
    for (std::size_t i = 0; i < k_.size(); ++i) {
      if (k_[i] == 0) throw std::invalid_argument("power map exponents must be positive");
      if (i > 0 && k_[i] <= k_[i - 1])
        throw std::invalid_argument("power map exponents must strictly increase");
    }
  }
  PowerMap(std::initializer_list<std::uint64_t> k) : PowerMap(std::vector<std::uint64_t>(k)) {}

  const std::vector<std::uint64_t>& exponents() const { return k_; }
  std::size_t size() const { return k_.size(); }
  std::uint64_t operator[](std::size_t i) const { return k_[i]; }

  friend bool operator==(const PowerMap&, const PowerMap&) = default;

  std::string str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < k_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(k_[i]);
    }
    return out + ")";
  }

 private:
  std::vector<std::uint64_t> k_;
};

}  // namespace ratsos
