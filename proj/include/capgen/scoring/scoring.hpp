#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace capgen::scoring {

// Exact non-negative-denominator fraction, always in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Rounded half-up to two decimals, e.g. "0.14".
  std::string display() const;
  // Exact rendering "n/d" (or "n" for integers).
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Half-up rounding of a fraction to hundredths, returned as a fraction over 100.
Rational round_hundredths(const Rational& r);

struct ErrorCounts {
  int syntax = 0;         // S
  int contradiction = 0;  // C
  int hallucination = 0;  // H
  int incomplete = 0;     // I
  int triples = 0;        // gold triple count

  int total() const { return syntax + contradiction + hallucination + incomplete; }
};

struct ErrorScores {
  Rational syntax;
  Rational contradiction;
  Rational hallucination;
  Rational incomplete;
  Rational sum;
};

// Each error count divided by the triple count. Throws std::invalid_argument
// when triples <= 0, any count is negative or I exceeds the triple count.
ErrorScores relative_scores(const ErrorCounts& c);

Rational sum_score(const ErrorCounts& c);

// Arithmetic mean. Throws std::invalid_argument on an empty list.
Rational mean_error(const std::vector<Rational>& values);

// 1 - I-rel. Throws std::invalid_argument outside [0, 1].
Rational completeness(const Rational& incomplete_rel);

struct CapabilityCounts {
  std::string capability;
  ErrorCounts counts;
};

struct AggregateScores {
  std::string technique;
  std::string provider;
  Rational mean_error;
  std::vector<std::pair<std::string, Rational>> completeness_by_capability;
};

// Mean of per-capability unrounded sums plus completeness per capability.
AggregateScores aggregate(const std::string& technique, const std::string& provider,
                          const std::vector<CapabilityCounts>& cells);

std::string display(const Rational& r);

void to_json(nlohmann::json& j, const ErrorCounts& c);
void from_json(const nlohmann::json& j, ErrorCounts& c);
void to_json(nlohmann::json& j, const ErrorScores& s);

}  // namespace capgen::scoring
