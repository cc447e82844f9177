#include "capgen/scoring/scoring.hpp"

#include <cstdlib>
#include <numeric>

namespace capgen::scoring {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
  return static_cast<std::int64_t>(v);
}

Wide gcd_wide(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(Wide n, Wide d) {
  if (d == 0) throw std::domain_error("division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Wide g = gcd_wide(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return Rational(narrow(n), narrow(d));
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n, d);
  num_ = g > 1 ? n / g : n;
  den_ = g > 1 ? d / g : d;
}

Rational operator+(const Rational& a, const Rational& b) {
  std::int64_t l = std::lcm(a.den_, b.den_);
  return make(Wide(a.num_) * (l / a.den_) + Wide(b.num_) * (l / b.den_), l);
}

Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num_, b.den_); }

Rational operator*(const Rational& a, const Rational& b) { return make(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_); }

Rational operator/(const Rational& a, const Rational& b) { return make(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_); }

bool operator<(const Rational& a, const Rational& b) { return Wide(a.num_) * b.den_ < Wide(b.num_) * a.den_; }

Rational round_hundredths(const Rational& r) {
  // floor((200n + d) / 2d) / 100, floor taken towards minus infinity.
  Wide top = Wide(200) * r.num() + r.den();
  Wide bottom = Wide(2) * r.den();
  Wide q = top / bottom;
  if (top % bottom != 0 && top < 0) --q;
  return make(q, 100);
}

std::string Rational::display() const {
  Rational h = round_hundredths(*this);
  Wide cents = Wide(h.num()) * (100 / h.den());
  bool negative = cents < 0;
  if (negative) cents = -cents;
  std::int64_t c = narrow(cents);
  std::string frac = std::to_string(c % 100);
  if (frac.size() < 2) frac = "0" + frac;
  return (negative ? "-" : "") + std::to_string(c / 100) + "." + frac;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

ErrorScores relative_scores(const ErrorCounts& c) {
  if (c.triples <= 0) throw std::invalid_argument("relative scores need a positive triple count");
  if (c.syntax < 0 || c.contradiction < 0 || c.hallucination < 0 || c.incomplete < 0) {
    throw std::invalid_argument("error counts must be non-negative");
  }
  if (c.incomplete > c.triples) throw std::invalid_argument("more missing triples than gold triples");
  ErrorScores s;
  s.syntax = Rational(c.syntax, c.triples);
  s.contradiction = Rational(c.contradiction, c.triples);
  s.hallucination = Rational(c.hallucination, c.triples);
  s.incomplete = Rational(c.incomplete, c.triples);
  s.sum = Rational(c.total(), c.triples);
  return s;
}

Rational sum_score(const ErrorCounts& c) { return relative_scores(c).sum; }

Rational mean_error(const std::vector<Rational>& values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty list");
  Rational total;
  for (const auto& v : values) total = total + v;
  return total / Rational(static_cast<std::int64_t>(values.size()));
}

Rational completeness(const Rational& incomplete_rel) {
  if (incomplete_rel < Rational(0) || Rational(1) < incomplete_rel) {
    throw std::invalid_argument("relative incompleteness must lie in [0, 1]");
  }
  return Rational(1) - incomplete_rel;
}

AggregateScores aggregate(const std::string& technique, const std::string& provider,
                          const std::vector<CapabilityCounts>& cells) {
  AggregateScores a{technique, provider, {}, {}};
  std::vector<Rational> sums;
  for (const auto& cell : cells) {
    ErrorScores s = relative_scores(cell.counts);
    sums.push_back(s.sum);
    a.completeness_by_capability.emplace_back(cell.capability, completeness(s.incomplete));
  }
  a.mean_error = mean_error(sums);
  return a;
}

std::string display(const Rational& r) { return r.display(); }

void to_json(nlohmann::json& j, const ErrorCounts& c) {
  j = nlohmann::json{{"S", c.syntax}, {"C", c.contradiction}, {"H", c.hallucination}, {"I", c.incomplete},
                     {"triples", c.triples}};
}

void from_json(const nlohmann::json& j, ErrorCounts& c) {
  c.syntax = j.at("S").get<int>();
  c.contradiction = j.at("C").get<int>();
  c.hallucination = j.at("H").get<int>();
  c.incomplete = j.at("I").get<int>();
  c.triples = j.at("triples").get<int>();
}

void to_json(nlohmann::json& j, const ErrorScores& s) {
  auto entry = [](const Rational& r) { return nlohmann::json{{"exact", r.str()}, {"value", r.to_double()}}; };
  j = nlohmann::json{{"S", entry(s.syntax)},
                     {"C", entry(s.contradiction)},
                     {"H", entry(s.hallucination)},
                     {"I", entry(s.incomplete)},
                     {"sum", entry(s.sum)}};
}

}  // namespace capgen::scoring
