#include "capgen/rdf/literal.hpp"

#include <regex>
#include <set>

#include "capgen/rdf/vocab.hpp"

namespace capgen::rdf {

namespace vocab = capgen::vocab;

namespace {

const std::regex kInteger("[+-]?[0-9]+");
const std::regex kDecimal("[+-]?([0-9]+(\\.[0-9]*)?|\\.[0-9]+)");
const std::regex kDouble("[+-]?(([0-9]+(\\.[0-9]*)?|\\.[0-9]+)([eE][+-]?[0-9]+)?|INF)|NaN");
const std::regex kDateTime("-?[0-9]{4,}-[0-9]{2}-[0-9]{2}T[0-9]{2}:[0-9]{2}:[0-9]{2}(\\.[0-9]+)?(Z|[+-][0-9]{2}:[0-9]{2})?");
const std::regex kDate("-?[0-9]{4,}-[0-9]{2}-[0-9]{2}(Z|[+-][0-9]{2}:[0-9]{2})?");

bool is_decimal_family(const std::string& dt) { return dt == vocab::xsd("decimal") || is_integer_datatype(dt); }
bool is_float_family(const std::string& dt) { return dt == vocab::xsd("double") || dt == vocab::xsd("float"); }

// Strips sign, leading zeros and trailing fractional zeros.
std::string canonical_decimal(std::string s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  std::string int_part = s, frac_part;
  if (auto dot = s.find('.'); dot != std::string::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  int_part.erase(0, std::min(int_part.find_first_not_of('0'), int_part.size()));
  while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();
  if (int_part.empty()) int_part = "0";
  std::string out = int_part;
  if (!frac_part.empty()) out += "." + frac_part;
  if (negative && out != "0") out = "-" + out;
  return out;
}

}  // namespace

bool is_integer_datatype(const std::string& dt) {
  static const std::set<std::string> kFamily = {
      vocab::xsd("integer"),          vocab::xsd("int"),           vocab::xsd("long"),
      vocab::xsd("short"),            vocab::xsd("byte"),          vocab::xsd("nonNegativeInteger"),
      vocab::xsd("positiveInteger"),  vocab::xsd("negativeInteger"), vocab::xsd("nonPositiveInteger"),
      vocab::xsd("unsignedInt"),      vocab::xsd("unsignedLong"),  vocab::xsd("unsignedShort"),
      vocab::xsd("unsignedByte")};
  return kFamily.count(dt) > 0;
}

bool literal_well_formed(const Term& t) {
  if (!t.is_literal()) return false;
  const std::string& dt = t.datatype;
  if (is_integer_datatype(dt)) {
    if (!std::regex_match(t.value, kInteger)) return false;
    bool negative = t.value[0] == '-' && canonical_decimal(t.value) != "0";
    bool zero = canonical_decimal(t.value) == "0";
    if (dt == vocab::xsd("nonNegativeInteger") || dt.find("unsigned") != std::string::npos) return !negative;
    if (dt == vocab::xsd("positiveInteger")) return !negative && !zero;
    if (dt == vocab::xsd("negativeInteger")) return negative;
    if (dt == vocab::xsd("nonPositiveInteger")) return negative || zero;
    return true;
  }
  if (dt == vocab::xsd("decimal")) return std::regex_match(t.value, kDecimal);
  if (is_float_family(dt)) return std::regex_match(t.value, kDouble);
  if (dt == vocab::xsd("boolean")) return t.value == "true" || t.value == "false" || t.value == "1" || t.value == "0";
  if (dt == vocab::xsd("dateTime")) return std::regex_match(t.value, kDateTime);
  if (dt == vocab::xsd("date")) return std::regex_match(t.value, kDate);
  return true;
}

std::string canonical_literal(const Term& t) {
  const std::string& dt = t.datatype;
  if (literal_well_formed(t)) {
    if (is_decimal_family(dt)) return "num:" + canonical_decimal(t.value);
    if (is_float_family(dt) && t.value.find_first_of("eE") == std::string::npos && t.value != "INF" &&
        t.value.find_first_of("N") == std::string::npos) {
      return "num:" + canonical_decimal(t.value);
    }
    if (is_float_family(dt)) {
      try {
        return "dbl:" + std::to_string(std::stod(t.value));
      } catch (...) {
      }
    }
    if (dt == vocab::xsd("boolean")) return std::string("bool:") + ((t.value == "true" || t.value == "1") ? "1" : "0");
  }
  if (!t.language.empty()) return "lang:" + t.language + ":" + t.value;
  return dt + "|" + t.value;
}

bool datatype_compatible(const std::string& declared, const std::string& actual) {
  if (declared == vocab::rdfs("Literal") || declared == actual) return true;
  if (declared == vocab::xsd("decimal")) return is_decimal_family(actual);
  if (declared == vocab::xsd("integer")) return is_integer_datatype(actual);
  if (declared == vocab::xsd("string")) return actual == vocab::xsd("string");
  return false;
}

}  // namespace capgen::rdf
