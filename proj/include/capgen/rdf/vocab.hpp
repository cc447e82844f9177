#pragma once

#include <string>
#include <string_view>

namespace capgen::vocab {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kSh = "http://www.w3.org/ns/shacl#";
inline constexpr std::string_view kCask = "http://www.w3id.org/hsu-aut/cask#";
inline constexpr std::string_view kVdi3682 = "http://www.w3id.org/hsu-aut/VDI3682#";
inline constexpr std::string_view kOm = "http://openmath.org/vocab/math#";

inline std::string rdf(std::string_view local) { return std::string(kRdf) + std::string(local); }
inline std::string rdfs(std::string_view local) { return std::string(kRdfs) + std::string(local); }
inline std::string owl(std::string_view local) { return std::string(kOwl) + std::string(local); }
inline std::string xsd(std::string_view local) { return std::string(kXsd) + std::string(local); }
inline std::string sh(std::string_view local) { return std::string(kSh) + std::string(local); }
inline std::string cask(std::string_view local) { return std::string(kCask) + std::string(local); }
inline std::string vdi3682(std::string_view local) { return std::string(kVdi3682) + std::string(local); }
inline std::string om(std::string_view local) { return std::string(kOm) + std::string(local); }

inline const std::string kType = rdf("type");
inline const std::string kFirst = rdf("first");
inline const std::string kRest = rdf("rest");
inline const std::string kNil = rdf("nil");
inline const std::string kLangString = rdf("langString");
inline const std::string kXsdString = xsd("string");

}  // namespace capgen::vocab
