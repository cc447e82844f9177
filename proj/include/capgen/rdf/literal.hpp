#pragma once

#include <string>

#include "capgen/rdf/term.hpp"

namespace capgen::rdf {

// True when the lexical form is valid for the literal's datatype. Datatypes
// outside the checked XSD subset are accepted as-is.
bool literal_well_formed(const Term& literal);

// Datatype-aware canonical form: "01"^^xsd:integer and "1"^^xsd:integer map
// to the same string, as do "1"^^xsd:boolean and "true"^^xsd:boolean.
// Numeric types share one value space, so "1.0"^^xsd:decimal equals
// "1"^^xsd:integer.
std::string canonical_literal(const Term& literal);

// Whether a literal of datatype `actual` is an acceptable value for a
// declared datatype `declared`. rdfs:Literal accepts everything; xsd:decimal
// accepts the integer family.
bool datatype_compatible(const std::string& declared, const std::string& actual);

bool is_integer_datatype(const std::string& datatype);

}  // namespace capgen::rdf
