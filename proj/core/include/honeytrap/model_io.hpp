#pragma once

// Versioned, line-oriented model files:
//
//   honeytrap-model v1
//   schema_hash <16 hex digits>
//   class_index <i>
//   params <c_size> <i_max> <r_size> <seed> <min_leaf>
//   trials <n>
//   error_history <k> <e1> ... <ek>
//   schema <L>            followed by L lines of ARFF header
//   members <m>           followed by m serialized trees

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "honeytrap/arff.hpp"
#include "honeytrap/decorate.hpp"

namespace honeytrap::decorate {

/// FNV-1a over the canonical attribute declarations and class index.
[[nodiscard]] std::uint64_t schema_hash(std::span<const arff::Attribute> attributes, std::size_t class_index);
[[nodiscard]] std::uint64_t schema_hash(const arff::Dataset& dataset);

void save_model(std::ostream& out, const Ensemble& ensemble);
[[nodiscard]] std::string model_to_string(const Ensemble& ensemble);

/// ParseError on malformed files or a hash that does not match the embedded schema.
[[nodiscard]] Ensemble load_model(std::istream& in);

/// TypeError when the dataset's schema hash differs from the model's.
void check_compatible(const Ensemble& ensemble, const arff::Dataset& dataset);

}  // namespace honeytrap::decorate
