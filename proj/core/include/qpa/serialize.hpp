#pragma once

// JSON forms of states, channels, hashes and reports.
//
//   matrix          {"re": [[...]], "im": [[...]]}          row-major
//   CQState         {"p": [...], "rhos": [matrix, ...]}
//   WiretapChannel  {"dB": int, "dE": int, "outputs": [matrix, ...]}
//   AffineHash      {"u": int, "v": int, "modulus": int, "a": int, "b": int}
//
// Report serializers take a unit divisor: 1 for nats, log 2 for bits. It
// scales rates, entropies and exponents only.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qpa/cq_state.hpp"
#include "qpa/exponents.hpp"
#include "qpa/hashing.hpp"
#include "qpa/simulator.hpp"
#include "qpa/verifier.hpp"

namespace qpa {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Matrix& m);
/// ValidationError naming `where` on schema problems.
Matrix matrix_from_json(const Json& j, const std::string& where = "matrix");

Json to_json(const CQState& s);
CQState cq_state_from_json(const Json& j);

Json to_json(const WiretapChannel& ch);
WiretapChannel wiretap_from_json(const Json& j);

Json to_json(const AffineHash& h);
AffineHash hash_from_json(const Json& j);

/// Parses JSON text; syntax errors become ValidationError with line and column.
Json parse_json(std::string_view text, const std::string& source = "<input>");
Json load_json_file(const std::filesystem::path& path);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
/// FNV-1a of the canonical dump of the state's JSON form.
std::string content_hash(const Json& state);

Json to_json(const ExponentReport& r, double unit = 1.0);
Json to_json(const PAResult& r);
Json to_json(const SandwichReport& r, double unit = 1.0);
Json to_json(const WiretapD1Result& r);
Json to_json(const CheckReport& r);
Json to_json(const ModerateTable& t, double unit = 1.0);
Json to_json(const ModerateEATable& t, double unit = 1.0);

}  // namespace qpa
