#pragma once

// JSON forms of the report types. Rationals travel as "p/q" strings, and
// every to_json has a from_json that restores the same value.

#include "masep/gillespie.hpp"
#include "masep/verifier.hpp"

#include <json.hpp>

#include <map>
#include <string>

namespace masep {

using Json = nlohmann::json;

inline constexpr std::string_view kToolVersion = "0.1.0";

void to_json(Json& j, const Rat& r);
void from_json(const Json& j, Rat& r);

void to_json(Json& j, const BoundarySpec& s);
void from_json(const Json& j, BoundarySpec& s);

void to_json(Json& j, const Transition& t);
void from_json(const Json& j, Transition& t);

void to_json(Json& j, const Witness& w);
void from_json(const Json& j, Witness& w);

void to_json(Json& j, const CheckReport& r);
void from_json(const Json& j, CheckReport& r);

void to_json(Json& j, const StationaryResult& r);
void from_json(const Json& j, StationaryResult& r);

void to_json(Json& j, const CurrentEstimate& e);
void from_json(const Json& j, CurrentEstimate& e);

void to_json(Json& j, const TransitionCount& t);
void from_json(const Json& j, TransitionCount& t);

void to_json(Json& j, const SimReport& r);
void from_json(const Json& j, SimReport& r);

void to_json(Json& j, const Divergence& d);
void from_json(const Json& j, Divergence& d);

/// Row-major array of arrays of "p/q" strings.
Json matrix_to_json(const QMat& m);
QMat matrix_from_json(const Json& j);

/// {tool_version, command, config, reports}.
Json make_envelope(const std::string& command, const std::map<std::string, std::string>& config,
                   Json reports);

}  // namespace masep
