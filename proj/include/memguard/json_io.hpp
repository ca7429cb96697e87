#pragma once

// nlohmann/json bindings for the persisted domain types. Objects are parsed
// strictly: unknown keys are rejected.

#include "json.hpp"
#include "memguard/detector.hpp"
#include "memguard/simulator.hpp"
#include "memguard/telemetry.hpp"

namespace memguard {

using json = nlohmann::json;

/// Throws Error(Parse) naming the first key of `object` not in `allowed`.
void reject_unknown_keys(const json& object, std::initializer_list<std::string_view> allowed,
                         std::string_view context);

void to_json(json& j, const Band& band);
void from_json(const json& j, Band& band);
void to_json(json& j, const DeviceProfile& profile);
void from_json(const json& j, DeviceProfile& profile);

void to_json(json& j, const DetectorConfig& config);
void from_json(const json& j, DetectorConfig& config);

void to_json(json& j, const DetectorState& state);
void from_json(const json& j, DetectorState& state);

void to_json(json& j, const DetectionEvent& event);
void from_json(const json& j, DetectionEvent& event);

void to_json(json& j, const Burst& burst);
void from_json(const json& j, Burst& burst);
void to_json(json& j, const AttackScenario& scenario);
void from_json(const json& j, AttackScenario& scenario);

/// A profile given either by built-in name or as a full object.
DeviceProfile profile_from_json(const json& j);

/// Reads a JSON document from disk; Parse errors name the file.
json read_json_file(const std::string& path);

}  // namespace memguard
