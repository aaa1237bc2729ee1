#pragma once

#include "pshc/msy_identities.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pshc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

struct ModelSpec {
  std::string family;  // a supported family name, or an out-of-scope label
  std::vector<int> params;
};

struct RunConfig {
  std::string command;
  std::vector<ModelSpec> models;  // empty selects the defaults of each command
  std::vector<std::uint64_t> seeds{1};
  int samples = 1000;
  int trials = 100;
  Scalar tol = kTol;
  std::optional<std::string> output_path;
  bool negative_control = false;

  void validate() const;
};

// "2,1" -> {2, 1}
std::vector<int> parse_params(const std::string& text);

std::vector<ModelSpec> default_table_rows();
std::vector<ModelSpec> default_verify_models();

Json cmd_table(const RunConfig& cfg);
Json cmd_model(const RunConfig& cfg);

struct VerifyOutcome {
  Json doc;
  bool pass = false;
};
VerifyOutcome cmd_verify(const RunConfig& cfg);

Json suite_to_json(const SuiteReport& r);
// Pretty-printed, newline-terminated; numbers round-trip exactly.
std::string serialize(const Json& doc);

}  // namespace pshc
