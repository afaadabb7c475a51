#pragma once
#include <json.hpp>
#include <string>
#include <vector>

namespace uavrelay::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitReplayMismatch = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitNumeric = 4;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

struct Outcome {
  int exit_code = kExitOk;
  nlohmann::json record;
  std::string csv;
};

// "x12.5" is linear, "11db" is decibels
double parse_gamma(const std::string& text);

// args exclude the program name, e.g. {"dualhop-opt", "--scenario", "s.yaml"}
Outcome run(const std::vector<std::string>& args);

// writes <out>.json / <out>.csv when --out is given, else the record to stdout
int main(int argc, char** argv);

}  // namespace uavrelay::cli
