#pragma once

#include <stdexcept>
#include <string>

namespace signmap {

// Base class for all pipeline errors; stages catch this to drop an item
// (observation, merge event) and continue.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyCloud : Error {
  explicit EmptyCloud(const std::string& msg) : Error(msg) {}
};

struct BehindCamera : Error {
  explicit BehindCamera(const std::string& msg) : Error(msg) {}
};

struct InsufficientPoints : Error {
  explicit InsufficientPoints(const std::string& msg) : Error(msg) {}
};

struct NoCorrespondences : Error {
  explicit NoCorrespondences(const std::string& msg) : Error(msg) {}
};

struct UnanchoredOldMap : Error {
  explicit UnanchoredOldMap(const std::string& msg) : Error(msg) {}
};

struct DegenerateCloud : Error {
  explicit DegenerateCloud(const std::string& msg) : Error(msg) {}
};

struct NoConsensus : Error {
  explicit NoConsensus(const std::string& msg) : Error(msg) {}
};

struct GrazingAngle : Error {
  explicit GrazingAngle(const std::string& msg) : Error(msg) {}
};

struct InvalidSpec : Error {
  explicit InvalidSpec(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace signmap
