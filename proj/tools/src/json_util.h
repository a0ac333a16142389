// Copyright 2026 The Formation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Strict readers over nlohmann::json: every access is typed, every object
// must be fully consumed.

#ifndef FORMATION_TOOLS_JSON_UTIL_H_
#define FORMATION_TOOLS_JSON_UTIL_H_

#include <set>
#include <string>
#include <vector>

#include "formation/errors.h"
#include "json.hpp"

namespace formation::json_util {

using nlohmann::json;

[[noreturn]] inline void ParseFail(const std::string& path,
                                   const std::string& message) {
  Fail(ErrorCode::kParse, path + ": " + message);
}

inline double Number(const json& j, const std::string& path) {
  if (!j.is_number()) ParseFail(path, "expected a number");
  return j.get<double>();
}

inline long long Integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) ParseFail(path, "expected an integer");
  return j.get<long long>();
}

inline bool Boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) ParseFail(path, "expected true or false");
  return j.get<bool>();
}

inline std::string String(const json& j, const std::string& path) {
  if (!j.is_string()) ParseFail(path, "expected a string");
  return j.get<std::string>();
}

inline const json& Array(const json& j, const std::string& path) {
  if (!j.is_array()) ParseFail(path, "expected an array");
  return j;
}

inline std::vector<double> Numbers(const json& j, const std::string& path,
                                   size_t expected = 0) {
  Array(j, path);
  if (expected != 0 && j.size() != expected) {
    ParseFail(path, "expected " + std::to_string(expected) + " numbers");
  }
  std::vector<double> out;
  for (size_t k = 0; k < j.size(); ++k) {
    out.push_back(Number(j[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

// Object reader that remembers which keys were read.
class Object {
 public:
  Object(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) ParseFail(path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  std::string Path(const std::string& key) const { return path_ + "." + key; }

  bool Has(const std::string& key) const { return j_.contains(key); }

  const json& Required(const std::string& key) {
    if (!j_.contains(key)) ParseFail(path_, "missing key \"" + key + "\"");
    used_.insert(key);
    return j_.at(key);
  }

  const json* Optional(const std::string& key) {
    if (!j_.contains(key)) return nullptr;
    used_.insert(key);
    return &j_.at(key);
  }

  // Rejects keys that were never read.
  void Finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) {
        ParseFail(path_, "unknown key \"" + it.key() + "\"");
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

}  // namespace formation::json_util

#endif  // FORMATION_TOOLS_JSON_UTIL_H_
