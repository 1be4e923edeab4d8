// Copyright (c) 2026 The mmspk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMSPK_UTIL_JSON_FIELDS_H_
#define MMSPK_UTIL_JSON_FIELDS_H_

#include <set>
#include <string>

#include "json.hpp"
#include "mmspk/numerics/errors.h"

namespace mmspk {

// Reads optional fields out of one JSON object and rejects keys nobody
// asked for. Section names are carried into diagnostics as "section.key".
class JsonFields {
 public:
  JsonFields(const nlohmann::json &object, std::string section)
      : object_(object), section_(std::move(section)) {
    if (!object_.is_object())
      throw ConfigError(Qualified("") + " must be an object");
  }

  template <typename T>
  void Get(const std::string &key, T *out) {
    seen_.insert(key);
    auto it = object_.find(key);
    if (it == object_.end()) return;
    try {
      *out = it->template get<T>();
    } catch (const nlohmann::json::exception &) {
      throw ConfigError("config key '" + Qualified(key) +
                        "' has the wrong type");
    }
  }

  const nlohmann::json *Child(const std::string &key) {
    seen_.insert(key);
    auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  // Throws ConfigError naming the first unknown key.
  void Finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError("unknown config key '" + Qualified(it.key()) + "'");
  }

 private:
  std::string Qualified(const std::string &key) const {
    if (section_.empty()) return key.empty() ? "<root>" : key;
    return key.empty() ? section_ : section_ + "." + key;
  }

  const nlohmann::json &object_;
  std::string section_;
  std::set<std::string> seen_;
};

}  // namespace mmspk

#endif  // MMSPK_UTIL_JSON_FIELDS_H_
