// Copyright 2026 The spinsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINSQ_ERRORS_HPP
#define SPINSQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spinsq {

/// Raised when an estimator receives too few samples, zero variance or a
/// singular design.
class DegenerateInput : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Configuration text that cannot be turned into an ExperimentConfig.
/// `line` is 0 when the problem is not tied to a specific line.
class ConfigError : public std::runtime_error {
   public:
    ConfigError(std::string key, int line, const std::string &what)
        : std::runtime_error(format(key, line, what)), key_(std::move(key)), line_(line) {}

    const std::string &key() const { return key_; }
    int line() const { return line_; }

   private:
    static std::string format(const std::string &key, int line, const std::string &what) {
        std::string out = "config";
        if (line > 0) {
            out += " line " + std::to_string(line);
        }
        if (!key.empty()) {
            out += " key '" + key + "'";
        }
        return out + ": " + what;
    }

    std::string key_;
    int line_;
};

}  // namespace spinsq

#endif
