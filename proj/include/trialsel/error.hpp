// Copyright 2026 The trialsel Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trialsel {

// Precondition violations are reported as std::invalid_argument. The types
// below cover the domain failures callers are expected to handle.

class DegenerateCorrelation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingQos : public std::runtime_error {
 public:
  MissingQos(const std::string& qos, const std::string& where)
      : std::runtime_error("QoS '" + qos + "' missing from " + where), qos_(qos) {}
  const std::string& qos() const noexcept { return qos_; }

 private:
  std::string qos_;
};

// A fingerprint has no value (and no interpolation bracket) at a tick.
class OutOfCoverage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingObservation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relative weight with a zero denominator.
class ZeroReference : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : std::runtime_error(what), line_(0) {}

  // 1-based line number; 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Invalid experiment configuration; path() is a JSON pointer to the field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace trialsel
