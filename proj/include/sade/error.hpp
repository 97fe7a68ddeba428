// Copyright 2026 The sade-bench Authors.
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

#ifndef SADE_ERROR_HPP_
#define SADE_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sade {

// Every failure raised by the library derives from Error. kind() is a stable
// machine-readable name used by the CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Input data or configuration is invalid (CLI exit status 1).
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : DataError("ParseError",
                  "line " + std::to_string(line) + ": " + reason),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateId : public DataError {
 public:
  explicit DuplicateId(const std::string& id)
      : DataError("DuplicateId", "duplicate id '" + id + "'") {}
};

class MissingPositive : public DataError {
 public:
  explicit MissingPositive(const std::string& item_id)
      : DataError("MissingPositive",
                  "item '" + item_id + "' has no positive reference") {}
};

class FileNotFound : public DataError {
 public:
  explicit FileNotFound(const std::string& path)
      : DataError("FileNotFound", "cannot open '" + path + "'"), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class ConfigError : public DataError {
 public:
  explicit ConfigError(const std::string& message)
      : DataError("ConfigError", message) {}
};

// Raised when a loaded benchmark violates an invariant that load enforces.
class InvalidBenchmark : public DataError {
 public:
  explicit InvalidBenchmark(const std::string& message)
      : DataError("InvalidBenchmark", message) {}
};

class UntaggableReference : public DataError {
 public:
  explicit UntaggableReference(const std::string& ref_id)
      : DataError("UntaggableReference",
                  "reference '" + ref_id + "' has no tokens") {}
};

class EmptyContent : public DataError {
 public:
  explicit EmptyContent(const std::string& ref_id)
      : DataError("EmptyContent",
                  "reference '" + ref_id + "' has no noun or adjective") {}
};

class InsufficientPool : public DataError {
 public:
  InsufficientPool(std::size_t wanted, std::size_t eligible)
      : DataError("InsufficientPool",
                  "need " + std::to_string(wanted) + " pool references, " +
                      std::to_string(eligible) + " eligible") {}
};

class EmptyInput : public DataError {
 public:
  explicit EmptyInput(const std::string& what)
      : DataError("EmptyInput", what) {}
};

class TooFewSamples : public DataError {
 public:
  explicit TooFewSamples(std::size_t n)
      : DataError("TooFewSamples",
                  "significance test needs >= 2 samples, got " +
                      std::to_string(n)) {}
};

class ZeroDimension : public DataError {
 public:
  ZeroDimension()
      : DataError("ZeroDimension", "image width and height must be >= 1") {}
};

class MissingCell : public DataError {
 public:
  explicit MissingCell(const std::string& pair_id)
      : DataError("MissingCell",
                  "pair '" + pair_id + "' lacks one of its four scores") {}
};

class EmptyGroup : public DataError {
 public:
  explicit EmptyGroup(const std::string& what)
      : DataError("EmptyGroup", what) {}
};

class IncompleteResults : public DataError {
 public:
  explicit IncompleteResults(const std::string& what)
      : DataError("IncompleteResults", what) {}
};

// The retained set failed the configured significance gate.
class BiasGateFailed : public DataError {
 public:
  explicit BiasGateFailed(const std::string& what)
      : DataError("BiasGateFailed", what) {}
};

// Failures talking to a log-prob provider (CLI exit status 2).
class ProviderError : public Error {
 public:
  using Error::Error;
};

class ProviderUnreachable : public ProviderError {
 public:
  explicit ProviderUnreachable(const std::string& what)
      : ProviderError("ProviderUnreachable", what) {}
};

class MalformedResponse : public ProviderError {
 public:
  explicit MalformedResponse(const std::string& what)
      : ProviderError("MalformedResponse", what) {}
};

class ProviderRejected : public ProviderError {
 public:
  explicit ProviderRejected(const std::string& reason)
      : ProviderError("ProviderRejected", reason) {}
};

// A candidate of an item could not be scored; the whole item is abandoned.
class PartialScore : public ProviderError {
 public:
  PartialScore(const std::string& item_id, const std::string& cause)
      : ProviderError("PartialScore",
                      "item '" + item_id + "' partially scored: " + cause) {}
};

}  // namespace sade

#endif  // SADE_ERROR_HPP_
