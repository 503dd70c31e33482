//
// Copyright 2026 dpoutlier developers
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
//

#ifndef DPOUTLIER_ERRORS_HPP
#define DPOUTLIER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dpo {

// Error categories mirror the status codes of the C API one-to-one.
enum class ErrorCode {
  Argument = 1,     // invalid argument or configuration
  Dimension = 2,    // index out of range / unsupported dimension
  Parse = 3,        // malformed CSV or table file
  Consistency = 4,  // mismatched parameters across a privacy pipeline
  Resource = 5,     // a configured search/resource cap was exceeded
  Verify = 6,       // a verification check failed
  Io = 7,           // file system failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what)
      : Error(ErrorCode::Argument, what) {}
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& what)
      : Error(ErrorCode::Dimension, what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what)
      : Error(ErrorCode::Parse, what) {}
};

struct ConsistencyError : Error {
  explicit ConsistencyError(const std::string& what)
      : Error(ErrorCode::Consistency, what) {}
};

struct ResourceLimitError : Error {
  explicit ResourceLimitError(const std::string& what)
      : Error(ErrorCode::Resource, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

}  // namespace dpo

#endif  // DPOUTLIER_ERRORS_HPP
