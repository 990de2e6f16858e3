// Copyright 2026 The opfdist Authors
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

#ifndef OPFDIST_ERRORS_HPP
#define OPFDIST_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace opfdist {

/// Every failure raised by the library carries one of these kinds so that
/// callers (the CLI in particular) can map it onto an exit status.
enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    DomainViolation,
    SingleClass,
    TooFewSamplesPerClass,
    LengthMismatch,
    Empty,
    TooFewPairs,
    TooFewClassifiers,
    MissingCells,
    ParseError,
    RaggedRows,
    EmptyFile,
    NonNumericFeature,
    NonAscendingIndices,
    IoError,
    VersionMismatch,
    CorruptArchive,
    ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace opfdist

#endif
