// Copyright 2026 The amcspec Authors
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

#ifndef AMC_ERROR_HPP_
#define AMC_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace amc {

/** @brief Base class for every error raised by the library. */
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}

    /** @brief Short machine-readable category, e.g. "parameter". */
    virtual const char* kind() const noexcept { return "error"; }
};

#define AMC_DEFINE_ERROR(Name, Kind)                                         \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(what) {}              \
        const char* kind() const noexcept override { return Kind; }          \
    };

AMC_DEFINE_ERROR(ParameterError, "parameter")
AMC_DEFINE_ERROR(UnsupportedSchemeError, "unsupported-scheme")
AMC_DEFINE_ERROR(LengthError, "length")
AMC_DEFINE_ERROR(EmptyInputError, "empty-input")
AMC_DEFINE_ERROR(TooShortError, "too-short")
AMC_DEFINE_ERROR(OverlapError, "overlap")
AMC_DEFINE_ERROR(FormatError, "format")
AMC_DEFINE_ERROR(IntegrityError, "integrity")
AMC_DEFINE_ERROR(StratificationError, "stratification")
AMC_DEFINE_ERROR(ShapeError, "shape")
AMC_DEFINE_ERROR(TrainingError, "training")
AMC_DEFINE_ERROR(IoError, "io")

#undef AMC_DEFINE_ERROR

} // namespace amc

#endif /* AMC_ERROR_HPP_ */
