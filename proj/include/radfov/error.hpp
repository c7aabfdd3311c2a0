/* Copyright 2026 The radfov Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>

namespace radfov {

// Base of everything the library throws. `code()` is a stable machine-readable
// tag used by the CLI when it reports errors as JSON.
class Error : public std::runtime_error
{
public:
  Error(std::string code, std::string const &what)
    : std::runtime_error(what)
    , code_(std::move(code))
  {
  }

  [[nodiscard]] std::string const &code() const noexcept { return code_; }

private:
  std::string code_;
};

// Malformed shape description or argument.
struct SpecError : Error
{
  explicit SpecError(std::string const &what)
    : Error("SpecError", what)
  {
  }
};

struct DegenerateShape : Error
{
  explicit DegenerateShape(std::string const &what)
    : Error("DegenerateShape", what)
  {
  }
};

struct FovConstraintViolated : Error
{
  explicit FovConstraintViolated(std::string const &what)
    : Error("FovConstraintViolated", what)
  {
  }
};

struct SpacingTooCoarse : Error
{
  explicit SpacingTooCoarse(std::string const &what)
    : Error("SpacingTooCoarse", what)
  {
  }
};

struct OutOfBand : Error
{
  explicit OutOfBand(std::string const &what)
    : Error("OutOfBand", what)
  {
  }
};

struct RidgeNotFound : Error
{
  explicit RidgeNotFound(std::string const &what)
    : Error("RidgeNotFound", what)
  {
  }
};

} // namespace radfov
