// Copyright 2026 The tplot Authors
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

#include <stdexcept>
#include <string>

namespace tplot {

// All library failures derive from Error; the module tag names the
// subsystem that raised it ("net", "tset", "stats", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Inconsistent shapes or references (dimension mismatch, unknown ids).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A request the current mode cannot serve (e.g. worst case on a
// heterogeneous network, enumeration above the size limit).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Invalid numeric argument or infeasible problem instance.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace tplot
