// Copyright 2026 The qvuln Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "qvuln/error.hpp"

#include <utility>

namespace qvuln {

ParseError::ParseError(std::string file, std::size_t line, const std::string& what)
    : Error(file + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
      file_(std::move(file)),
      line_(line) {}

InfeasibleError::InfeasibleError(int origin, int destination, const std::string& what)
    : Error(what), origin_(origin), destination_(destination) {}

GuardError::GuardError(const std::string& count, const std::string& what)
    : Error(what), count_(count) {}

}  // namespace qvuln
