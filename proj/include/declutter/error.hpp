// Copyright 2026 The Declutter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DECLUTTER_ERROR_HPP_
#define DECLUTTER_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace declutter {

// All library failures (malformed input, invariant violations, I/O) surface
// as this exception; the message names the offending record, line or path.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace declutter

#endif  // DECLUTTER_ERROR_HPP_
