// Copyright 2026 The Fragscope Authors
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

#ifndef FRAGSCOPE_ERRORS_HPP_
#define FRAGSCOPE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fragscope {

// Base of every domain error; the CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};
class InvariantError : public Error {
 public:
  using Error::Error;
};
class InvalidConfig : public Error {
 public:
  using Error::Error;
};
class NodeNotInFragment : public Error {
 public:
  using Error::Error;
};
class RecursionDepthExceeded : public Error {
 public:
  using Error::Error;
};
class StaleActionable : public Error {
 public:
  using Error::Error;
};
class BacktrackFailed : public Error {
 public:
  using Error::Error;
};
class EmptyModel : public Error {
 public:
  using Error::Error;
};
class EmptyGroundTruth : public Error {
 public:
  using Error::Error;
};
class LengthMismatch : public Error {
 public:
  using Error::Error;
};
class NoEligibleNode : public Error {
 public:
  using Error::Error;
};
class MisalignedTrace : public Error {
 public:
  using Error::Error;
};
class UnregisteredFragment : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fragscope

#endif  // FRAGSCOPE_ERRORS_HPP_
