// Copyright 2026 The AvatarPriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AVATARPRIV_ERRORS_H_
#define AVATARPRIV_ERRORS_H_

#include <stdexcept>
#include <string>

namespace avatarpriv {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ZeroVectorError : public Error {
 public:
  explicit ZeroVectorError(const std::string& what) : Error(what) {}
};

class DimMismatchError : public Error {
 public:
  explicit DimMismatchError(const std::string& what) : Error(what) {}
};

// Degenerate inputs to orthonormal_pair: x and z are (numerically) collinear.
class DegeneratePlaneError : public Error {
 public:
  explicit DegeneratePlaneError(const std::string& what) : Error(what) {}
};

// Parameter outside its documented domain (dim < 2, kappa < 0, theta outside
// [0, pi], k < 1, ...).
class InvalidParameterError : public Error {
 public:
  explicit InvalidParameterError(const std::string& what) : Error(what) {}
};

class InvalidSpecError : public Error {
 public:
  explicit InvalidSpecError(const std::string& what) : Error(what) {}
};

class InsufficientReferencesError : public Error {
 public:
  explicit InsufficientReferencesError(const std::string& what) : Error(what) {}
};

class DegenerateCovarianceError : public Error {
 public:
  explicit DegenerateCovarianceError(const std::string& what) : Error(what) {}
};

class InsufficientSamplesError : public Error {
 public:
  explicit InsufficientSamplesError(const std::string& what) : Error(what) {}
};

class EmptyGalleryError : public Error {
 public:
  explicit EmptyGalleryError(const std::string& what) : Error(what) {}
};

class EmptyInputError : public Error {
 public:
  explicit EmptyInputError(const std::string& what) : Error(what) {}
};

class NoAttributesError : public Error {
 public:
  explicit NoAttributesError(const std::string& what) : Error(what) {}
};

// File / wire format problems (bad magic, truncated record, malformed JSON).
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// Rejection loop exceeded its iteration cap; indicates an envelope bug, not a
// user error.
class SamplerStallError : public Error {
 public:
  explicit SamplerStallError(const std::string& what) : Error(what) {}
};

}  // namespace avatarpriv

#endif  // AVATARPRIV_ERRORS_H_
