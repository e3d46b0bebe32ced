/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

#ifndef JTR_ERRORS_HPP
#define JTR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jtr {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A potential operation was applied to incompatible domains (unknown
// variable, keep-set not a subset, mismatched domains, negative input...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Two potentials disagree on the cardinality of a shared variable.
class DomainConflictError : public DomainError {
 public:
  using DomainError::DomainError;
};

// x/0 with x > 0; signals an inconsistent tree.
class DivideByZeroError : public Error {
 public:
  using Error::Error;
};

// All-zero table where a distribution was required.
class DegeneratePotentialError : public Error {
 public:
  using Error::Error;
};

// KL divergence with phi > 0 where psi = 0.
class InfiniteDivergenceError : public Error {
 public:
  using Error::Error;
};

// Invalid graph construction (self loop, directed cycle, overlap of the
// directed and undirected link sets) or a clique set with no junction tree.
class StructureError : public Error {
 public:
  using Error::Error;
};

// A precondition such as "input must be triangulated" failed.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A component potential fits in no clique of the junction tree.
class CoverError : public Error {
 public:
  using Error::Error;
};

// Propagation met an all-zero clique.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// Query over variables that share no clique.
class UnsupportedQueryError : public Error {
 public:
  using Error::Error;
};

// A removal candidate no longer matches the tree it was scored against.
class StalenessError : public Error {
 public:
  using Error::Error;
};

// Theorem-4 repair ran out of replaceable links without reaching a chain graph.
class CombinationError : public Error {
 public:
  using Error::Error;
};

// The recovered model does not reproduce the joint belief.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

// A chain component is too large to materialize p(K | pa(K)).
class ComponentTooLargeError : public Error {
 public:
  using Error::Error;
};

// A single table would exceed the dense-cell cap.
class TableTooLargeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Network file rejected; carries a 1-based line number (0 = whole file).
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace jtr

#endif  // JTR_ERRORS_HPP
