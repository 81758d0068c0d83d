// Copyright 2026 The mbst Authors
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

#ifndef MBST_ERRORS_H_
#define MBST_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbst {

// Root of every error the library throws. Callers that only need a
// diagnostic can catch this and print what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario DSL could not be tokenized or does not follow the grammar.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::vector<std::string> expected,
              std::string found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
  std::string found_;
};

// Scenario DSL parsed but names something undeclared, reuses an id, or
// carries a malformed guard.
class SemanticError : public Error {
 public:
  SemanticError(int line, std::string rule, std::string subject,
                const std::string& message);

  int line() const { return line_; }
  const std::string& rule() const { return rule_; }
  const std::string& subject() const { return subject_; }

 private:
  int line_;
  std::string rule_;
  std::string subject_;
};

class LocusNotFound : public Error {
 public:
  explicit LocusNotFound(const std::string& locus)
      : Error("mutation locus not found: " + locus), locus_(locus) {}
  const std::string& locus() const { return locus_; }

 private:
  std::string locus_;
};

class IncompatibleDetail : public Error {
 public:
  using Error::Error;
};

class BudgetZeroAfterDedup : public Error {
 public:
  using Error::Error;
};

class UnsatisfiableConstraint : public Error {
 public:
  using Error::Error;
};

// Risk-model document errors.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class DanglingReference : public Error {
 public:
  using Error::Error;
};

class CycleError : public Error {
 public:
  using Error::Error;
};

class MissingAnnotation : public Error {
 public:
  explicit MissingAnnotation(const std::string& element)
      : Error("missing likelihood annotation on " + element),
        element_(element) {}
  const std::string& element() const { return element_; }

 private:
  std::string element_;
};

class MissingConsequence : public Error {
 public:
  using Error::Error;
};

class UnknownLink : public Error {
 public:
  explicit UnknownLink(const std::string& id)
      : Error("report links unknown risk element: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class UnknownRiskId : public Error {
 public:
  explicit UnknownRiskId(const std::string& id)
      : Error("risk-link annotation names unknown risk node: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

// Transport-level failure talking to a system under test.
class AdapterFailure : public Error {
 public:
  using Error::Error;
};

// Bad command-line or pipeline configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mbst

#endif  // MBST_ERRORS_H_
