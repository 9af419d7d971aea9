/*
 * Copyright 2026 The gus Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace gus {

//! Root of every error raised by the library. Each subclass names the
//! module-level failure class so callers (the CLI in particular) can map
//! it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Lineage schemas that do not line up (length mismatch, not a subset, ...).
class SchemaError : public Error {
 public:
  using Error::Error;
};

//! Two inputs share a base relation; GUS join commutation needs disjoint lineage.
class SelfJoinError : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

//! Type or reference problems in predicates, expressions and columns.
class TypeError : public Error {
 public:
  using Error::Error;
};

//! Invalid sampler configuration (p outside [0,1], n > N, ...).
class SampleSizeError : public Error {
 public:
  using Error::Error;
};

//! Plan structure the rewriter or executor cannot handle.
class PlanError : public Error {
 public:
  using Error::Error;
};

//! An estimate needs a quantity the sampling design cannot identify
//! (a zero pairwise probability, or a = 0).
class NotIdentifiableError : public Error {
 public:
  using Error::Error;
};

//! Exhaustive enumeration would exceed its configuration budget.
class EnumerationInfeasibleError : public Error {
 public:
  using Error::Error;
};

//! CSV / file ingestion failures.
class IngestError : public Error {
 public:
  using Error::Error;
};

}  // namespace gus
