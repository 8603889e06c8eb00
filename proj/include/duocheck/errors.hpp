/*
 * Copyright 2026 The duocheck Authors.
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace duocheck {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class UnknownTxn : public Error {
public:
    using Error::Error;
};

class NoSuchRead : public Error {
public:
    using Error::Error;
};

class MalformedWitness : public Error {
public:
    using Error::Error;
};

class InvalidWitness : public Error {
public:
    using Error::Error;
};

class HypothesisViolated : public Error {
public:
    using Error::Error;
};

/// No du-opaque serialization with the requested live-set order exists.
class LiveSetOrderUnattainable : public Error {
public:
    using Error::Error;
};

class NotSequential : public Error {
public:
    using Error::Error;
};

class NotTSequential : public Error {
public:
    using Error::Error;
};

class TooLarge : public Error {
public:
    using Error::Error;
};

class BoundsTooLarge : public Error {
public:
    using Error::Error;
};

class UnknownName : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(std::uint64_t nodes)
        : Error("node budget exceeded after " + std::to_string(nodes) + " nodes"), nodes_(nodes) {}

    std::uint64_t nodes() const noexcept { return nodes_; }

private:
    std::uint64_t nodes_;
};

}  // namespace duocheck
