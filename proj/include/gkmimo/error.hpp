// SPDX-License-Identifier: Apache-2.0
//
// gkmimo - capacity bounds and link-level simulation for massive MIMO uplinks
// Copyright (C) 2026 The gkmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace gkmimo
{
    // Argument outside the mathematical domain of a function (x <= 0 for log-gamma, poles, ...).
    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // Inconsistent system or sweep configuration (M <= K, tau < K, R0 >= R, ...).
    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // A numerical backend could not produce a trustworthy value.
    // The best value reached so far is kept for diagnostics.
    class EvaluationError : public std::runtime_error
    {
    public:
        EvaluationError(const std::string &what, double partial_value)
            : std::runtime_error(what), partial_value_(partial_value) {}

        double partial_value() const noexcept { return partial_value_; }

    private:
        double partial_value_;
    };

    // Gram matrix too ill-conditioned for zero-forcing.
    class SingularChannelError : public std::runtime_error
    {
    public:
        SingularChannelError(const std::string &what, double condition_number)
            : std::runtime_error(what), condition_number_(condition_number) {}

        double condition_number() const noexcept { return condition_number_; }

    private:
        double condition_number_;
    };

    // Malformed configuration document; line is 1-based, 0 when not tied to a line.
    class ParseError : public std::runtime_error
    {
    public:
        ParseError(std::size_t line, const std::string &message)
            : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
              line_(line) {}

        std::size_t line() const noexcept { return line_; }

    private:
        std::size_t line_;
    };
}
