/*
   Copyright 2026 The sdde-lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdde {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GridAlignmentError : public Error { public: using Error::Error; };
class RangeError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };
class IntegrationError : public Error { public: using Error::Error; };
class DependencyError : public Error { public: using Error::Error; };

class LinearAlgebraError : public Error {
public:
    LinearAlgebraError(const std::string& what, double time)
        : Error(what + " (t = " + std::to_string(time) + ")"), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Raised when an Euler step produces a non-finite state.
class SimulationDiverged : public Error {
public:
    SimulationDiverged(const std::string& what, std::size_t step)
        : Error(what + " at step " + std::to_string(step)), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Raised by the backward PDE stepper when the solution norm blows up.
class SolverError : public Error { public: using Error::Error; };

/// No window of the ladder certifies the requested Lipschitz bound.
class WindowNotFoundError : public Error { public: using Error::Error; };

class PartialEnsembleError : public Error {
public:
    PartialEnsembleError(const std::string& what, std::size_t completed)
        : Error(what + " (" + std::to_string(completed) + " paths completed)"),
          completed_(completed) {}
    std::size_t completed() const noexcept { return completed_; }

private:
    std::size_t completed_;
};

}  // namespace sdde
