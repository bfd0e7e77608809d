/*
   Copyright 2026 The m2mpower Authors

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

#include <stdexcept>
#include <string>

namespace m2m {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller broke a structural precondition (mismatched lengths, empty input).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// CDMA load at or beyond the pole: equal-power control has no solution.
class PoleExceeded : public std::runtime_error {
public:
    PoleExceeded(int k_simultaneous, int pole)
        : std::runtime_error("CDMA load " + std::to_string(k_simultaneous) +
                             " exceeds pole capacity " + std::to_string(pole)),
          k_(k_simultaneous), pole_(pole) {}
    int load() const noexcept { return k_; }
    int pole() const noexcept { return pole_; }

private:
    int k_;
    int pole_;
};

/// No configuration of a strategy meets its outage target.
class Infeasible : public std::runtime_error {
public:
    Infeasible(const std::string& what, double best_outage)
        : std::runtime_error(what), best_outage_(best_outage) {}
    double best_outage() const noexcept { return best_outage_; }

private:
    double best_outage_;
};

class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

inline void require_domain(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

inline void require_contract(bool ok, const char* what) {
    if (!ok) throw ContractError(what);
}

}  // namespace m2m
