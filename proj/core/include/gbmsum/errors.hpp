#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gbmsum {

// Bad argument outside an operation's domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Parameters for which the requested law does not exist (e.g. rho >= beta/2 for X_inf).
class InfeasibleParameters : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, std::vector<double> trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const std::vector<double>& delta_trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

// Payoff grows at least as fast as the power-law tail decays.
class DivergentExpectation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NoRoot : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Collects non-fatal numerical warnings. Pass nullptr to ignore them.
struct Diagnostics {
    std::vector<std::string> warnings;
    void warn(std::string msg) { warnings.push_back(std::move(msg)); }
    bool empty() const noexcept { return warnings.empty(); }
};

inline void warn(Diagnostics* d, std::string msg) {
    if (d) d->warn(std::move(msg));
}

}  // namespace gbmsum
