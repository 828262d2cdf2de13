#pragma once

#include <stdexcept>
#include <string>

namespace manakov {

/// Outcome of a time-stepping run.
enum class RunStatus {
    Completed,
    GuardTriggered,   // discrete H^1 norm crossed the configured radius
    NonConvergence,   // nonlinear fixed point hit its iteration cap
    Overflow,         // explicit Ito baseline exceeded its norm cap
    SolverFailure,    // block pivot underflow in the tridiagonal solve
};

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "completed";
        case RunStatus::GuardTriggered: return "guard";
        case RunStatus::NonConvergence: return "nonconvergence";
        case RunStatus::Overflow: return "overflow";
        case RunStatus::SolverFailure: return "solver_failure";
    }
    return "unknown";
}

/// Thrown by a single scheme step; evolve() converts it into a RunRecord status.
class StepError : public std::runtime_error {
  public:
    StepError(RunStatus status, const std::string& what)
        : std::runtime_error(what), status_(status) {}
    RunStatus status() const { return status_; }

  private:
    RunStatus status_;
};

}  // namespace manakov
