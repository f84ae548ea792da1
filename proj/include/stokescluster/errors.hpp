#pragma once

#include <stdexcept>
#include <string>

namespace stokescluster {

/// Base class for all library failures. `name()` is the stable identifier
/// surfaced on the CLI's stderr; `what()` adds context.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& msg)
        : std::runtime_error(name + ": " + msg), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define STOKESCLUSTER_DEFINE_ERROR(NAME)                                 \
    class NAME : public Error {                                          \
    public:                                                              \
        explicit NAME(const std::string& msg) : Error(#NAME, msg) {}     \
    };

STOKESCLUSTER_DEFINE_ERROR(DiscriminantViolation)
STOKESCLUSTER_DEFINE_ERROR(DimensionMismatch)
STOKESCLUSTER_DEFINE_ERROR(ConvergenceFailure)
STOKESCLUSTER_DEFINE_ERROR(BranchTrackingFailure)
STOKESCLUSTER_DEFINE_ERROR(StartTooCloseToZero)
STOKESCLUSTER_DEFINE_ERROR(AmbiguousStructure)
STOKESCLUSTER_DEFINE_ERROR(NotSaddleFree)
STOKESCLUSTER_DEFINE_ERROR(StructureInconsistent)
STOKESCLUSTER_DEFINE_ERROR(GenericityViolation)
STOKESCLUSTER_DEFINE_ERROR(ConvergenceCheckFailure)
STOKESCLUSTER_DEFINE_ERROR(NoConvergence)
STOKESCLUSTER_DEFINE_ERROR(SizeLimit)
STOKESCLUSTER_DEFINE_ERROR(ArcNotInTriangulation)
STOKESCLUSTER_DEFINE_ERROR(NonGeneric)
STOKESCLUSTER_DEFINE_ERROR(TransitionPole)
STOKESCLUSTER_DEFINE_ERROR(StepTooLarge)

#undef STOKESCLUSTER_DEFINE_ERROR

} // namespace stokescluster
