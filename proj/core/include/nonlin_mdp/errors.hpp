#pragma once

#include <stdexcept>
#include <string>

namespace nonlin_mdp {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "Error"; }
};

#define NONLIN_MDP_DEFINE_ERROR(NAME)                                  \
    class NAME : public Error {                                        \
    public:                                                            \
        using Error::Error;                                            \
        const char* kind() const noexcept override { return #NAME; }   \
    }

NONLIN_MDP_DEFINE_ERROR(StochasticityError);
NONLIN_MDP_DEFINE_ERROR(WeightError);
NONLIN_MDP_DEFINE_ERROR(BoundError);
NONLIN_MDP_DEFINE_ERROR(NormError);
NONLIN_MDP_DEFINE_ERROR(ParamError);
NONLIN_MDP_DEFINE_ERROR(DivergenceError);
NONLIN_MDP_DEFINE_ERROR(NotConverged);
NONLIN_MDP_DEFINE_ERROR(CycleError);
NONLIN_MDP_DEFINE_ERROR(MonotonicityViolation);
NONLIN_MDP_DEFINE_ERROR(TreeTooLarge);
NONLIN_MDP_DEFINE_ERROR(GridError);
NONLIN_MDP_DEFINE_ERROR(MeanShockError);
NONLIN_MDP_DEFINE_ERROR(IoError);

#undef NONLIN_MDP_DEFINE_ERROR

} // namespace nonlin_mdp
