#pragma once

#include <stdexcept>
#include <string>

namespace felab
{

/// Root of all errors raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define FELAB_DECLARE_EXCEPTION(Name)                                          \
  class Name : public Error                                                    \
  {                                                                            \
  public:                                                                      \
    explicit Name(const std::string &what)                                     \
      : Error(std::string(#Name ": ") + what)                                  \
    {}                                                                         \
  }

// geometry
FELAB_DECLARE_EXCEPTION(SingularTensor);
FELAB_DECLARE_EXCEPTION(WeightError);
FELAB_DECLARE_EXCEPTION(DegenerateDirection);
FELAB_DECLARE_EXCEPTION(ChartError);

// mesh
FELAB_DECLARE_EXCEPTION(BadDomain);
FELAB_DECLARE_EXCEPTION(NotActive);
FELAB_DECLARE_EXCEPTION(MeshFormatError);

// finite elements and evaluation
FELAB_DECLARE_EXCEPTION(IndexError);
FELAB_DECLARE_EXCEPTION(DomainError);
FELAB_DECLARE_EXCEPTION(NotInitialized);
FELAB_DECLARE_EXCEPTION(MissingUpdateFlag);

// dofs and linear algebra
FELAB_DECLARE_EXCEPTION(NotDistributed);
FELAB_DECLARE_EXCEPTION(ConstraintCycle);
FELAB_DECLARE_EXCEPTION(SparsityMiss);
FELAB_DECLARE_EXCEPTION(LengthMismatch);
FELAB_DECLARE_EXCEPTION(MaxIterations);
FELAB_DECLARE_EXCEPTION(BreakdownError);
FELAB_DECLARE_EXCEPTION(ZeroDiagonal);

// multigrid
FELAB_DECLARE_EXCEPTION(NotGloballyRefined);

// application
FELAB_DECLARE_EXCEPTION(ConfigError);
FELAB_DECLARE_EXCEPTION(IOError);

#undef FELAB_DECLARE_EXCEPTION

} // namespace felab
