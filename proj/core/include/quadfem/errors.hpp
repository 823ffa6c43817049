#ifndef QUADFEM_ERRORS_HPP
#define QUADFEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quadfem {

/// Base class of everything thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

#define QUADFEM_DEFINE_ERROR(Name)                                            \
  class Name : public Error {                                                 \
  public:                                                                     \
    explicit Name(const std::string& what_arg) : Error(what_arg) {}           \
  }

// Geometry and meshing.
QUADFEM_DEFINE_ERROR(NonConvex);
QUADFEM_DEFINE_ERROR(Degenerate);
QUADFEM_DEFINE_ERROR(BadOrientation);
QUADFEM_DEFINE_ERROR(ParseError);
QUADFEM_DEFINE_ERROR(TopologyError);
QUADFEM_DEFINE_ERROR(PerturbationFailed);

// Elements and quadrature.
QUADFEM_DEFINE_ERROR(UnsupportedDegree);
QUADFEM_DEFINE_ERROR(IllConditioned);
QUADFEM_DEFINE_ERROR(SingularStep2);
QUADFEM_DEFINE_ERROR(PointOutsideCell);

// Solvers and analysis.
QUADFEM_DEFINE_ERROR(NotPositiveDefinite);
QUADFEM_DEFINE_ERROR(NoConvergence);
QUADFEM_DEFINE_ERROR(RankDeficient);
QUADFEM_DEFINE_ERROR(EigFailure);
QUADFEM_DEFINE_ERROR(IncompatibleMesh);
QUADFEM_DEFINE_ERROR(CheckFailed);

// Experiment driver.
QUADFEM_DEFINE_ERROR(ConfigError);
QUADFEM_DEFINE_ERROR(TooFewPoints);

#undef QUADFEM_DEFINE_ERROR

} // namespace quadfem

#endif
