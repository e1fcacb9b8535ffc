#pragma once

#include "lattice.hpp"

namespace ncm {

// Central differences (f(x+h) - f(x-h)) / 2h on the periodic grid.
// All operators commute exactly, so div(curl v) = 0 and curl(grad f) = 0
// hold to round-off and laplacian = div(grad f) is an identity by
// construction (wide 2h stencil).

VectorField grad(const ScalarField& f);
ScalarField div(const VectorField& v);
VectorField curl(const VectorField& v);
ScalarField laplacian(const ScalarField& f);

} // namespace ncm
