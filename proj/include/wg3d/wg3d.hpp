// Umbrella header for the lowest-order simplified weak Galerkin solver.
#pragma once

#include "wg3d/mesh.hpp"
#include "wg3d/quadrature.hpp"
#include "wg3d/local_ops.hpp"
#include "wg3d/expression.hpp"
#include "wg3d/problems.hpp"
#include "wg3d/assembly.hpp"
#include "wg3d/solver.hpp"
#include "wg3d/errors.hpp"
#include "wg3d/study.hpp"
