#pragma once
// Everything.

#include "core.hpp"
#include "theta.hpp"
#include "gamma.hpp"
#include "quadrature.hpp"
#include "integrals.hpp"
#include "biorthogonality.hpp"
#include "sklyanin.hpp"
#include "heun_bethe.hpp"
#include "sampling.hpp"
#include "report.hpp"
#include "checks.hpp"
#include "suite.hpp"
