#pragma once

#include "grid.hpp"
#include "linear_form.hpp"
#include "operators.hpp"
#include "closure.hpp"
#include "problems.hpp"
#include "solver.hpp"
#include "convergence.hpp"
