#pragma once

#include "fujita/capacity.hpp"
#include "fujita/config.hpp"
#include "fujita/csv.hpp"
#include "fujita/errors.hpp"
#include "fujita/estimates.hpp"
#include "fujita/exponents.hpp"
#include "fujita/families.hpp"
#include "fujita/field.hpp"
#include "fujita/fft.hpp"
#include "fujita/grid.hpp"
#include "fujita/mild_solver.hpp"
#include "fujita/numerics.hpp"
#include "fujita/operator_core.hpp"
#include "fujita/sweep.hpp"
#include "fujita/verify.hpp"
