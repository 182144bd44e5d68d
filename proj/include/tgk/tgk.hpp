#pragma once

#include "tgk/errors.hpp"
#include "tgk/specfun.hpp"
#include "tgk/quadrature.hpp"
#include "tgk/fraccalc.hpp"
#include "tgk/operators.hpp"
#include "tgk/solver_spectral.hpp"
#include "tgk/solver_fourier.hpp"
#include "tgk/oracle.hpp"
#include "tgk/ledger.hpp"
#include "tgk/verify.hpp"
#include "tgk/suite.hpp"
#include "tgk/scenario.hpp"
