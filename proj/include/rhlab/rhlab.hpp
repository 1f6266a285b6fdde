#pragma once

#include "rhlab/analytic.hpp"
#include "rhlab/checkpoint.hpp"
#include "rhlab/errors.hpp"
#include "rhlab/mertens.hpp"
#include "rhlab/quadrature.hpp"
#include "rhlab/random.hpp"
#include "rhlab/sieve.hpp"
#include "rhlab/stochastic.hpp"
