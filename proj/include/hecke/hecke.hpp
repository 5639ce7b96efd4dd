#pragma once

#include "rep_ring.hpp"
#include "factorization.hpp"
#include "pole_calculus.hpp"
#include "moment_constants.hpp"
#include "density_optimizer.hpp"
#include "empirical.hpp"
