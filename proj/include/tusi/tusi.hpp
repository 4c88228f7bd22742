#pragma once

#include "tusi/certify.hpp"
#include "tusi/error.hpp"
#include "tusi/poly.hpp"
#include "tusi/reduction.hpp"
#include "tusi/seeding.hpp"
#include "tusi/solver.hpp"
