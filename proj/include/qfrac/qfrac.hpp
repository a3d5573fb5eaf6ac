// Umbrella header.

#pragma once

#include "qfrac/linalg.hpp"
#include "qfrac/model.hpp"
#include "qfrac/lmi.hpp"
#include "qfrac/checks.hpp"
#include "qfrac/solver.hpp"
#include "qfrac/oracle.hpp"
#include "qfrac/io.hpp"
#include "qfrac/corpus.hpp"
