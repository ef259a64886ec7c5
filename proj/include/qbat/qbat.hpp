#pragma once

#include "qbat/adiabatic.hpp"
#include "qbat/config.hpp"
#include "qbat/csv.hpp"
#include "qbat/dynamics.hpp"
#include "qbat/errors.hpp"
#include "qbat/hamiltonian.hpp"
#include "qbat/matrix3.hpp"
#include "qbat/metrics.hpp"
#include "qbat/model.hpp"
#include "qbat/optimize.hpp"
#include "qbat/parallel.hpp"
#include "qbat/sweeps.hpp"
