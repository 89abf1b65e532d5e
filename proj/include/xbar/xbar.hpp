/*!
  \file xbar.hpp
  \brief Umbrella header
*/

#pragma once

#include "array_builder.hpp"
#include "cyclic_perm.hpp"
#include "io.hpp"
#include "netlist.hpp"
#include "pe_simulator.hpp"
#include "query_circuits.hpp"
