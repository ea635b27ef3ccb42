#pragma once

#include "qobesity/ed_oracle.hpp"
#include "qobesity/ellipsoid.hpp"
#include "qobesity/filtering.hpp"
#include "qobesity/io.hpp"
#include "qobesity/ising_thermo.hpp"
#include "qobesity/obesity.hpp"
#include "qobesity/qstate.hpp"
#include "qobesity/random.hpp"
#include "qobesity/scan.hpp"
