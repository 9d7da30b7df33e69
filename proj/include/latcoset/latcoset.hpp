#pragma once

#include "latcoset/constructions.hpp"
#include "latcoset/enumeration.hpp"
#include "latcoset/error.hpp"
#include "latcoset/integer_matrix.hpp"
#include "latcoset/io.hpp"
#include "latcoset/lattice.hpp"
#include "latcoset/simulator.hpp"
#include "latcoset/theta.hpp"
#include "latcoset/wiretap.hpp"
