#pragma once

#include "complex.hpp"
#include "f2.hpp"
#include "grid.hpp"
#include "homology.hpp"
#include "maps.hpp"
#include "obstruction.hpp"
