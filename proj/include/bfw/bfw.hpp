#pragma once

#include "bfw/errors.hpp"
#include "bfw/linalg.hpp"
#include "bfw/label.hpp"
#include "bfw/su2.hpp"
#include "bfw/point.hpp"
#include "bfw/group.hpp"
#include "bfw/weights.hpp"
#include "bfw/algebra.hpp"
#include "bfw/spectrum.hpp"
#include "bfw/calculus.hpp"
#include "bfw/io.hpp"
