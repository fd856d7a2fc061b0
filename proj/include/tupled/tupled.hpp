#pragma once

#include "tupled/dsl.hpp"
#include "tupled/finite.hpp"
#include "tupled/hypotheses.hpp"
#include "tupled/product.hpp"
#include "tupled/solver.hpp"
#include "tupled/spaces.hpp"
#include "tupled/star_op.hpp"
