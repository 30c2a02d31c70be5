#pragma once

#include "sg2/axioms.hpp"
#include "sg2/error.hpp"
#include "sg2/eval.hpp"
#include "sg2/finite_model.hpp"
#include "sg2/integer.hpp"
#include "sg2/invariants.hpp"
#include "sg2/limit_model.hpp"
#include "sg2/semigroup.hpp"
#include "sg2/syntax.hpp"
#include "sg2/systems.hpp"
#include "sg2/transfer.hpp"
