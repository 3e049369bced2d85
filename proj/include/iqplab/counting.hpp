#pragma once

#include "iqplab/counting/approx_count.hpp"
#include "iqplab/counting/gf2_basis.hpp"
#include "iqplab/counting/oracle.hpp"
#include "iqplab/counting/predicate.hpp"
#include "iqplab/counting/randomized.hpp"
#include "iqplab/counting/stockmeyer.hpp"
