#pragma once

#include "iqplab/experiments/adversary.hpp"
#include "iqplab/experiments/anticoncentration.hpp"
#include "iqplab/experiments/chain.hpp"
#include "iqplab/experiments/markov.hpp"
#include "iqplab/experiments/params.hpp"
#include "iqplab/experiments/report.hpp"
