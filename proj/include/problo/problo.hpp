#pragma once

#include "problo/bayes.hpp"
#include "problo/engine.hpp"
#include "problo/error.hpp"
#include "problo/kernel.hpp"
#include "problo/lang/parse.hpp"
#include "problo/lang/render.hpp"
#include "problo/lo.hpp"
#include "problo/multiset.hpp"
#include "problo/rational.hpp"
