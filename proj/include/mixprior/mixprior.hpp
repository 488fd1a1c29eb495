#pragma once

// umbrella header

#include "adversary.hpp"
#include "alphabet.hpp"
#include "bound.hpp"
#include "cover.hpp"
#include "digest.hpp"
#include "enumeration.hpp"
#include "errors.hpp"
#include "families.hpp"
#include "log_prob.hpp"
#include "loss.hpp"
#include "manifest.hpp"
#include "measure.hpp"
#include "mixture.hpp"
#include "model_class.hpp"
#include "prior.hpp"
#include "weights.hpp"
