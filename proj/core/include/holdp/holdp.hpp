#pragma once

#include "holdp/errors.hpp"
#include "holdp/eval.hpp"
#include "holdp/features.hpp"
#include "holdp/image.hpp"
#include "holdp/kirsch.hpp"
#include "holdp/parallel.hpp"
#include "holdp/patterns.hpp"
#include "holdp/synth.hpp"
