#pragma once

#include "celkit/concept.hpp"
#include "celkit/drill.hpp"
#include "celkit/embeddings.hpp"
#include "celkit/errors.hpp"
#include "celkit/eval.hpp"
#include "celkit/heuristics.hpp"
#include "celkit/individual_set.hpp"
#include "celkit/kb.hpp"
#include "celkit/lpgen.hpp"
#include "celkit/parser.hpp"
#include "celkit/qnet.hpp"
#include "celkit/refinement.hpp"
#include "celkit/rng.hpp"
#include "celkit/search.hpp"
