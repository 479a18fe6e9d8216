#pragma once

#include "hlinfer/cli.hpp"
#include "hlinfer/corpus.hpp"
#include "hlinfer/errors.hpp"
#include "hlinfer/evaluation.hpp"
#include "hlinfer/io.hpp"
#include "hlinfer/lexicon.hpp"
#include "hlinfer/morphology.hpp"
#include "hlinfer/parse_ingest.hpp"
#include "hlinfer/text.hpp"
#include "hlinfer/trigger_engine.hpp"
