#pragma once

#include "hype/clusters.hpp"
#include "hype/config.hpp"
#include "hype/csv.hpp"
#include "hype/date.hpp"
#include "hype/error.hpp"
#include "hype/index.hpp"
#include "hype/ingest.hpp"
#include "hype/normality.hpp"
#include "hype/pipeline.hpp"
#include "hype/series.hpp"
#include "hype/signals.hpp"
#include "hype/special.hpp"
#include "hype/stats.hpp"
#include "hype/synth.hpp"
