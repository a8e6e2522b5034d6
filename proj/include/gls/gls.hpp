#pragma once

#include "gls/dataset.hpp"
#include "gls/defaults.hpp"
#include "gls/lexicon.hpp"
#include "gls/metrics.hpp"
#include "gls/model.hpp"
#include "gls/rational.hpp"
#include "gls/report_parser.hpp"
#include "gls/smoothing.hpp"
#include "gls/sweep.hpp"
#include "gls/synthetic.hpp"
#include "gls/taxonomy.hpp"
#include "gls/train_io.hpp"
#include "gls/trainer.hpp"
#include "gls/synthetic_reports.hpp"
