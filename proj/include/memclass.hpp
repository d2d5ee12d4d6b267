#pragma once

// Umbrella header for the memclass toolkit.

#include "memclass/errors.hpp"
#include "memclass/forest.hpp"
#include "memclass/gboost.hpp"
#include "memclass/hyperparams.hpp"
#include "memclass/ingest.hpp"
#include "memclass/knn.hpp"
#include "memclass/linear_svm.hpp"
#include "memclass/logistic_regression.hpp"
#include "memclass/metrics.hpp"
#include "memclass/model.hpp"
#include "memclass/model_io.hpp"
#include "memclass/naive_bayes.hpp"
#include "memclass/pipeline.hpp"
#include "memclass/prepared.hpp"
#include "memclass/report.hpp"
#include "memclass/rng.hpp"
#include "memclass/synth.hpp"
#include "memclass/table.hpp"
#include "memclass/tree.hpp"
#include "memclass/util.hpp"
