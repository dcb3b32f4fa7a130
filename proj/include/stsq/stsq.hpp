#pragma once

// Everything except the HTTP server (stsq/service.hpp), which pulls in cpp-httplib.

#include "stsq/analytics.hpp"
#include "stsq/api.hpp"
#include "stsq/core_model.hpp"
#include "stsq/error.hpp"
#include "stsq/evaluator.hpp"
#include "stsq/geo.hpp"
#include "stsq/ingest.hpp"
#include "stsq/query_dsl.hpp"
#include "stsq/query_model.hpp"
#include "stsq/sql_emitter.hpp"
#include "stsq/tasks.hpp"
