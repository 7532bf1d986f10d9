#pragma once

#include "provenance_atlas/aggregation.hpp"
#include "provenance_atlas/animation.hpp"
#include "provenance_atlas/atlas.hpp"
#include "provenance_atlas/bundling.hpp"
#include "provenance_atlas/csv.hpp"
#include "provenance_atlas/error.hpp"
#include "provenance_atlas/export.hpp"
#include "provenance_atlas/gazetteer.hpp"
#include "provenance_atlas/ingest.hpp"
#include "provenance_atlas/json_views.hpp"
#include "provenance_atlas/model.hpp"
#include "provenance_atlas/normalized.hpp"
#include "provenance_atlas/query.hpp"
#include "provenance_atlas/timeline.hpp"
