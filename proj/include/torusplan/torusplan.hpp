// Copyright 2026 the torusplan authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "torusplan/attention_layouts.hpp"
#include "torusplan/collectives.hpp"
#include "torusplan/config_json.hpp"
#include "torusplan/cost_engine.hpp"
#include "torusplan/ffn_layouts.hpp"
#include "torusplan/model.hpp"
#include "torusplan/optimizer.hpp"
#include "torusplan/presets.hpp"
#include "torusplan/report.hpp"
