// Copyright 2026 The omnipano Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header for the geometry library (no I/O dependencies).

#pragma once

#include "omnipano/box_geometry.hpp"
#include "omnipano/camera_model.hpp"
#include "omnipano/errors.hpp"
#include "omnipano/evaluation.hpp"
#include "omnipano/geometry_analysis.hpp"
#include "omnipano/image.hpp"
#include "omnipano/localization.hpp"
#include "omnipano/panorama_remap.hpp"
#include "omnipano/pdat_tiling.hpp"
#include "omnipano/significance_scaling.hpp"
